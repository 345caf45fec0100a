// Coordinate model of the Cartan group: left-invariant frame, structure
// constants, Casimirs and the dilation / reflection symmetries.

#ifndef CARTAN_CARTAN_CORE_HPP
#define CARTAN_CARTAN_CORE_HPP

#include "cartan/types.hpp"

#include <stdexcept>
#include <string>

namespace cartan {

/// Frame field X_i (i = 1..5) evaluated at q.
template <typename Scalar>
Vector5<Scalar> vector_field(int i, const BasicPoint<Scalar>& q) {
  const Scalar x = q.x();
  const Scalar y = q.y();
  const Scalar half_r2 = (x * x + y * y) / Scalar(2);
  Vector5<Scalar> f = Vector5<Scalar>::Zero();
  switch (i) {
    case 1:
      f << Scalar(1), Scalar(0), -y / Scalar(2), Scalar(0), -half_r2;
      break;
    case 2:
      f << Scalar(0), Scalar(1), x / Scalar(2), half_r2, Scalar(0);
      break;
    case 3:
      f << Scalar(0), Scalar(0), Scalar(1), x, y;
      break;
    case 4:
      f(3) = Scalar(1);
      break;
    case 5:
      f(4) = Scalar(1);
      break;
    default:
      throw std::out_of_range("vector_field: index must be in 1..5, got " + std::to_string(i));
  }
  return f;
}

/// Horizontal velocity u1 X1(q) + u2 X2(q).
template <typename Scalar>
Vector5<Scalar> horizontal_velocity(const BasicPoint<Scalar>& q, const BasicControl<Scalar>& u) {
  return u.u1 * vector_field(1, q) + u.u2 * vector_field(2, q);
}

/// Right-hand side of [X_1,X_2] = X_3, [X_1,X_3] = X_4, [X_2,X_3] = X_5
/// (antisymmetric, all other brackets vanish), evaluated at q.
Vec5 bracket_from_table(int i, int j, const Point& q);

/// [X_i, X_j](q) by central differences of the field Jacobians.
Vec5 bracket_finite_difference(int i, int j, const Point& q, double step);

/// Finite-difference bracket minus the tabulated one. Exactly zero for i == j.
Vec5 bracket_residual(int i, int j, const Point& q, double step = 1e-4);

CasimirTriple casimirs(const Covector& h);

inline double energy(const Covector& h) { return casimirs(h).energy; }

/// (x, y, z, v, w) -> (T x, T y, T^2 z, T^3 v, T^3 w).
template <typename Scalar>
BasicPoint<Scalar> dilation(const BasicPoint<Scalar>& q, Scalar T) {
  if (!(T > Scalar(0))) throw std::invalid_argument("dilation: factor must be positive");
  const Scalar T2 = T * T;
  const Scalar T3 = T2 * T;
  return BasicPoint<Scalar>(T * q.x(), T * q.y(), T2 * q.z(), T3 * q.v(), T3 * q.w());
}

/// Reflections of the state space:
///   k = 1: (-x,  y, -z,  v, -w)   pairs with u1 -> -u1
///   k = 2: ( x, -y, -z, -v,  w)   pairs with u2 -> -u2
///   k = 3: ( y,  x, -z, -w, -v)   pairs with u1 <-> u2
template <typename Scalar>
BasicPoint<Scalar> state_symmetry(int k, const BasicPoint<Scalar>& q) {
  switch (k) {
    case 1:
      return BasicPoint<Scalar>(-q.x(), q.y(), -q.z(), q.v(), -q.w());
    case 2:
      return BasicPoint<Scalar>(q.x(), -q.y(), -q.z(), -q.v(), q.w());
    case 3:
      return BasicPoint<Scalar>(q.y(), q.x(), -q.z(), -q.w(), -q.v());
    default:
      throw std::out_of_range("state_symmetry: index must be in 1..3, got " + std::to_string(k));
  }
}

/// Control transformation that accompanies state_symmetry(k, .).
Control control_symmetry(int k, const Control& u);

}  // namespace cartan

#endif  // CARTAN_CARTAN_CORE_HPP
