#include "cartan/cartan_core.hpp"

namespace cartan {

namespace {

void check_index(int i, const char* what) {
  if (i < 1 || i > 5) {
    throw std::out_of_range(std::string(what) + ": index must be in 1..5, got " + std::to_string(i));
  }
}

// Column k holds d X_i / d q_k.
Eigen::Matrix<double, 5, 5> field_jacobian(int i, const Point& q, double step) {
  Eigen::Matrix<double, 5, 5> J;
  for (int k = 0; k < 5; ++k) {
    Vec5 plus = q.coords();
    Vec5 minus = q.coords();
    plus(k) += step;
    minus(k) -= step;
    J.col(k) = (vector_field(i, Point(plus)) - vector_field(i, Point(minus))) / (2.0 * step);
  }
  return J;
}

}  // namespace

Vec5 bracket_from_table(int i, int j, const Point& q) {
  check_index(i, "bracket_from_table");
  check_index(j, "bracket_from_table");
  if (i == j) return Vec5::Zero();
  if (i > j) return -bracket_from_table(j, i, q);
  if (i == 1 && j == 2) return vector_field(3, q);
  if (i == 1 && j == 3) return vector_field(4, q);
  if (i == 2 && j == 3) return vector_field(5, q);
  return Vec5::Zero();
}

Vec5 bracket_finite_difference(int i, int j, const Point& q, double step) {
  check_index(i, "bracket_finite_difference");
  check_index(j, "bracket_finite_difference");
  if (!(step > 0.0)) throw std::invalid_argument("bracket_finite_difference: step must be positive");
  // [X, Y]^k = X^l d_l Y^k - Y^l d_l X^k
  return field_jacobian(j, q, step) * vector_field(i, q) - field_jacobian(i, q, step) * vector_field(j, q);
}

Vec5 bracket_residual(int i, int j, const Point& q, double step) {
  check_index(i, "bracket_residual");
  check_index(j, "bracket_residual");
  if (i == j) return Vec5::Zero();
  return bracket_finite_difference(i, j, q, step) - bracket_from_table(i, j, q);
}

CasimirTriple casimirs(const Covector& h) {
  return {h.h4(), h.h5(), 0.5 * h.h3() * h.h3() + h.h1() * h.h5() - h.h2() * h.h4()};
}

Control control_symmetry(int k, const Control& u) {
  switch (k) {
    case 1:
      return {-u.u1, u.u2};
    case 2:
      return {u.u1, -u.u2};
    case 3:
      return {u.u2, u.u1};
    default:
      throw std::out_of_range("control_symmetry: index must be in 1..3, got " + std::to_string(k));
  }
}

}  // namespace cartan
