// Domain value types for the Cartan group model M = R^5 and its dual.

#ifndef CARTAN_TYPES_HPP
#define CARTAN_TYPES_HPP

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

namespace cartan {

template <typename Scalar>
using Vector5 = Eigen::Matrix<Scalar, 5, 1>;

using Vec5 = Vector5<double>;
using Vec10 = Eigen::Matrix<double, 10, 1>;

/// Group element (x, y, z, v, w).
template <typename Scalar>
class BasicPoint {
 public:
  BasicPoint() : c_(Vector5<Scalar>::Zero()) {}
  BasicPoint(Scalar x, Scalar y, Scalar z, Scalar v, Scalar w) { c_ << x, y, z, v, w; }
  explicit BasicPoint(const Vector5<Scalar>& coords) : c_(coords) {}

  static BasicPoint origin() { return BasicPoint(); }

  Scalar x() const { return c_(0); }
  Scalar y() const { return c_(1); }
  Scalar z() const { return c_(2); }
  Scalar v() const { return c_(3); }
  Scalar w() const { return c_(4); }

  const Vector5<Scalar>& coords() const { return c_; }
  Vector5<Scalar>& coords() { return c_; }

  bool is_finite() const { return c_.allFinite(); }

  friend bool operator==(const BasicPoint& a, const BasicPoint& b) { return a.c_ == b.c_; }

 private:
  Vector5<Scalar> c_;
};

/// Values h_i = <lambda, X_i> of a covector in the left trivialization.
template <typename Scalar>
class BasicCovector {
 public:
  BasicCovector() : c_(Vector5<Scalar>::Zero()) {}
  BasicCovector(Scalar h1, Scalar h2, Scalar h3, Scalar h4, Scalar h5) { c_ << h1, h2, h3, h4, h5; }
  explicit BasicCovector(const Vector5<Scalar>& comps) : c_(comps) {}

  Scalar h1() const { return c_(0); }
  Scalar h2() const { return c_(1); }
  Scalar h3() const { return c_(2); }
  Scalar h4() const { return c_(3); }
  Scalar h5() const { return c_(4); }

  Scalar& h1() { return c_(0); }
  Scalar& h2() { return c_(1); }
  Scalar& h3() { return c_(2); }

  const Vector5<Scalar>& components() const { return c_; }
  Vector5<Scalar>& components() { return c_; }

  bool is_finite() const { return c_.allFinite(); }

  friend bool operator==(const BasicCovector& a, const BasicCovector& b) { return a.c_ == b.c_; }

 private:
  Vector5<Scalar> c_;
};

/// Control value (u1, u2); admissible iff it lies in the unit square U.
template <typename Scalar>
struct BasicControl {
  Scalar u1{0};
  Scalar u2{0};

  Scalar norm_inf() const {
    using std::abs;
    return std::max(abs(u1), abs(u2));
  }
  bool admissible(Scalar tol = Scalar(0)) const { return norm_inf() <= Scalar(1) + tol; }

  friend bool operator==(const BasicControl& a, const BasicControl& b) {
    return a.u1 == b.u1 && a.u2 == b.u2;
  }
};

/// The three Casimirs h4, h5 and E = h3^2/2 + h1 h5 - h2 h4.
struct CasimirTriple {
  double h4{0};
  double h5{0};
  double energy{0};
};

using Point = BasicPoint<double>;
using Covector = BasicCovector<double>;
using Control = BasicControl<double>;

/// sgn with sgn(0) = 0.
template <typename Scalar>
constexpr int sign_of(Scalar v) {
  return (Scalar(0) < v) - (v < Scalar(0));
}

}  // namespace cartan

#endif  // CARTAN_TYPES_HPP
