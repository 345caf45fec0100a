#include "cartan/abnormal.hpp"

#include <cmath>
#include <stdexcept>

namespace cartan {

Point abnormal_point(const Control& u, double t) {
  if (std::abs(u.norm_inf() - 1.0) > 1e-12) {
    throw std::invalid_argument("abnormal_point: control must lie on the boundary of the unit square");
  }
  if (!(t >= 0.0)) throw std::invalid_argument("abnormal_point: time must be nonnegative");
  const double r2 = u.u1 * u.u1 + u.u2 * u.u2;
  const double t3 = t * t * t;
  return {u.u1 * t, u.u2 * t, 0.0, u.u2 * r2 / 6.0 * t3, -u.u1 * r2 / 6.0 * t3};
}

Eigen::Vector3d abnormal_residual(const Point& q) {
  const double r2 = q.x() * q.x() + q.y() * q.y();
  return {q.z(), q.v() - q.y() * r2 / 6.0, q.w() + q.x() * r2 / 6.0};
}

}  // namespace cartan
