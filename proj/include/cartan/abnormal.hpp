// Abnormal trajectories: one-parameter subgroups tangent to span(X1, X2).

#ifndef CARTAN_ABNORMAL_HPP
#define CARTAN_ABNORMAL_HPP

#include "cartan/types.hpp"

namespace cartan {

/// Endpoint at time t of the constant control u with |u|_inf = 1:
/// (u1 t, u2 t, 0, u2 (u1^2+u2^2) t^3 / 6, -u1 (u1^2+u2^2) t^3 / 6).
Point abnormal_point(const Control& u, double t);

/// (z, v - y (x^2+y^2)/6, w + x (x^2+y^2)/6); all zero iff q lies on the
/// abnormal manifold.
Eigen::Vector3d abnormal_residual(const Point& q);

}  // namespace cartan

#endif  // CARTAN_ABNORMAL_HPP
