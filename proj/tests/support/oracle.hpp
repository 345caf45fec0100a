// Reference integrators written straight from the vector-field formulas,
// sharing no code with the library. Used as independent oracles.

#ifndef CARTAN_TESTS_ORACLE_HPP
#define CARTAN_TESTS_ORACLE_HPP

#include <array>
#include <cmath>
#include <functional>
#include <random>

namespace oracle {

// (h1..h5, x, y, z, v, w)
using State = std::array<double, 10>;

inline State rhs(const State& s, double u1, double u2) {
  const double x = s[5];
  const double y = s[6];
  const double r2 = x * x + y * y;
  State d{};
  d[0] = -u2 * s[2];
  d[1] = u1 * s[2];
  d[2] = u1 * s[3] + u2 * s[4];
  d[5] = u1;
  d[6] = u2;
  d[7] = -u1 * y / 2 + u2 * x / 2;
  d[8] = u2 * r2 / 2;
  d[9] = -u1 * r2 / 2;
  return d;
}

inline State axpy(const State& a, double h, const State& b) {
  State r;
  for (int i = 0; i < 10; ++i) r[i] = a[i] + h * b[i];
  return r;
}

inline State rk4_step(const State& s, double u1, double u2, double h) {
  const State k1 = rhs(s, u1, u2);
  const State k2 = rhs(axpy(s, h / 2, k1), u1, u2);
  const State k3 = rhs(axpy(s, h / 2, k2), u1, u2);
  const State k4 = rhs(axpy(s, h, k3), u1, u2);
  State r;
  for (int i = 0; i < 10; ++i) r[i] = s[i] + h / 6 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
  return r;
}

/// Constant control over [0, T] with n steps.
inline State constant(State s, double u1, double u2, double T, int n) {
  for (int k = 0; k < n; ++k) s = rk4_step(s, u1, u2, T / n);
  return s;
}

inline double sgn(double v) { return (v > 0) - (v < 0); }

/// Bang-bang feedback u = (sgn h1, sgn h2). Steps across a sign change are
/// shortened by bisection so that no step straddles a switch.
inline State feedback(State s, double T, double dt) {
  double t = 0;
  while (T - t > 1e-14) {
    const double u1 = sgn(s[0]);
    const double u2 = sgn(s[1]);
    double h = std::min(dt, T - t);
    auto flips = [&](const State& e) { return sgn(e[0]) * u1 < 0 || sgn(e[1]) * u2 < 0; };
    State e = rk4_step(s, u1, u2, h);
    if (flips(e)) {
      double lo = 0;
      double hi = h;
      for (int k = 0; k < 80; ++k) {
        const double mid = (lo + hi) / 2;
        if (flips(rk4_step(s, u1, u2, mid))) {
          hi = mid;
        } else {
          lo = mid;
        }
      }
      h = hi;
      e = rk4_step(s, u1, u2, h);
      // land exactly on the switching line of whichever component flipped
      if (sgn(e[0]) * u1 < 0) e[0] = 0;
      if (sgn(e[1]) * u2 < 0) e[1] = 0;
      // a component sitting on zero takes the sign it is moving towards
      if (e[0] == 0) e[0] = -u2 * e[2] * 1e-300;
      if (e[1] == 0) e[1] = u1 * e[2] * 1e-300;
    }
    s = e;
    t += h;
  }
  return s;
}

inline double energy(const State& s) { return s[2] * s[2] / 2 + s[0] * s[4] - s[1] * s[3]; }

/// Composite midpoint rule; never evaluates f at the endpoints.
inline double midpoint(const std::function<double(double)>& f, double a, double b, int n) {
  const double h = (b - a) / n;
  double acc = 0;
  for (int k = 0; k < n; ++k) acc += f(a + (k + 0.5) * h);
  return acc * h;
}

}  // namespace oracle

#endif  // CARTAN_TESTS_ORACLE_HPP
