#include "cartan/singular.hpp"

#include "cartan/attainable.hpp"
#include "cartan/bangbang.hpp"
#include "cartan/cartan_core.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <random>

namespace cartan {

double singular_tolerance(const Covector& h) { return 1e-9 * std::max(1.0, h.components().norm()); }

SingularArcSpec singular_control(SingularAxis axis, const Covector& h, double tol) {
  if (!(tol >= 0.0)) throw std::invalid_argument("singular_control: tolerance must be nonnegative");
  const bool h1_axis = axis == SingularAxis::H1;
  const double vanishing = h1_axis ? h.h1() : h.h2();
  const double other = h1_axis ? h.h2() : h.h1();
  if (std::abs(vanishing) > tol) throw std::domain_error("singular_control: switching component does not vanish");
  if (std::abs(other) <= tol) throw std::domain_error("singular_control: complementary component vanishes too");
  if (std::abs(h.h3()) > tol) throw std::domain_error("singular_control: h3 does not vanish");

  const int s = sign_of(other);
  if (std::abs(h.h4()) <= tol && std::abs(h.h5()) <= tol) return {axis, SingularCase::A, s, 0.0};
  // h1 axis: u1 h4 + s2 h5 = 0; h2 axis: s1 h4 + u2 h5 = 0
  const double denom = h1_axis ? h.h4() : h.h5();
  const double numer = h1_axis ? h.h5() : h.h4();
  if (std::abs(denom) <= tol) throw std::domain_error("singular_control: singular value is unbounded");
  const double u = -s * numer / denom;
  if (std::abs(u) > 1.0 + tol) {
    throw std::domain_error("singular_control: singular value " + std::to_string(u) + " is not admissible");
  }
  return {axis, SingularCase::B, s, std::clamp(u, -1.0, 1.0)};
}

SingularArcSpec singular_control(SingularAxis axis, const Covector& h) {
  return singular_control(axis, h, singular_tolerance(h));
}

// ---------------------------------------------------------------------------

NormalizedAdjoint normalize_adjoint(const Covector& h) {
  const double a = std::abs(h.h4());
  if (a == 0.0) throw std::domain_error("normalize_adjoint: h4 vanishes");
  NormalizedAdjoint n{h.h1() / a, h.h3() / a, static_cast<double>(sign_of(h.h4())), h.h5() / a};
  if (n.hf5 < 0.0) {
    n.hf1 = -n.hf1;
    n.hf3 = -n.hf3;
    n.hf5 = -n.hf5;
  }
  return n;
}

Eigen::Vector2d reduced_rhs(const NormalizedAdjoint& n) {
  if (n.hf1 == 0.0) {
    throw std::domain_error("reduced_rhs: hf1 = 0 lies on the switching line; use the singular continuation");
  }
  return {-n.hf3, n.hf4 * sign_of(n.hf1) + n.hf5};
}

double reduced_first_integral(const NormalizedAdjoint& n) {
  return 0.5 * n.hf3 * n.hf3 + n.hf5 * n.hf1 + n.hf4 * std::abs(n.hf1);
}

std::string to_string(const RegionLabel& label) {
  std::string s;
  switch (label.tag) {
    case RegionTag::C0:
      s = "C0";
      break;
    case RegionTag::C01:
      s = "C01";
      break;
    case RegionTag::C1:
      s = "C1";
      break;
    case RegionTag::C1Inf:
      s = "C1inf";
      break;
  }
  return s + (label.sign > 0 ? "+" : "-");
}

RegionLabel classify_adjoint_region(const NormalizedAdjoint& n) {
  if (n.hf4 != 1.0 && n.hf4 != -1.0) throw std::invalid_argument("classify_adjoint_region: hf4 must be +-1");
  if (n.hf5 < 0.0) throw std::invalid_argument("classify_adjoint_region: hf5 must be nonnegative");
  constexpr double tol = 1e-12;
  const int sign = n.hf4 > 0.0 ? 1 : -1;
  if (n.hf5 <= tol) return {RegionTag::C0, sign};
  if (std::abs(n.hf5 - 1.0) <= tol) return {RegionTag::C1, sign};
  return {n.hf5 < 1.0 ? RegionTag::C01 : RegionTag::C1Inf, sign};
}

namespace {

// Increment of one RK4 step of the branch sgn(hf1) = side.
Eigen::Vector2d reduced_increment(const Eigen::Vector2d& y, double side, double hf4, double hf5, double h) {
  auto f = [&](const Eigen::Vector2d& s) { return Eigen::Vector2d(-s(1), hf4 * side + hf5); };
  const Eigen::Vector2d k1 = f(y);
  const Eigen::Vector2d k2 = f(y + 0.5 * h * k1);
  const Eigen::Vector2d k3 = f(y + 0.5 * h * k2);
  const Eigen::Vector2d k4 = f(y + h * k3);
  return (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

Eigen::Vector2d reduced_step(const Eigen::Vector2d& y, double side, double hf4, double hf5, double h) {
  return y + reduced_increment(y, side, hf4, hf5, h);
}

}  // namespace

ReducedTrajectory integrate_reduced(const NormalizedAdjoint& n0, double T, double dt, int record_stride) {
  if (!(T > 0.0) || !(dt > 0.0)) throw std::invalid_argument("integrate_reduced: T and dt must be positive");
  if (n0.hf4 != 1.0 && n0.hf4 != -1.0) throw std::invalid_argument("integrate_reduced: hf4 must be +-1");
  const int stride = std::max(1, record_stride);
  ReducedTrajectory out;
  Eigen::Vector2d y(n0.hf1, n0.hf3);
  // Kahan compensation of the state sum; the per-side flow is polynomial, so
  // RK4 is exact up to rounding and the rounding is what would drift.
  Eigen::Vector2d carry = Eigen::Vector2d::Zero();
  double t = 0.0;
  out.samples.push_back({t, y(0), y(1)});

  // side of the switching line the orbit is about to occupy
  auto side_at = [&](const Eigen::Vector2d& s) -> double {
    if (s(0) != 0.0) return sign_of(s(0));
    return sign_of(-s(1));
  };
  // The origin is a junction with the singular arc only when the singular
  // value -hf5 / hf4 is admissible; otherwise the orbit passes to hf1 < 0.
  const bool can_rest = n0.hf5 <= 1.0 + 1e-12;
  auto leave_origin = [&]() -> double { return can_rest ? 0.0 : -1.0; };
  double side = side_at(y);
  if (y(0) == 0.0 && y(1) == 0.0) side = leave_origin();
  long counter = 0;
  while (T - t > 1e-15 * std::max(1.0, T)) {
    if (side == 0.0) {
      out.singular_arc = true;
      out.samples.push_back({T, 0.0, 0.0});
      return out;
    }
    const double h = std::min(dt, T - t);
    const double accel = n0.hf4 * side + n0.hf5;

    // Tangential arrival at the origin: hf3 is linear, so its zero inside the
    // step is exact; hf1 vanishing there too means the orbit meets (0, 0).
    if (accel != 0.0 && y(1) != 0.0) {
      const double tau = -y(1) / accel;
      if (tau > 0.0 && tau <= h) {
        const double hf1_tau = y(0) - y(1) * tau - 0.5 * accel * tau * tau;
        if (std::abs(hf1_tau) <= 1e-12 * std::max(1.0, std::abs(y(0)))) {
          t += tau;
          y.setZero();
          carry.setZero();
          out.samples.push_back({t, 0.0, 0.0});
          side = leave_origin();
          continue;
        }
      }
    }

    const Eigen::Vector2d inc = reduced_increment(y, side, n0.hf4, n0.hf5, h) - carry;
    const Eigen::Vector2d y_end = y + inc;
    if (side * y_end(0) >= 0.0) {
      carry = (y_end - y) - inc;
      y = y_end;
      t += h;
      if (++counter % stride == 0 || T - t <= 1e-15 * std::max(1.0, T)) out.samples.push_back({t, y(0), y(1)});
      continue;
    }
    double lo = 0.0;
    double hi = h;
    for (int k = 0; k < 200 && hi - lo > 1e-15 * std::max(1.0, t); ++k) {
      const double mid = 0.5 * (lo + hi);
      if (side * reduced_step(y, side, n0.hf4, n0.hf5, mid)(0) < 0.0) {
        hi = mid;
      } else {
        lo = mid;
      }
    }
    y = reduced_step(y, side, n0.hf4, n0.hf5, hi);
    t += hi;
    y(0) = 0.0;
    carry.setZero();
    out.crossing_times.push_back(t);
    out.samples.push_back({t, y(0), y(1)});
    if (std::abs(y(1)) <= 1e-14) {
      y(1) = 0.0;
      side = leave_origin();
    } else {
      side = sign_of(-y(1));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

PiecewiseControl boundary_control_type1(const std::array<double, 3>& values, const std::array<double, 3>& durations) {
  if (std::abs(values[0]) != 1.0 || std::abs(values[2]) != 1.0) {
    throw std::invalid_argument("boundary_control_type1: outer values must be +-1");
  }
  if (!(std::abs(values[1]) <= 1.0)) throw std::invalid_argument("boundary_control_type1: middle value outside [-1, 1]");
  std::vector<ControlSegment> segs;
  for (int k = 0; k < 3; ++k) {
    if (!(durations[k] >= 0.0) || !std::isfinite(durations[k])) {
      throw std::invalid_argument("boundary_control_type1: durations must be nonnegative");
    }
    if (durations[k] > 0.0) segs.push_back({{values[k], 1.0}, durations[k]});
  }
  if (segs.empty()) throw std::invalid_argument("boundary_control_type1: total duration must be positive");
  return PiecewiseControl(std::move(segs));
}

PiecewiseControl alternating_control(double first_value, const std::vector<double>& d) {
  if (std::abs(first_value) != 1.0) throw std::invalid_argument("alternating_control: first value must be +-1");
  if (d.size() < 4) throw std::invalid_argument("alternating_control: need durations Tb, T1, T2, ..., Te");
  for (double v : d) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw std::invalid_argument("alternating_control: negative duration");
  }
  const double Tb = d.front();
  const double Te = d.back();
  const double T1 = d[1];
  const double T2 = d[2];
  if (!(Tb > 0.0)) throw std::invalid_argument("alternating_control: requires Tb > 0");
  if (!(T1 > 0.0)) throw std::invalid_argument("alternating_control: requires T1 > 0");
  if (Tb > T2) throw std::invalid_argument("alternating_control: requires Tb <= T2");
  const std::size_t middle = d.size() - 2;
  for (std::size_t k = 0; k < middle; ++k) {
    const double expected = (k % 2 == 0) ? T1 : T2;
    if (std::abs(d[k + 1] - expected) > 1e-12 * std::max(1.0, expected)) {
      throw std::invalid_argument("alternating_control: inner durations must alternate T1, T2");
    }
  }
  const double bound = ((middle - 1) % 2 == 0) ? T2 : T1;  // T_{3-i} for the last inner T_i
  if (Te > bound + 1e-12 * std::max(1.0, bound)) {
    throw std::invalid_argument("alternating_control: final duration exceeds its bound");
  }
  std::vector<ControlSegment> segs;
  double value = first_value;
  for (double v : d) {
    if (v > 0.0) segs.push_back({{value, 1.0}, v});
    value = -value;
  }
  return PiecewiseControl(std::move(segs));
}

double cut_bound(double Tb, double T1, double T2) {
  if (!(Tb > 0.0) || !(T1 > 0.0) || !(T2 > 0.0)) throw std::invalid_argument("cut_bound: durations must be positive");
  if (Tb > T2) throw std::invalid_argument("cut_bound: requires Tb <= T2");
  return (T2 - Tb) / (T2 + Tb) * T1;
}

bool is_geometrically_optimal_candidate(const PiecewiseControl& c) {
  const auto& s = c.segments();
  if (s.size() != 4) throw std::invalid_argument("is_geometrically_optimal_candidate: expected four pieces");
  const double first = s[0].u.u1;
  for (std::size_t k = 0; k < 4; ++k) {
    const double expected = (k % 2 == 0) ? first : -first;
    if (std::abs(first) != 1.0 || s[k].u.u1 != expected || s[k].u.u2 != s[0].u.u2 || std::abs(s[0].u.u2) != 1.0) {
      throw std::invalid_argument("is_geometrically_optimal_candidate: values must alternate +-1");
    }
  }
  const double Tb = s[0].duration;
  const double T1 = s[1].duration;
  const double T2 = s[2].duration;
  const double Te = s[3].duration;
  if (!(Tb < T2)) return false;
  return Te > 0.0 && Te <= cut_bound(Tb, T1, T2);
}

// ---------------------------------------------------------------------------

namespace {

using Params = Eigen::VectorXd;

struct Family {
  int n_params;
  std::function<std::vector<ControlSegment>(const Params&)> build;
};

Point endpoint(const std::vector<ControlSegment>& segs) {
  ExtremalState s{Covector(), Point::origin()};
  for (const auto& seg : segs) {
    if (seg.duration != 0.0) s = segment_flow(s, seg.u, seg.duration);
  }
  return s.q;
}

// Durations occupy the leading n_durations entries and share the unit budget;
// any further entries are control values in [-1, 1].
void project(Params& p, int n_durations) {
  double sum = 0.0;
  for (int k = 0; k < n_durations; ++k) {
    p(k) = std::max(0.0, p(k));
    sum += p(k);
  }
  if (sum > 1.0) p.head(n_durations) /= sum;
  for (int k = n_durations; k < p.size(); ++k) p(k) = std::clamp(p(k), -1.0, 1.0);
}

struct Fit {
  Params params;
  double residual = std::numeric_limits<double>::infinity();
};

Eigen::Vector4d residual(const Family& f, const Params& p, const Point& target) {
  const Vec5 d = endpoint(f.build(p)).coords() - target.coords();
  return {d(0), d(2), d(3), d(4)};
}

Fit levenberg_marquardt(const Family& f, Params p, int n_durations, const Point& target, const ReachOptions& opt) {
  project(p, n_durations);
  Eigen::Vector4d r = residual(f, p, target);
  double cost = r.squaredNorm();
  double lambda = 1e-3;
  const int n = static_cast<int>(p.size());
  for (int it = 0; it < opt.max_iterations; ++it) {
    if (r.lpNorm<Eigen::Infinity>() <= 1e-3 * opt.tol) break;
    Eigen::Matrix<double, 4, Eigen::Dynamic> J(4, n);
    for (int k = 0; k < n; ++k) {
      const double step = 1e-7;
      Params a = p;
      Params b = p;
      a(k) += step;
      b(k) -= step;
      J.col(k) = (residual(f, a, target) - residual(f, b, target)) / (2.0 * step);
    }
    const Eigen::MatrixXd JtJ = J.transpose() * J;
    const Eigen::VectorXd g = J.transpose() * r;
    bool improved = false;
    while (lambda < 1e12) {
      Eigen::MatrixXd A = JtJ;
      A.diagonal() += lambda * (JtJ.diagonal().array() + 1e-12).matrix();
      Params next = p - A.ldlt().solve(g);
      project(next, n_durations);
      const Eigen::Vector4d rn = residual(f, next, target);
      if (rn.squaredNorm() < cost) {
        p = next;
        r = rn;
        cost = rn.squaredNorm();
        lambda = std::max(lambda / 3.0, 1e-12);
        improved = true;
        break;
      }
      lambda *= 4.0;
    }
    if (!improved) break;
  }
  return {p, r.lpNorm<Eigen::Infinity>()};
}

std::vector<ControlSegment> bang(std::initializer_list<std::pair<double, double>> pieces) {
  std::vector<ControlSegment> segs;
  for (const auto& [u1, d] : pieces) segs.push_back({{u1, 1.0}, d});
  return segs;
}

struct Candidate {
  Family family;
  int n_durations;
};

std::vector<Candidate> candidate_families() {
  std::vector<Candidate> out;
  // constant u1 = c
  out.push_back({{1, [](const Params& p) { return bang({{p(0), 1.0}}); }}, 0});
  // one switch between vertices
  for (double a : {1.0, -1.0}) {
    out.push_back({{1, [a](const Params& p) { return bang({{a, p(0)}, {-a, 1.0 - p(0)}}); }}, 1});
  }
  // type 1: (a, c, b)
  for (double a : {1.0, -1.0}) {
    for (double b : {1.0, -1.0}) {
      out.push_back({{3, [a, b](const Params& p) {
                        return bang({{a, p(0)}, {p(2), p(1)}, {b, 1.0 - p(0) - p(1)}});
                      }},
                     2});
    }
  }
  // type 2: alternating, three switchings
  for (double s : {1.0, -1.0}) {
    out.push_back({{3, [s](const Params& p) {
                      return bang({{s, p(0)}, {-s, p(1)}, {s, p(2)}, {-s, 1.0 - p(0) - p(1) - p(2)}});
                    }},
                   3});
  }
  // u1 = 0 prefix followed by type 1
  for (double a : {1.0, -1.0}) {
    for (double b : {1.0, -1.0}) {
      out.push_back({{4, [a, b](const Params& p) {
                        return bang({{0.0, p(0)}, {a, p(1)}, {p(3), p(2)}, {b, 1.0 - p(0) - p(1) - p(2)}});
                      }},
                     3});
    }
  }
  // u1 = 0 prefix followed by type 2
  for (double s : {1.0, -1.0}) {
    out.push_back({{4, [s](const Params& p) {
                      return bang({{0.0, p(0)},
                                   {s, p(1)},
                                   {-s, p(2)},
                                   {s, p(3)},
                                   {-s, 1.0 - p(0) - p(1) - p(2) - p(3)}});
                    }},
                   4});
  }
  return out;
}

// Records the reflections used to move a point into the chart y = 1, x >= 0.
std::vector<int> chart_reflections(const Point& q, double T, double tol) {
  Point p = dilation(q, 1.0 / T);
  std::vector<int> used;
  auto apply = [&](int k) {
    p = state_symmetry(k, p);
    used.push_back(k);
  };
  if (std::abs(std::abs(p.y()) - 1.0) <= tol) {
    if (p.y() < 0.0) apply(2);
  } else {
    apply(3);
    if (p.y() < 0.0) apply(2);
  }
  if (p.x() < 0.0) apply(1);
  return used;
}

}  // namespace

PiecewiseControl reach_singular(const Point& q1, double T, const ReachOptions& opt) {
  if (!(T > 0.0)) throw std::invalid_argument("reach_singular: T must be positive");
  if (!(opt.tol > 0.0)) throw std::invalid_argument("reach_singular: tolerance must be positive");
  const double member_tol = std::max(opt.tol, 1e-9);
  const Membership m = membership(q1, T, member_tol);
  if (!m.inside) {
    throw std::invalid_argument("reach_singular: target is outside the singular attainable set (" +
                                std::string(to_string(m.binding)) + ")");
  }
  Point target = m.chart;
  target.coords()(1) = 1.0;

  std::mt19937_64 rng(opt.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double best = std::numeric_limits<double>::infinity();
  std::vector<ControlSegment> found;
  for (const Candidate& cand : candidate_families()) {
    const int n = cand.family.n_params;
    const int starts = (n == 1) ? 8 : opt.starts;
    for (int s = 0; s < starts && found.empty(); ++s) {
      Params p(n);
      for (int k = 0; k < n; ++k) p(k) = unit(rng);
      // spread the duration budget so the last piece keeps a share
      if (cand.n_durations > 0) p.head(cand.n_durations) *= 1.0 / (cand.n_durations + 1);
      for (int k = cand.n_durations; k < n; ++k) p(k) = 2.0 * p(k) - 1.0;
      if (cand.n_durations == 0) p(0) = std::clamp(target.x(), -1.0, 1.0);
      const Fit fit = levenberg_marquardt(cand.family, p, cand.n_durations, target, opt);
      best = std::min(best, fit.residual);
      if (fit.residual <= opt.tol) found = cand.family.build(fit.params);
    }
    if (!found.empty()) break;
  }
  if (found.empty()) {
    throw ShootingError("reach_singular: no control family converged; best residual " + std::to_string(best), best);
  }

  // undo the chart reflections, last one first
  std::vector<int> reflections = chart_reflections(q1, T, member_tol);
  std::reverse(reflections.begin(), reflections.end());
  std::vector<ControlSegment> segs;
  for (auto seg : found) {
    if (seg.duration <= 1e-13) continue;
    for (int k : reflections) seg.u = control_symmetry(k, seg.u);
    seg.duration *= T;
    segs.push_back(seg);
  }
  return PiecewiseControl(std::move(segs)).simplified(0.0, 1e-12);
}

}  // namespace cartan
