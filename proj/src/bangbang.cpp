#include "cartan/bangbang.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>

namespace cartan {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void require_unit_H(const Covector& h, const char* what) {
  if (!h.is_finite()) throw std::invalid_argument(std::string(what) + ": covector is not finite");
  if (std::abs(hamiltonian_H(h) - 1.0) > 1e-9) {
    throw std::invalid_argument(std::string(what) + ": requires |h1| + |h2| = 1, got " +
                                std::to_string(hamiltonian_H(h)));
  }
}

}  // namespace

// ---------------------------------------------------------------------------

SegmentPolynomial segment_coefficients(const ExtremalState& s, const Control& u) {
  const double a = u.u1;
  const double b = u.u2;
  const Covector& h = s.h;
  const Point& q = s.q;
  const double c = a * h.h4() + b * h.h5();
  const double r2 = q.x() * q.x() + q.y() * q.y();
  const double lin = a * q.x() + b * q.y();
  const double sq = a * a + b * b;

  SegmentPolynomial P = SegmentPolynomial::Zero();
  P.row(0) << h.h1(), -b * h.h3(), -0.5 * b * c, 0.0;
  P.row(1) << h.h2(), a * h.h3(), 0.5 * a * c, 0.0;
  P.row(2) << h.h3(), c, 0.0, 0.0;
  P(3, 0) = h.h4();
  P(4, 0) = h.h5();
  P.row(5) << q.x(), a, 0.0, 0.0;
  P.row(6) << q.y(), b, 0.0, 0.0;
  P.row(7) << q.z(), 0.5 * (b * q.x() - a * q.y()), 0.0, 0.0;
  // v and w integrate -/+ (x^2 + y^2)/2 along the horizontal direction
  P.row(8) << q.v(), 0.5 * b * r2, 0.5 * b * lin, b * sq / 6.0;
  P.row(9) << q.w(), -0.5 * a * r2, -0.5 * a * lin, -a * sq / 6.0;
  return P;
}

ExtremalState evaluate_segment(const SegmentPolynomial& coeffs, double tau) {
  const Vec10 y = ((coeffs.col(3) * tau + coeffs.col(2)) * tau + coeffs.col(1)) * tau + coeffs.col(0);
  return ExtremalState::from_stacked(y);
}

ExtremalState segment_flow(const ExtremalState& s, const Control& u, double tau) {
  return evaluate_segment(segment_coefficients(s, u), tau);
}

Point propagate(const Point& q0, const PiecewiseControl& control) {
  ExtremalState s{Covector(), q0};
  for (const auto& seg : control.segments()) s = segment_flow(s, seg.u, seg.duration);
  return s.q;
}

// ---------------------------------------------------------------------------

double theta_from_h(double h1, double h2) {
  if (std::abs(std::abs(h1) + std::abs(h2) - 1.0) > 1e-9) {
    throw std::invalid_argument("theta_from_h: requires |h1| + |h2| = 1");
  }
  const double c = sign_of(h1) * std::sqrt(std::abs(h1));
  const double s = sign_of(h2) * std::sqrt(std::abs(h2));
  double theta = std::atan2(s, c);
  if (theta < 0.0) theta += kTwoPi;
  if (theta >= kTwoPi) theta -= kTwoPi;
  return theta;
}

Eigen::Vector2d h_from_theta(double theta) {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  return {sign_of(c) * c * c, sign_of(s) * s * s};
}

double potential_U(double theta, double h4, double h5) {
  const Eigen::Vector2d h = h_from_theta(theta);
  return h(0) * h5 - h(1) * h4;
}

AngularState to_angular(const Covector& h) {
  require_unit_H(h, "to_angular");
  return {theta_from_h(h.h1(), h.h2()), h.h3(), h.h4(), h.h5()};
}

Covector from_angular(const AngularState& a) {
  const Eigen::Vector2d h = h_from_theta(a.theta);
  return {h(0), h(1), a.h3, a.h4, a.h5};
}

Eigen::Vector2d angular_rhs(const AngularState& a) {
  const double s2t = std::abs(std::sin(2.0 * a.theta));
  if (s2t < 1e-12) {
    throw std::domain_error("angular_rhs: theta is a multiple of pi/2 where the chart is singular");
  }
  const double s1 = sign_of(std::cos(a.theta));
  const double s2 = sign_of(std::sin(a.theta));
  return {a.h3 / s2t, s1 * a.h4 + s2 * a.h5};
}

// ---------------------------------------------------------------------------

std::string to_string(Symmetry e) {
  const int k = static_cast<int>(e);
  return k == 0 ? std::string("Id") : "eps" + std::to_string(k);
}

Eigen::Matrix<double, 5, 5> symmetry_matrix(Symmetry e) {
  // row r gives the image component r as sign * h_{perm}
  static constexpr int perm[8][5] = {{0, 1, 2, 3, 4}, {1, 0, 2, 4, 3}, {1, 0, 2, 4, 3}, {0, 1, 2, 3, 4},
                                     {0, 1, 2, 3, 4}, {1, 0, 2, 4, 3}, {1, 0, 2, 4, 3}, {0, 1, 2, 3, 4}};
  static constexpr int sign[8][5] = {{1, 1, 1, 1, 1},    {1, 1, -1, -1, -1}, {-1, -1, -1, 1, 1},
                                     {1, -1, -1, -1, 1}, {-1, 1, -1, 1, -1}, {-1, 1, 1, -1, 1},
                                     {1, -1, 1, 1, -1},  {-1, -1, 1, -1, -1}};
  const int k = static_cast<int>(e);
  if (k < 0 || k > 7) throw std::out_of_range("symmetry_matrix: unknown element");
  Eigen::Matrix<double, 5, 5> M = Eigen::Matrix<double, 5, 5>::Zero();
  for (int r = 0; r < 5; ++r) M(r, perm[k][r]) = sign[k][r];
  return M;
}

Covector apply_symmetry(Symmetry e, const Covector& h) {
  return Covector(Vec5(symmetry_matrix(e) * h.components()));
}

Symmetry compose(Symmetry a, Symmetry b) {
  const Eigen::Matrix<double, 5, 5> M = symmetry_matrix(a) * symmetry_matrix(b);
  for (Symmetry e : kSymmetries) {
    if (symmetry_matrix(e) == M) return e;
  }
  throw std::logic_error("compose: group is not closed");
}

Symmetry inverse(Symmetry e) {
  for (Symmetry f : kSymmetries) {
    if (compose(e, f) == Symmetry::Id) return f;
  }
  throw std::logic_error("inverse: no inverse found");
}

const std::array<std::array<Symmetry, 7>, 7>& product_table() {
  static const std::array<std::array<Symmetry, 7>, 7> table = [] {
    static constexpr int raw[7][7] = {{0, 7, 6, 5, 4, 3, 2}, {7, 0, 5, 6, 3, 4, 1}, {5, 6, 0, 7, 1, 2, 4},
                                      {6, 5, 7, 0, 2, 1, 3}, {3, 4, 2, 1, 7, 0, 6}, {4, 3, 1, 2, 0, 7, 5},
                                      {2, 1, 4, 3, 6, 5, 0}};
    std::array<std::array<Symmetry, 7>, 7> t{};
    for (int i = 0; i < 7; ++i) {
      for (int j = 0; j < 7; ++j) t[i][j] = static_cast<Symmetry>(raw[i][j]);
    }
    return t;
  }();
  return table;
}

std::pair<Covector, Symmetry> to_fundamental_domain(const Covector& h) {
  for (Symmetry e : kSymmetries) {
    const Covector g = apply_symmetry(e, h);
    if (g.h4() >= g.h5() && g.h5() >= 0.0) return {g, e};
  }
  throw std::logic_error("to_fundamental_domain: no element maps into the wedge");
}

// ---------------------------------------------------------------------------

int domain_case(double h4, double h5, double tol) {
  if (h4 <= tol) return 4;
  if (std::abs(h4 - h5) <= tol) return 3;
  if (h5 <= tol) return 2;
  return 1;
}

std::vector<double> critical_energies(int case_index, double h4, double h5) {
  switch (case_index) {
    case 1:
      return {-h4, -h5, h5, h4};
    case 2:
      return {-h4, 0.0, h4};
    case 3:
      return {-h4, h4};
    case 4:
      return {0.0};
    default:
      throw std::out_of_range("critical_energies: case must be in 1..4");
  }
}

StratumLabel stratum_of_level(double h4, double h5, double E, double tol) {
  const Covector g = to_fundamental_domain(Covector(0.0, 0.0, 0.0, h4, h5)).first;
  const int c = domain_case(g.h4(), g.h5(), tol);
  const std::vector<double> crit = critical_energies(c, g.h4(), g.h5());
  if (E < crit.front() - tol) throw std::domain_error("stratum_of_level: energy below the potential minimum");
  for (std::size_t k = 0; k < crit.size(); ++k) {
    if (std::abs(E - crit[k]) <= tol) return {c, static_cast<int>(2 * k + 1)};
    if (E < crit[k]) return {c, static_cast<int>(2 * k)};
  }
  return {c, static_cast<int>(2 * crit.size())};
}

StratumLabel classify_stratum(const Covector& h, double tol) {
  require_unit_H(h, "classify_stratum");
  return stratum_of_level(h.h4(), h.h5(), energy(h), tol);
}

// ---------------------------------------------------------------------------

ExtremalState BangBranch::at(double t) const {
  if (segments.empty()) throw std::logic_error("BangBranch::at: empty branch");
  for (const auto& seg : segments) {
    if (t <= seg.t1) return evaluate_segment(seg.coeffs, std::max(0.0, t - seg.t0));
  }
  const auto& last = segments.back();
  return evaluate_segment(last.coeffs, last.t1 - last.t0);
}

namespace {

struct Root {
  double tau;
  bool tangent;
};

// Earliest root in (eps, horizon] of c0 + c1 tau + c2 tau^2. A root counts as
// tangent when the extremum of the parabola lies within tol of zero.
std::optional<Root> first_root(double c0, double c1, double c2, double eps, double horizon, double tol) {
  auto accept = [&](double r) { return r > eps && r <= horizon; };
  if (c2 == 0.0) {
    if (c1 == 0.0) return std::nullopt;
    const double r = -c0 / c1;
    if (accept(r)) return Root{r, false};
    return std::nullopt;
  }
  const double D = c1 * c1 - 4.0 * c2 * c0;
  const double turning = -c1 / (2.0 * c2);
  const double extremum = -D / (4.0 * c2);
  if (std::abs(extremum) <= tol && c0 != 0.0) {
    if (accept(turning)) return Root{turning, true};
    if (D < 0.0) return std::nullopt;
  }
  if (D < 0.0) return std::nullopt;
  const double sq = std::sqrt(D);
  const double q = -0.5 * (c1 + std::copysign(sq, c1));
  double r1 = q / c2;
  double r2 = (q != 0.0) ? c0 / q : r1;
  if (r1 > r2) std::swap(r1, r2);
  if (accept(r1)) return Root{r1, false};
  if (accept(r2)) return Root{r2, false};
  return std::nullopt;
}

// Second derivative of h_i at a corner when component i takes the value side
// and the other component keeps its sign.
double corner_acceleration(int i, double side, double other, double h4, double h5) {
  if (i == 1) return -other * (side * h4 + other * h5);
  return other * (other * h4 + side * h5);
}

std::vector<double> feasible_sides(int i, double other, double h4, double h5, double tol) {
  std::vector<double> sides;
  for (double side : {1.0, -1.0}) {
    if (side * corner_acceleration(i, side, other, h4, h5) > tol) sides.push_back(side);
  }
  return sides;
}

struct Pending {
  BangBranch branch;
  ExtremalState state;
  Control u;
  double t;
};

bool documented_split(const Covector& h) {
  const Covector g = to_fundamental_domain(h).first;
  return domain_case(g.h4(), g.h5(), 1e-12) == 1;
}

}  // namespace

ExpResult exp_bangbang(const Covector& h0, const Point& q0, double T, const ExpOptions& options) {
  require_unit_H(h0, "exp_bangbang");
  if (!(T >= 0.0) || !std::isfinite(T)) throw std::invalid_argument("exp_bangbang: horizon must be finite and >= 0");
  if (!q0.is_finite()) throw std::invalid_argument("exp_bangbang: base point is not finite");
  const double tol = options.corner_tol;
  const double eps = 1e-14 * std::max(1.0, T);

  std::deque<Pending> queue;
  std::size_t branch_count = 1;
  auto register_branch = [&]() {
    if (++branch_count > static_cast<std::size_t>(options.branch_cap)) {
      throw std::length_error("exp_bangbang: more than " + std::to_string(options.branch_cap) + " branches");
    }
  };

  // initial vertex
  {
    ExtremalState s{h0, q0};
    const double h1 = s.h.h1();
    const double h2 = s.h.h2();
    if (std::abs(h1) > tol && std::abs(h2) > tol) {
      queue.push_back({BangBranch{}, s, Control{double(sign_of(h1)), double(sign_of(h2))}, 0.0});
    } else {
      const int i = std::abs(h1) <= tol ? 1 : 2;
      const double other = (i == 1) ? sign_of(h2) : sign_of(h1);
      if (i == 1) s.h.h1() = 0.0; else s.h.h2() = 0.0;
      auto make_u = [&](double side) {
        return i == 1 ? Control{side, other} : Control{other, side};
      };
      const double h3 = s.h.h3();
      if (std::abs(h3) > tol) {
        const double side = (i == 1) ? sign_of(-other * h3) : sign_of(other * h3);
        queue.push_back({BangBranch{}, s, make_u(side), 0.0});
      } else {
        s.h.h3() = 0.0;
        const auto sides = feasible_sides(i, other, s.h.h4(), s.h.h5(), tol);
        if (sides.empty()) {
          throw std::domain_error("exp_bangbang: initial covector is an equilibrium with a singular control");
        }
        for (std::size_t k = 0; k < sides.size(); ++k) {
          if (k > 0) register_branch();
          BangBranch b;
          b.corner_times.push_back(0.0);
          if (sides.size() == 2 && !documented_split(s.h)) b.inferred_continuation = true;
          if (sides.size() == 1) b.inferred_continuation = true;
          queue.push_back({std::move(b), s, make_u(sides[k]), 0.0});
        }
      }
    }
  }

  ExpResult result;
  while (!queue.empty()) {
    Pending p = std::move(queue.front());
    queue.pop_front();
    while (true) {
      const double remaining = T - p.t;
      const SegmentPolynomial P = segment_coefficients(p.state, p.u);
      std::optional<Root> best;
      int which = 0;
      for (int i = 1; i <= 2; ++i) {
        const auto r = first_root(P(i - 1, 0), P(i - 1, 1), P(i - 1, 2), eps, remaining, tol);
        if (r && (!best || r->tau < best->tau)) {
          best = r;
          which = i;
        }
      }
      if (!best) {
        if (remaining > 0.0 || p.branch.segments.empty()) {
          p.branch.segments.push_back({p.t, T, p.u, P});
        }
        p.branch.endpoint = evaluate_segment(P, remaining);
        result.branches.push_back(std::move(p.branch));
        break;
      }

      const double tau = best->tau;
      p.branch.segments.push_back({p.t, p.t + tau, p.u, P});
      p.state = evaluate_segment(P, tau);
      p.t += tau;
      const int i = which;
      const double current = (i == 1) ? p.u.u1 : p.u.u2;
      const double other = (i == 1) ? p.u.u2 : p.u.u1;
      if (i == 1) p.state.h.h1() = 0.0; else p.state.h.h2() = 0.0;
      auto flipped = [&](Control u) {
        if (i == 1) u.u1 = -u.u1; else u.u2 = -u.u2;
        return u;
      };

      if (!best->tangent) {
        p.u = flipped(p.u);
        p.branch.switch_times.push_back(p.t);
        continue;
      }

      // corner: h_i and h3 vanish together
      p.state.h.h3() = 0.0;
      p.branch.corner_times.push_back(p.t);
      const auto sides = feasible_sides(i, other, p.state.h.h4(), p.state.h.h5(), tol);
      const bool keep = std::find(sides.begin(), sides.end(), current) != sides.end();
      const bool flip = std::find(sides.begin(), sides.end(), -current) != sides.end();
      if (keep && flip) {
        if (!documented_split(p.state.h)) p.branch.inferred_continuation = true;
        register_branch();
        Pending twin = p;
        twin.u = flipped(twin.u);
        twin.branch.switch_times.push_back(twin.t);
        queue.push_back(std::move(twin));
      } else {
        p.branch.inferred_continuation = true;
        if (flip) {
          p.u = flipped(p.u);
          p.branch.switch_times.push_back(p.t);
        }
      }
    }
  }
  return result;
}

std::vector<double> switching_times(const ExpResult& result, std::size_t branch) {
  if (branch >= result.branches.size()) throw std::out_of_range("switching_times: branch index out of range");
  return result.branches[branch].switch_times;
}

// ---------------------------------------------------------------------------

std::vector<Eigen::Vector2d> level_curve(double h4, double h5, double E, int n_samples) {
  if (n_samples < 2) throw std::invalid_argument("level_curve: need at least 2 samples");
  std::vector<double> thetas;
  thetas.reserve(static_cast<std::size_t>(n_samples) + 4);
  for (int k = 0; k < n_samples; ++k) thetas.push_back(kTwoPi * k / n_samples);
  for (int k = 0; k < 4; ++k) thetas.push_back(0.5 * std::numbers::pi * k);
  std::sort(thetas.begin(), thetas.end());
  thetas.erase(std::unique(thetas.begin(), thetas.end(), [](double a, double b) { return std::abs(a - b) < 1e-14; }),
               thetas.end());

  std::vector<Eigen::Vector2d> upper;
  std::vector<Eigen::Vector2d> lower;
  for (double th : thetas) {
    const double r = E - potential_U(th, h4, h5);
    if (r < -1e-12) continue;
    const double h3 = std::sqrt(2.0 * std::max(r, 0.0));
    upper.emplace_back(th, h3);
    if (h3 > 0.0) lower.emplace_back(th, -h3);
  }
  if (upper.empty()) throw std::domain_error("level_curve: energy level is empty");
  upper.insert(upper.end(), lower.rbegin(), lower.rend());
  return upper;
}

// ---------------------------------------------------------------------------

CutSearchResult cut_search(const Covector& h0, double T_max, int n_grid, double tol) {
  require_unit_H(h0, "cut_search");
  if (!(T_max > 0.0)) throw std::invalid_argument("cut_search: horizon must be positive");
  if (n_grid < 1) throw std::invalid_argument("cut_search: grid must have at least one step");

  using Samples = std::vector<Vec5>;
  auto sample = [&](const BangBranch& b) {
    Samples out(static_cast<std::size_t>(n_grid) + 1);
    for (int k = 0; k <= n_grid; ++k) out[k] = b.at(T_max * k / n_grid).q.coords();
    return out;
  };

  const ExpResult reference = exp_bangbang(h0, Point::origin(), T_max);
  std::vector<Samples> ref;
  for (const auto& b : reference.branches) ref.push_back(sample(b));

  std::vector<Samples> family;
  for (Symmetry e : kSymmetries) {
    try {
      const ExpResult r = exp_bangbang(apply_symmetry(e, h0), Point::origin(), T_max);
      for (const auto& b : r.branches) family.push_back(sample(b));
    } catch (const std::length_error&) {
      continue;
    }
  }

  auto close = [tol](const Vec5& a, const Vec5& b) { return (a - b).lpNorm<Eigen::Infinity>() <= tol; };
  for (int k = 1; k <= n_grid; ++k) {
    const double t = T_max * k / n_grid;
    for (const auto& r : ref) {
      const Vec5& p = r[k];
      for (const auto& f : family) {
        for (int m = 0; m < k; ++m) {
          if (close(f[m], p)) {
            return {true, t, "endpoint reached earlier at t = " + std::to_string(T_max * m / n_grid)};
          }
        }
        if (close(f[k], p)) {
          bool differs = false;
          for (int m = 1; m < k && !differs; ++m) differs = !close(f[m], r[m]);
          if (differs) return {true, t, "distinct extremal with the same endpoint (Maxwell point)"};
        }
      }
    }
  }
  return {false, T_max, "no cut detected on the grid"};
}

}  // namespace cartan
