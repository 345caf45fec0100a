#include "cartan/verification.hpp"

#include "cartan/abnormal.hpp"
#include "cartan/attainable.hpp"
#include "cartan/bangbang.hpp"
#include "cartan/cartan_core.hpp"
#include "cartan/extremal.hpp"
#include "cartan/singular.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>

namespace cartan {

bool SuiteReport::pass() const {
  return !checks.empty() && std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.pass; });
}

namespace {

using Rng = std::mt19937_64;

double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

CheckResult at_most(std::string name, double measured, double threshold, std::string detail = {}) {
  return {std::move(name), measured <= threshold, measured, threshold, std::move(detail)};
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

double max_abs(const Vec5& v) { return v.lpNorm<Eigen::Infinity>(); }

// ---------------------------------------------------------------------------

SuiteReport structure_constants(const VerifyOptions& opt) {
  Rng rng(opt.seed);
  double worst = 0.0;
  int evaluated = 0;
  for (int n = 0; n < 20; ++n) {
    const Point q(uniform(rng, -2, 2), uniform(rng, -2, 2), uniform(rng, -2, 2), uniform(rng, -2, 2),
                  uniform(rng, -2, 2));
    for (int i = 1; i <= 5; ++i) {
      for (int j = i + 1; j <= 5; ++j) {
        worst = std::max(worst, max_abs(bracket_residual(i, j, q)));
        ++evaluated;
      }
    }
  }
  return {"structure-constants",
          {at_most("bracket residual", worst, 1e-6, std::to_string(evaluated) + " field pairs at 20 points")}};
}

SuiteReport casimir(const VerifyOptions& opt) {
  Rng rng(opt.seed + 1);
  double drift45 = 0.0;
  double driftE = 0.0;
  IntegrateOptions io;
  io.dt = 1e-4;
  io.record_stride = 100;
  for (int n = 0; n < 50; ++n) {
    const Covector h(uniform(rng, -1, 1), uniform(rng, -1, 1), uniform(rng, -1, 1), uniform(rng, -1, 1),
                     uniform(rng, -1, 1));
    const CasimirTriple c0 = casimirs(h);
    const Trajectory traj = integrate({h, Point::origin()}, FeedbackLaw{}, 10.0, io);
    for (const auto& s : traj.samples) {
      const CasimirTriple c = casimirs(s.state.h);
      drift45 = std::max({drift45, std::abs(c.h4 - c0.h4) / std::max(1.0, std::abs(c0.h4)),
                          std::abs(c.h5 - c0.h5) / std::max(1.0, std::abs(c0.h5))});
      driftE = std::max(driftE, std::abs(c.energy - c0.energy) / std::max(1.0, std::abs(c0.energy)));
    }
  }
  return {"casimir",
          {at_most("h4, h5 drift", drift45, 1e-9, "50 feedback extremals, T = 10, dt = 1e-4"),
           at_most("energy drift", driftE, 1e-9, "relative to max(1, |E0|)")}};
}

SuiteReport group_table(const VerifyOptions& opt) {
  Rng rng(opt.seed + 2);
  const auto& table = product_table();
  int mismatched = 0;
  int compose_mismatch = 0;
  double energy_err = 0.0;
  std::vector<Covector> samples;
  for (int n = 0; n < 100; ++n) {
    samples.emplace_back(uniform(rng, -3, 3), uniform(rng, -3, 3), uniform(rng, -3, 3), uniform(rng, -3, 3),
                         uniform(rng, -3, 3));
  }
  for (int i = 1; i <= 7; ++i) {
    for (int j = 1; j <= 7; ++j) {
      const auto ei = static_cast<Symmetry>(i);
      const auto ej = static_cast<Symmetry>(j);
      const Symmetry entry = table[i - 1][j - 1];
      if (compose(ej, ei) != entry) ++compose_mismatch;
      bool ok = true;
      for (const auto& h : samples) {
        if (!(apply_symmetry(ej, apply_symmetry(ei, h)) == apply_symmetry(entry, h))) ok = false;
      }
      if (!ok) ++mismatched;
    }
  }
  for (const auto& h : samples) {
    for (Symmetry e : kSymmetries) {
      const double scale = std::max(1.0, h.components().squaredNorm());
      energy_err = std::max(energy_err, std::abs(energy(apply_symmetry(e, h)) - energy(h)) / scale);
    }
  }
  return {"group-table",
          {at_most("table entries failing as linear maps", mismatched, 0, "49 compositions on 100 covectors"),
           at_most("compose() disagreements", compose_mismatch, 0, "entry (i, j) read as eps^j o eps^i"),
           at_most("energy invariance", energy_err, 1e-15, "relative to max(1, |h|^2)")}};
}

// Covector with H = 1 on the level E of (h4, h5), at an angle chosen with the
// rng among grid angles where the level is open.
Covector seed_on_level(double h4, double h5, double E, Rng& rng) {
  std::vector<double> thetas;
  for (int k = 0; k < 720; ++k) {
    const double th = (k + 0.5) * 2.0 * std::numbers::pi / 720.0;
    if (E - potential_U(th, h4, h5) > 1e-3) thetas.push_back(th);
  }
  if (thetas.empty()) throw std::logic_error("seed_on_level: empty level");
  const double th = thetas[std::uniform_int_distribution<std::size_t>(0, thetas.size() - 1)(rng)];
  const double sign = std::uniform_int_distribution<int>(0, 1)(rng) ? 1.0 : -1.0;
  return from_angular({th, sign * std::sqrt(2.0 * (E - potential_U(th, h4, h5))), h4, h5});
}

SuiteReport propagator(const VerifyOptions& opt) {
  Rng rng(opt.seed + 3);
  struct Level {
    double h4, h5, E;
  };
  const std::vector<Level> levels = {
      {2, 1, -1.5}, {2, 1, -1.5}, {2, 1, 0}, {2, 1, 0},   {2, 1, 1.5}, {2, 1, 1.5}, {2, 1, 3},
      {2, 1, 3},    {1, 0, -0.5}, {1, 0, 0.5}, {1, 0, 2}, {1, 1, 0},   {1, 1, 2},   {0, 0, 0.5},
      {0, 0, 2},    {2, 1, 0.5},  {2, 1, 2.5}, {1, 0, 0.2}, {1, 1, 1.2}, {0, 0, 1.0}};
  const double T = 3.0;
  double worst = 0.0;
  int multi_branch = 0;
  std::map<std::string, int> strata;
  int k = 0;
  for (const auto& lv : levels) {
    Covector h = seed_on_level(lv.h4, lv.h5, lv.E, rng);
    // the last seeds leave the fundamental domain through a group element
    if (k >= 16) h = apply_symmetry(static_cast<Symmetry>(1 + (k % 7)), h);
    ++k;
    const StratumLabel label = classify_stratum(h);
    ++strata["case" + std::to_string(label.case_index) + ":C" + std::to_string(label.stratum)];
    const ExpResult exact = exp_bangbang(h, Point::origin(), T);
    if (exact.branches.size() != 1) ++multi_branch;
    IntegrateOptions io;
    io.dt = 1e-5;
    io.record_stride = 1 << 30;
    const Trajectory rk = integrate({h, Point::origin()}, FeedbackLaw{}, T, io);
    const Vec10 diff = exact.branches.front().endpoint.stacked() - rk.final_state().stacked();
    worst = std::max(worst, diff.lpNorm<Eigen::Infinity>());
  }
  std::string covered;
  for (const auto& [name, count] : strata) covered += name + "x" + std::to_string(count) + " ";
  const bool spans = strata.count("case1:C2") && strata.count("case1:C4") && strata.count("case1:C6") &&
                     strata.count("case1:C8") && strata.count("case2:C2") && strata.count("case3:C2") &&
                     strata.count("case4:C2");
  return {"propagator",
          {at_most("exact vs RK4 endpoint", worst, 1e-6, "20 seeds, T = 3, RK4 dt = 1e-5"),
           {"strata coverage", spans, spans ? 1.0 : 0.0, 1.0, covered},
           at_most("seeds with split branches", multi_branch, 0)}};
}

SuiteReport abnormal_pin(const VerifyOptions&) {
  const Point expected(1, 1, 0, 1.0 / 3.0, -1.0 / 3.0);
  const Trajectory traj =
      integrate({Covector(), Point::origin()}, PiecewiseControl({{{1.0, 1.0}, 1.0}}), 1.0, IntegrateOptions{});
  const double rk_err = max_abs(traj.final_state().q.coords() - expected.coords());
  const double closed_err = max_abs(abnormal_point({1, 1}, 1.0).coords() - expected.coords());
  const Membership m = membership(expected, 1.0, 1e-9);

  // every bound of the chain is pinched at the corner
  const Point& c = m.chart;
  const double pinch = std::max({std::abs(z_max(c.x()) - std::abs(c.z())), std::abs(w_max(c.x(), c.z()) - c.w()),
                                 std::abs(-w_max(-c.x(), -c.z()) - c.w()), std::abs(v_upper(c.x(), c.z(), c.w()) - c.v()),
                                 std::abs(v_min(c.x(), c.z(), c.w()) - c.v())});
  const Point mirrored(1, 1, 0, -1.0 / 3.0, 1.0 / 3.0);
  const Membership mp = membership(mirrored, 1.0, 1e-9);
  return {"abnormal-pin",
          {at_most("RK4 endpoint of u = (1, 1)", rk_err, 1e-9),
           at_most("closed-form endpoint", closed_err, 1e-9),
           {"corner accepted", m.inside, m.inside ? 1.0 : 0.0, 1.0, "binding " + std::string(to_string(m.binding))},
           at_most("bounds pinched at the corner", pinch, 1e-9),
           {"mirrored corner (1, 1, 0, -1/3, 1/3) rejected", !mp.inside, mp.inside ? 0.0 : 1.0, 1.0,
            "mirrored corner violates " + std::string(to_string(mp.binding)) +
                "; direct integration gives v = +1/3, w = -1/3"}}};
}

SuiteReport boundary(const VerifyOptions& opt) {
  const int n = opt.section_grid;
  const double x_window = 1.0 / n;
  const double xz_window = 1e-3;
  double z_best = -1.0;
  double w_best = -1.0;
  long count = 0;
  long rejected = 0;
  double worst_margin = 0.0;
  brute_force_section(
      1.0, n,
      [&](const Point& q, SectionFamily) {
        ++count;
        if (std::abs(q.x()) <= x_window) z_best = std::max(z_best, q.z());
        if (std::abs(q.x()) <= xz_window && std::abs(q.z()) <= xz_window) w_best = std::max(w_best, q.w());
        const Membership m = membership(q, 1.0, 1e-8);
        if (!m.inside) {
          ++rejected;
          worst_margin = std::min(worst_margin, m.margin);
        }
      },
      opt.jobs);
  return {"boundary",
          {at_most("max z near x = 0 vs 1/4", std::abs(z_best - 0.25), 2e-3, "sampled " + fmt(z_best)),
           at_most("max w near (x, z) = (0, 0) vs 1/32", std::abs(w_best - 1.0 / 32.0), 2e-3, "sampled " + fmt(w_best)),
           at_most("endpoints rejected by contains (tol 1e-8)", static_cast<double>(rejected), 0,
                   std::to_string(count) + " endpoints, worst margin " + fmt(worst_margin))}};
}

SuiteReport threshold(const VerifyOptions& opt) {
  Rng rng(opt.seed + 4);
  double z_worst = 0.0;
  double sym_worst = 0.0;
  for (int n = 0; n < 20; ++n) {
    double Tb = uniform(rng, 0.05, 1.0);
    double T2 = uniform(rng, 0.05, 1.0);
    if (Tb > T2) std::swap(Tb, T2);
    const double T1 = uniform(rng, 0.05, 1.0);
    const double Te = cut_bound(Tb, T1, T2);
    const Point a = propagate(Point::origin(), PiecewiseControl({{{1, 1}, Tb}, {{-1, 1}, T1}, {{1, 1}, T2}, {{-1, 1}, Te}}));
    const Point b = propagate(Point::origin(), PiecewiseControl({{{-1, 1}, Te}, {{1, 1}, T2}, {{-1, 1}, T1}, {{1, 1}, Tb}}));
    z_worst = std::max(z_worst, std::abs(a.z()));
    sym_worst = std::max(sym_worst, max_abs(a.coords() - b.coords()));
  }
  return {"threshold",
          {at_most("|z(T)| at the threshold", z_worst, 1e-9, "20 random (Tb, T1, T2)"),
           at_most("symmetric control endpoint gap", sym_worst, 1e-9)}};
}

SuiteReport reduced_integral(const VerifyOptions& opt) {
  Rng rng(opt.seed + 5);
  double worst = 0.0;
  long crossings = 0;
  int seeds = 0;
  for (RegionTag tag : {RegionTag::C0, RegionTag::C01, RegionTag::C1, RegionTag::C1Inf}) {
    for (double hf4 : {1.0, -1.0}) {
      for (int n = 0; n < 20; ++n) {
        double hf5 = 0.0;
        if (tag == RegionTag::C01) hf5 = uniform(rng, 0.05, 0.95);
        if (tag == RegionTag::C1) hf5 = 1.0;
        if (tag == RegionTag::C1Inf) hf5 = uniform(rng, 1.05, 3.0);
        const NormalizedAdjoint n0{uniform(rng, -2, 2), uniform(rng, -2, 2), hf4, hf5};
        if (!(classify_adjoint_region(n0) == RegionLabel{tag, hf4 > 0 ? 1 : -1})) {
          throw std::logic_error("reduced_integral: seed outside its region");
        }
        const double I0 = reduced_first_integral(n0);
        const ReducedTrajectory tr = integrate_reduced(n0, 10.0, 1e-4, 10);
        crossings += static_cast<long>(tr.crossing_times.size());
        for (const auto& s : tr.samples) {
          worst = std::max(worst, std::abs(reduced_first_integral({s.hf1, s.hf3, hf4, hf5}) - I0));
        }
        ++seeds;
      }
    }
  }
  return {"reduced-integral",
          {at_most("first-integral drift", worst, 1e-9,
                   std::to_string(seeds) + " seeds, " + std::to_string(crossings) + " switching-line crossings"),
           {"crossings exercised", crossings > 0, static_cast<double>(crossings), 1.0, ""}}};
}

SuiteReport stratum(const VerifyOptions&) {
  const double energies[] = {-2, -1.5, -1, 0, 1, 1.5, 2, 3};
  int wrong = 0;
  std::string got;
  for (int k = 0; k < 8; ++k) {
    // a point of the level with H = 1: theta = pi/2 gives U = -h4
    const double E = energies[k];
    Covector h;
    bool placed = false;
    for (int m = 0; m < 4000 && !placed; ++m) {
      const double th = 2.0 * std::numbers::pi * m / 4000.0;
      const double r = E - potential_U(th, 2.0, 1.0);
      if (r >= 0.0) {
        h = from_angular({th, std::sqrt(2.0 * r), 2.0, 1.0});
        placed = true;
      }
    }
    const StratumLabel s = classify_stratum(h);
    got += "C" + std::to_string(s.stratum) + " ";
    if (!(s == StratumLabel{1, k + 1})) ++wrong;
  }
  return {"stratum", {at_most("misclassified energies", wrong, 0, "(h4, h5) = (2, 1): " + got)}};
}

SuiteReport saddle(const VerifyOptions&) {
  const double h4 = 2.0;
  const double h5 = 1.0;
  const double th0 = 1.5 * std::numbers::pi - 0.5;
  const Covector h0 = from_angular({th0, std::sqrt(2.0 * (h4 - potential_U(th0, h4, h5))), h4, h5});
  const StratumLabel label = classify_stratum(h0);

  const ExpResult probe = exp_bangbang(h0, Point::origin(), 2.0);
  double t_corner = -1.0;
  for (const auto& b : probe.branches) {
    if (!b.corner_times.empty()) t_corner = b.corner_times.front();
  }
  if (t_corner < 0.0) {
    return {"saddle", {{"saddle reached", false, 0.0, 1.0, "no corner within T = 2"}}};
  }
  const double T = t_corner + 0.25;
  const ExpResult r = exp_bangbang(h0, Point::origin(), T);
  const double E0 = energy(h0);
  double e_err = 0.0;
  for (const auto& b : r.branches) {
    for (const auto& seg : b.segments) {
      e_err = std::max(e_err, std::abs(energy(evaluate_segment(seg.coeffs, 0.0).h) - E0));
    }
    e_err = std::max(e_err, std::abs(energy(b.endpoint.h) - E0));
  }
  double separation = 0.0;
  bool documented = true;
  if (r.branches.size() == 2) {
    const AngularState a = to_angular(r.branches[0].endpoint.h);
    const AngularState b = to_angular(r.branches[1].endpoint.h);
    const double dth = std::abs(std::remainder(a.theta - b.theta, 2.0 * std::numbers::pi));
    separation = std::max(dth, std::abs(a.h3 - b.h3));
    documented = !r.branches[0].inferred_continuation && !r.branches[1].inferred_continuation;
  }
  return {"saddle",
          {{"seed stratum", label == StratumLabel{1, 7}, static_cast<double>(label.stratum), 7.0, "case 1, E = h4"},
           {"branches after first passage", r.branches.size() == 2, static_cast<double>(r.branches.size()), 2.0,
            "corner at t = " + fmt(t_corner)},
           at_most("energy error along branches", e_err, 1e-12),
           {"branches diverge in (theta, h3)", separation > 1e-3, separation, 1e-3, ""},
           {"split follows the documented case-1 rule", documented, documented ? 1.0 : 0.0, 1.0, ""}}};
}

// Endpoints of random boundary-family controls, u2 = 1, T = 1.
std::vector<Point> random_family_endpoints(Rng& rng, int count) {
  std::vector<Point> out;
  for (int n = 0; n < count; ++n) {
    if (n % 2 == 0) {
      double d[3] = {uniform(rng, 0, 1), uniform(rng, 0, 1), uniform(rng, 0, 1)};
      const double s = d[0] + d[1] + d[2];
      const double a = uniform(rng, 0, 1) < 0.5 ? 1.0 : -1.0;
      const double b = uniform(rng, 0, 1) < 0.5 ? 1.0 : -1.0;
      out.push_back(propagate(Point::origin(), boundary_control_type1({a, uniform(rng, -1, 1), b},
                                                                      {d[0] / s, d[1] / s, d[2] / s})));
    } else {
      double Tb = uniform(rng, 0.01, 1);
      double T2 = uniform(rng, 0.01, 1);
      if (Tb > T2) std::swap(Tb, T2);
      const double T1 = uniform(rng, 0.01, 1);
      const double Te = uniform(rng, 0.0, 1.0) * cut_bound(Tb, T1, T2);
      const double total = Tb + T1 + T2 + Te;
      const double s = uniform(rng, 0, 1) < 0.5 ? 1.0 : -1.0;
      out.push_back(propagate(Point::origin(),
                              alternating_control(s, {Tb / total, T1 / total, T2 / total, Te / total})));
    }
  }
  return out;
}

SuiteReport vmax_reflection(const VerifyOptions& opt) {
  Rng rng(opt.seed + 6);
  int unreflected_violations = 0;
  int reflected_violations = 0;
  double unreflected_worst = 0.0;
  const auto points = random_family_endpoints(rng, 20000);
  for (const Point& q : points) {
    const double x = q.x();
    const double z = q.z();
    const double w = q.w();
    const double over_unreflected = q.v() - v_max(x, z, w);
    if (over_unreflected > 1e-9) {
      ++unreflected_violations;
      unreflected_worst = std::max(unreflected_worst, over_unreflected);
    }
    if (q.v() - v_upper(x, z, w) > 1e-9) ++reflected_violations;
  }
  return {"vmax-reflection",
          {at_most("endpoints above the reflected upper bound", reflected_violations, 0,
                   "unreflected v_max exceeded by " + std::to_string(unreflected_violations) + " of " +
                       std::to_string(points.size()) + " endpoints (worst " + fmt(unreflected_worst) + ", all z < 0)")}};
}

SuiteReport semialgebraic(const VerifyOptions& opt) {
  Rng rng(opt.seed + 7);
  int mismatches = 0;
  int compared = 0;
  for (int n = 0; n < 10000; ++n) {
    const double x = uniform(rng, -1, 1);
    const double zm = z_max(x);
    const double z = uniform(rng, -zm, zm);
    const double lo = -w_max(-x, -z);
    const double hi = w_max(x, z);
    const double w = uniform(rng, std::min(lo, hi), std::max(lo, hi));
    const double vlo = v_min(x, z, w);
    const double vhi = v_upper(x, z, w);
    const double v = uniform(rng, vlo - 0.05, vhi + 0.05);
    if (std::abs(v - vlo) < 1e-9 || std::abs(v - vhi) < 1e-9) continue;
    ++compared;
    if (v_bounds_polynomial(x, z, w, v) != v_bounds_radical(x, z, w, v)) ++mismatches;
  }
  return {"semialgebraic",
          {at_most("polynomial vs radical decisions", mismatches, 0, std::to_string(compared) + " random points")}};
}

SuiteReport symmetry_membership(const VerifyOptions& opt) {
  Rng rng(opt.seed + 8);
  int mismatches = 0;
  int inside = 0;
  const auto base = random_family_endpoints(rng, 400);
  for (std::size_t n = 0; n < base.size(); ++n) {
    Point q = base[n];
    if (n % 2 == 1) {
      q.coords()(2) += uniform(rng, -0.05, 0.05);
      q.coords()(3) += uniform(rng, -0.05, 0.05);
      q.coords()(4) += uniform(rng, -0.05, 0.05);
    }
    const double T = uniform(rng, 0.5, 2.0);
    q = dilation(q, T);
    const bool c = contains(q, T);
    inside += c;
    for (int k = 1; k <= 3; ++k) mismatches += contains(state_symmetry(k, q), T) != c;
    for (double f : {0.5, 2.0}) mismatches += contains(dilation(q, f), f * T) != c;
  }
  return {"symmetry-membership",
          {at_most("verdict changes under reflections and dilations", mismatches, 0,
                   std::to_string(base.size()) + " points, " + std::to_string(inside) + " inside")}};
}

SuiteReport boundary_attainment(const VerifyOptions&) {
  double worst = 0.0;
  int cells = 0;
  for (int i = -9; i <= 9; ++i) {
    const double x = i / 10.0;
    for (int j = -4; j <= 4; ++j) {
      const double z = j / 5.0 * z_max(x);
      // two-switch controls (a, -a, a); x fixes the middle duration
      double best = -std::numeric_limits<double>::infinity();
      for (double a : {1.0, -1.0}) {
        const double d2 = (1.0 - a * x) / 2.0;
        const double rest = 1.0 - d2;
        auto endpoint = [&](double d1) {
          std::vector<ControlSegment> segs;
          if (d1 > 0.0) segs.push_back({{a, 1.0}, d1});
          segs.push_back({{-a, 1.0}, d2});
          if (rest - d1 > 0.0) segs.push_back({{a, 1.0}, rest - d1});
          return propagate(Point::origin(), PiecewiseControl(segs));
        };
        const int N = 200;
        for (int k = 0; k < N; ++k) {
          double lo = rest * k / N;
          double hi = rest * (k + 1) / N;
          double glo = endpoint(lo).z() - z;
          const double ghi = endpoint(hi).z() - z;
          if (glo * ghi > 0.0) continue;
          for (int it = 0; it < 200 && hi - lo > 1e-16; ++it) {
            const double mid = 0.5 * (lo + hi);
            const double g = endpoint(mid).z() - z;
            if ((g > 0.0) == (glo > 0.0)) {
              lo = mid;
              glo = g;
            } else {
              hi = mid;
            }
          }
          best = std::max(best, endpoint(0.5 * (lo + hi)).w());
        }
      }
      worst = std::max(worst, std::abs(best - w_max(x, z)));
      ++cells;
    }
  }
  return {"boundary-attainment",
          {at_most("two-switch w vs w_max", worst, 1e-8, std::to_string(cells) + " (x, z) cells")}};
}

SuiteReport family_membership(const VerifyOptions& opt) {
  Rng rng(opt.seed + 9);
  const auto points = random_family_endpoints(rng, 2000);
  int rejected = 0;
  for (const Point& q : points) rejected += !contains(q, 1.0);
  return {"family-membership",
          {at_most("family endpoints rejected by contains", rejected, 0, std::to_string(points.size()) + " controls")}};
}

using SuiteFn = std::function<SuiteReport(const VerifyOptions&)>;

const std::vector<std::pair<std::string, SuiteFn>>& registry() {
  static const std::vector<std::pair<std::string, SuiteFn>> r = {
      {"structure-constants", structure_constants},
      {"casimir", casimir},
      {"group-table", group_table},
      {"propagator", propagator},
      {"abnormal-pin", abnormal_pin},
      {"boundary", boundary},
      {"threshold", threshold},
      {"reduced-integral", reduced_integral},
      {"stratum", stratum},
      {"saddle", saddle},
      {"vmax-reflection", vmax_reflection},
      {"semialgebraic", semialgebraic},
      {"symmetry-membership", symmetry_membership},
      {"boundary-attainment", boundary_attainment},
      {"family-membership", family_membership},
  };
  return r;
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> n;
    for (const auto& [name, fn] : registry()) n.push_back(name);
    return n;
  }();
  return names;
}

SuiteReport run_suite(const std::string& name, const VerifyOptions& options) {
  for (const auto& [n, fn] : registry()) {
    if (n != name) continue;
    const auto start = std::chrono::steady_clock::now();
    SuiteReport report = fn(options);
    report.suite = name;
    report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
  }
  throw std::invalid_argument("unknown suite '" + name + "'");
}

}  // namespace cartan
