#include "cartan/extremal.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace cartan {

Vec10 ExtremalState::stacked() const {
  Vec10 s;
  s << h.components(), q.coords();
  return s;
}

ExtremalState ExtremalState::from_stacked(const Vec10& s) {
  return {Covector(Vec5(s.head<5>())), Point(Vec5(s.tail<5>()))};
}

double degeneracy_tolerance(const Covector& h) { return 1e-10 * std::max(1.0, h.components().norm()); }

MaximizingSet max_control(const Covector& h, double tol) {
  if (tol < 0.0) throw std::invalid_argument("max_control: tolerance must be nonnegative");
  const bool zero1 = std::abs(h.h1()) <= tol;
  const bool zero2 = std::abs(h.h2()) <= tol;
  if (zero1 && zero2) return FullSquare{};
  if (zero1) return EdgeControl{1, static_cast<double>(sign_of(h.h2()))};
  if (zero2) return EdgeControl{2, static_cast<double>(sign_of(h.h1()))};
  return VertexControl{{static_cast<double>(sign_of(h.h1())), static_cast<double>(sign_of(h.h2()))}};
}

Vec5 vertical_rhs(const Covector& h, const Control& u) {
  Vec5 d;
  d << -u.u2 * h.h3(), u.u1 * h.h3(), u.u1 * h.h4() + u.u2 * h.h5(), 0.0, 0.0;
  return d;
}

Vec10 full_rhs(const ExtremalState& s, const Control& u) {
  Vec10 d;
  d << vertical_rhs(s.h, u), horizontal_velocity(s.q, u);
  return d;
}

// ---------------------------------------------------------------------------

PiecewiseControl::PiecewiseControl(std::vector<ControlSegment> segments) : segments_(std::move(segments)) {
  for (const auto& seg : segments_) {
    if (!(seg.duration > 0.0) || !std::isfinite(seg.duration)) {
      throw std::invalid_argument("PiecewiseControl: durations must be positive and finite");
    }
    if (!seg.u.admissible(1e-12)) {
      throw std::invalid_argument("PiecewiseControl: control value outside the unit square");
    }
  }
}

double PiecewiseControl::total_duration() const {
  double total = 0.0;
  for (const auto& seg : segments_) total += seg.duration;
  return total;
}

int PiecewiseControl::switch_count() const {
  int n = 0;
  for (std::size_t k = 1; k < segments_.size(); ++k) {
    if (!(segments_[k].u == segments_[k - 1].u)) ++n;
  }
  return n;
}

Control PiecewiseControl::at(double t) const {
  if (segments_.empty()) throw std::logic_error("PiecewiseControl::at on an empty control");
  double start = 0.0;
  for (const auto& seg : segments_) {
    if (t < start + seg.duration) return seg.u;
    start += seg.duration;
  }
  return segments_.back().u;
}

PiecewiseControl PiecewiseControl::simplified(double min_duration, double value_tol) const {
  std::vector<ControlSegment> out;
  for (const auto& seg : segments_) {
    if (seg.duration <= min_duration) continue;
    if (!out.empty() && std::abs(out.back().u.u1 - seg.u.u1) <= value_tol &&
        std::abs(out.back().u.u2 - seg.u.u2) <= value_tol) {
      out.back().duration += seg.duration;
    } else {
      out.push_back(seg);
    }
  }
  return PiecewiseControl(std::move(out));
}

PiecewiseControl PiecewiseControl::time_scaled(double factor) const {
  if (!(factor > 0.0)) throw std::invalid_argument("time_scaled: factor must be positive");
  std::vector<ControlSegment> out = segments_;
  for (auto& seg : out) seg.duration *= factor;
  return PiecewiseControl(std::move(out));
}

// ---------------------------------------------------------------------------

namespace {

Vec10 rk4_step(const Vec10& y, const Control& u, double h) {
  auto f = [&u](const Vec10& s) { return full_rhs(ExtremalState::from_stacked(s), u); };
  const Vec10 k1 = f(y);
  const Vec10 k2 = f(y + 0.5 * h * k1);
  const Vec10 k3 = f(y + 0.5 * h * k2);
  const Vec10 k4 = f(y + h * k3);
  return y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

class Recorder {
 public:
  Recorder(Trajectory& traj, int stride) : traj_(traj), stride_(std::max(1, stride)) {}

  void regular(double t, const Vec10& y, const Control& u) {
    if (++counter_ % stride_ == 0) push(t, y, u);
  }
  void always(double t, const Vec10& y, const Control& u) { push(t, y, u); }

 private:
  void push(double t, const Vec10& y, const Control& u) {
    if (!traj_.samples.empty() && traj_.samples.back().t == t) {
      traj_.samples.back() = {t, ExtremalState::from_stacked(y), u};
      return;
    }
    traj_.samples.push_back({t, ExtremalState::from_stacked(y), u});
  }

  Trajectory& traj_;
  int stride_;
  long counter_ = 0;
};

void validate_horizon(double T, double dt) {
  if (!(T > 0.0)) throw std::invalid_argument("integrate: horizon must be positive");
  if (!(dt > 0.0)) throw std::invalid_argument("integrate: step must be positive");
}

Trajectory integrate_piecewise(const ExtremalState& s0, const PiecewiseControl& control, double T,
                               const IntegrateOptions& opt) {
  const double total = control.total_duration();
  if (std::abs(total - T) > 1e-9 * std::max(1.0, T)) {
    throw std::invalid_argument("integrate: piecewise control duration " + std::to_string(total) +
                                " does not match horizon " + std::to_string(T));
  }
  Trajectory traj;
  Recorder rec(traj, opt.record_stride);
  Vec10 y = s0.stacked();
  double t = 0.0;
  const auto& segs = control.segments();
  for (std::size_t k = 0; k < segs.size(); ++k) {
    const Control u = segs[k].u;
    rec.always(t, y, u);
    if (k > 0 && !(u == segs[k - 1].u)) traj.switch_times.push_back(t);
    const double seg_end = t + segs[k].duration;
    const long n_steps = std::max(1L, static_cast<long>(std::ceil(segs[k].duration / opt.dt - 1e-9)));
    const double h = segs[k].duration / static_cast<double>(n_steps);
    for (long n = 0; n < n_steps; ++n) {
      y = rk4_step(y, u, h);
      const double tn = (n + 1 == n_steps) ? seg_end : t + (n + 1) * h;
      if (n + 1 < n_steps) rec.regular(tn, y, u);
    }
    t = seg_end;
  }
  rec.always(t, y, segs.empty() ? Control{} : segs.back().u);
  return traj;
}

Trajectory integrate_feedback(const ExtremalState& s0, double T, const IntegrateOptions& opt) {
  const auto initial = max_control(s0.h, degeneracy_tolerance(s0.h));
  const auto* vertex = std::get_if<VertexControl>(&initial);
  if (vertex == nullptr) {
    throw std::domain_error(
        "integrate: feedback law is not pointwise determined (h1 or h2 vanishes); supply a PiecewiseControl");
  }
  Control u = vertex->u;
  Trajectory traj;
  Recorder rec(traj, opt.record_stride);
  Vec10 y = s0.stacked();
  double t = 0.0;
  rec.always(t, y, u);

  while (T - t > 1e-15 * std::max(1.0, T)) {
    const double h = std::min(opt.dt, T - t);
    const Vec10 y_end = rk4_step(y, u, h);

    // earliest component whose sign leaves the current vertex
    double event = h;
    int which = 0;
    for (int i = 1; i <= 2; ++i) {
      const double s = (i == 1) ? u.u1 : u.u2;
      if (s * y_end(i - 1) >= 0.0) continue;
      double lo = 0.0;
      double hi = h;
      while (hi - lo > opt.event_time_tol) {
        const double mid = 0.5 * (lo + hi);
        if (s * rk4_step(y, u, mid)(i - 1) < 0.0) {
          hi = mid;
        } else {
          lo = mid;
        }
      }
      if (hi < event || which == 0) {
        event = hi;
        which = i;
      }
    }

    if (which == 0) {
      y = y_end;
      t += h;
      rec.regular(t, y, u);
      continue;
    }

    y = rk4_step(y, u, event);
    t += event;
    const double tol = degeneracy_tolerance(Covector(Vec5(y.head<5>())));
    if (std::abs(y(2)) <= tol) {
      throw std::domain_error("integrate: switching at a corner (h3 = 0) at t = " + std::to_string(t) +
                              "; continuation is not unique, use exp_bangbang");
    }
    if (which == 1) {
      u.u1 = -u.u1;
    } else {
      u.u2 = -u.u2;
    }
    traj.switch_times.push_back(t);
    rec.always(t, y, u);
  }
  rec.always(T, y, u);
  return traj;
}

}  // namespace

Trajectory integrate(const ExtremalState& s0, const ControlLaw& law, double T, const IntegrateOptions& options) {
  validate_horizon(T, options.dt);
  if (const auto* pc = std::get_if<PiecewiseControl>(&law)) return integrate_piecewise(s0, *pc, T, options);
  return integrate_feedback(s0, T, options);
}

Trajectory integrate(const ExtremalState& s0, const ControlLaw& law, double T, double dt) {
  IntegrateOptions opt;
  opt.dt = dt;
  return integrate(s0, law, T, opt);
}

// ---------------------------------------------------------------------------

std::string_view to_string(ArcKind kind) {
  switch (kind) {
    case ArcKind::BangBang:
      return "bang-bang";
    case ArcKind::H1Singular:
      return "h1-singular";
    case ArcKind::H2Singular:
      return "h2-singular";
    case ArcKind::Mixed:
      return "mixed";
    case ArcKind::Abnormal:
      return "abnormal";
    case ArcKind::Undetermined:
      return "undetermined";
  }
  return "undetermined";
}

namespace {

// Length of the longest run of consecutive samples satisfying pred.
template <typename Pred>
std::size_t longest_run(std::span<const TrajectorySample> samples, Pred pred) {
  std::size_t best = 0;
  std::size_t run = 0;
  for (const auto& s : samples) {
    run = pred(s.state.h) ? run + 1 : 0;
    best = std::max(best, run);
  }
  return best;
}

}  // namespace

ArcClass classify_arc(std::span<const TrajectorySample> samples, double tol) {
  if (samples.empty()) throw std::invalid_argument("classify_arc: empty sample list");
  const auto degenerate = [tol](const Covector& h) { return hamiltonian_H(h) <= tol; };
  const auto zero1 = [tol](const Covector& h) { return std::abs(h.h1()) <= tol; };
  const auto zero2 = [tol](const Covector& h) { return std::abs(h.h2()) <= tol; };

  const std::size_t n = samples.size();
  const std::size_t abnormal_run = longest_run(samples, degenerate);
  if (abnormal_run == n) return {ArcKind::Abnormal, Normality::Abnormal};
  if (abnormal_run > 0) return {ArcKind::Undetermined, Normality::Normal};

  const std::size_t run1 = longest_run(samples, zero1);
  const std::size_t run2 = longest_run(samples, zero2);
  if (run1 == n) return {ArcKind::H1Singular, Normality::Normal};
  if (run2 == n) return {ArcKind::H2Singular, Normality::Normal};

  constexpr std::size_t kIsolated = 2;
  if (run1 <= kIsolated && run2 <= kIsolated) return {ArcKind::BangBang, Normality::Normal};
  return {ArcKind::Mixed, Normality::Normal};
}

}  // namespace cartan
