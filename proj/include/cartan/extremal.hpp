// Pontryagin extremals: Hamiltonian right-hand sides, the maximizing control
// set, an RK4 integrator with switching-event refinement and an arc classifier.

#ifndef CARTAN_EXTREMAL_HPP
#define CARTAN_EXTREMAL_HPP

#include "cartan/cartan_core.hpp"
#include "cartan/types.hpp"

#include <span>
#include <string_view>
#include <variant>
#include <vector>

namespace cartan {

/// Covector paired with its base point.
struct ExtremalState {
  Covector h;
  Point q;

  Vec10 stacked() const;
  static ExtremalState from_stacked(const Vec10& s);
};

/// H = |h1| + |h2|.
inline double hamiltonian_H(const Covector& h) { return std::abs(h.h1()) + std::abs(h.h2()); }

/// Zero tolerance used by the feedback law: 1e-10 * max(1, |h|).
double degeneracy_tolerance(const Covector& h);

struct VertexControl {
  Control u;
};
/// One component pinned to +-1, the other free in [-1, 1].
struct EdgeControl {
  int free_component;  // 1 or 2
  double fixed_value;  // value of the other component
};
struct FullSquare {};

using MaximizingSet = std::variant<VertexControl, EdgeControl, FullSquare>;

/// argmax over U of u1 h1 + u2 h2.
MaximizingSet max_control(const Covector& h, double tol);

/// (dh1, ..., dh5) = (-u2 h3, u1 h3, u1 h4 + u2 h5, 0, 0).
Vec5 vertical_rhs(const Covector& h, const Control& u);

/// Vertical part stacked over u1 X1(q) + u2 X2(q).
Vec10 full_rhs(const ExtremalState& s, const Control& u);

struct ControlSegment {
  Control u;
  double duration;
};

/// Finite sequence of constant controls with positive durations.
class PiecewiseControl {
 public:
  PiecewiseControl() = default;
  explicit PiecewiseControl(std::vector<ControlSegment> segments);

  const std::vector<ControlSegment>& segments() const { return segments_; }
  std::size_t size() const { return segments_.size(); }
  bool empty() const { return segments_.empty(); }
  double total_duration() const;
  /// Number of value changes between consecutive segments.
  int switch_count() const;
  /// Control active at time t (right-continuous; clamps to the last segment).
  Control at(double t) const;

  /// Drops segments shorter than min_duration and merges equal neighbours.
  PiecewiseControl simplified(double min_duration = 0.0, double value_tol = 0.0) const;
  /// Every duration multiplied by factor > 0.
  PiecewiseControl time_scaled(double factor) const;

 private:
  std::vector<ControlSegment> segments_;
};

/// Selects the vertex (sgn h1, sgn h2) at every instant.
struct FeedbackLaw {};

using ControlLaw = std::variant<FeedbackLaw, PiecewiseControl>;

struct TrajectorySample {
  double t;
  ExtremalState state;
  Control u;  // control applied on the interval starting at t
};

struct Trajectory {
  std::vector<TrajectorySample> samples;
  std::vector<double> switch_times;

  const ExtremalState& final_state() const { return samples.back().state; }
};

struct IntegrateOptions {
  double dt = 1e-4;
  /// Keep every n-th regular sample; event and final samples are always kept.
  int record_stride = 1;
  /// Width of the bisection bracket around a switching instant.
  double event_time_tol = 1e-12;
};

/// Classical RK4 on the 10-dimensional PMP system. Under FeedbackLaw, steps
/// that straddle a sign change of h1 or h2 are split at the switching instant
/// located by bisection. Throws std::invalid_argument for nonpositive T or dt,
/// std::domain_error when the feedback law is not a vertex.
Trajectory integrate(const ExtremalState& s0, const ControlLaw& law, double T, const IntegrateOptions& options);
Trajectory integrate(const ExtremalState& s0, const ControlLaw& law, double T, double dt);

enum class ArcKind { BangBang, H1Singular, H2Singular, Mixed, Abnormal, Undetermined };
enum class Normality { Normal, Abnormal };

struct ArcClass {
  ArcKind kind;
  Normality normality;
};

std::string_view to_string(ArcKind kind);

/// Arc taxonomy from sampled covectors. A zero of h1 h2 spanning at most two
/// consecutive samples counts as an isolated switching instant.
ArcClass classify_arc(std::span<const TrajectorySample> samples, double tol);

}  // namespace cartan

#endif  // CARTAN_EXTREMAL_HPP
