// Singular arcs with u2 = 1: the singular control value, the reduced vertical
// subsystem and its region decomposition, the boundary control families with
// their cut bound, and a shooting solver for the singular endpoint map.

#ifndef CARTAN_SINGULAR_HPP
#define CARTAN_SINGULAR_HPP

#include "cartan/extremal.hpp"
#include "cartan/types.hpp"

#include <array>
#include <stdexcept>
#include <string>
#include <vector>

namespace cartan {

enum class SingularAxis { H1, H2 };
enum class SingularCase { A, B };

struct SingularArcSpec {
  SingularAxis axis;
  SingularCase kind;
  /// Sign of the nonvanishing h component, which is also the value of the
  /// fixed control component.
  int s;
  /// Value of the free control component in case B; 0 in case A, where the
  /// component is unconstrained in [-1, 1].
  double u_singular;
};

/// Default premise tolerance 1e-9 * max(1, |h|).
double singular_tolerance(const Covector& h);

/// Throws std::domain_error when h is not on a singular arc of the given axis
/// or the singular value leaves [-1, 1] by more than tol.
SingularArcSpec singular_control(SingularAxis axis, const Covector& h, double tol);
SingularArcSpec singular_control(SingularAxis axis, const Covector& h);

/// (hf1, hf3, hf4, hf5) = (h1, h3, h4, h5) / |h4|.
struct NormalizedAdjoint {
  double hf1;
  double hf3;
  double hf4;  // +-1
  double hf5;
};

/// Scales by |h4| and applies (hf1, hf3, hf5) -> -(hf1, hf3, hf5) when hf5 < 0.
/// Throws std::domain_error for h4 = 0.
NormalizedAdjoint normalize_adjoint(const Covector& h);

/// (-hf3, hf4 sgn(hf1) + hf5). Refused exactly on hf1 = 0.
Eigen::Vector2d reduced_rhs(const NormalizedAdjoint& n);

/// hf3^2 / 2 + hf5 hf1 + hf4 |hf1|.
double reduced_first_integral(const NormalizedAdjoint& n);

enum class RegionTag { C0, C01, C1, C1Inf };

struct RegionLabel {
  RegionTag tag;
  int sign;  // sign of hf4

  friend bool operator==(const RegionLabel&, const RegionLabel&) = default;
};

/// E.g. "C1inf-", "C01+".
std::string to_string(const RegionLabel& label);

/// hf5 ranges {0}, (0, 1), {1}, (1, inf) with equality tolerance 1e-12.
/// Throws std::invalid_argument for hf5 < 0 or hf4 not in {-1, 1}.
RegionLabel classify_adjoint_region(const NormalizedAdjoint& n);

struct ReducedSample {
  double t;
  double hf1;
  double hf3;
};

struct ReducedTrajectory {
  std::vector<ReducedSample> samples;
  std::vector<double> crossing_times;
  /// Set when the orbit hits hf1 = hf3 = 0; it then rests there (singular arc).
  bool singular_arc = false;
};

/// RK4 on the reduced system, one branch of sgn(hf1) at a time; steps that
/// cross hf1 = 0 are cut at the crossing located by bisection. An orbit that
/// meets the origin rests there when hf5 <= 1 (admissible singular value) and
/// leaves into hf1 < 0 otherwise.
ReducedTrajectory integrate_reduced(const NormalizedAdjoint& n0, double T, double dt = 1e-4, int record_stride = 1);

/// Values (a, c, b) with a, b = +-1 and c in [-1, 1]; nonnegative durations,
/// positive total. Zero-length pieces are dropped. u2 = 1 throughout.
PiecewiseControl boundary_control_type1(const std::array<double, 3>& values, const std::array<double, 3>& durations);

/// Values alternating from first_value = +-1 with durations
/// Tb, T1, T2, T1, T2, ..., Ti, Te subject to 0 < Tb <= T2, T1 > 0 and
/// 0 <= Te <= T_{3-i}. At least (Tb, T1, T2, Te) must be given.
PiecewiseControl alternating_control(double first_value, const std::vector<double>& durations);

/// (T2 - Tb) / (T2 + Tb) * T1 for 0 < Tb <= T2 and T1 > 0.
double cut_bound(double Tb, double T1, double T2);

/// True iff the control alternates +-1 over four pieces (Tb, T1, T2, Te) with
/// Tb < T2 and Te <= cut_bound(Tb, T1, T2). Throws std::invalid_argument for
/// any other shape.
bool is_geometrically_optimal_candidate(const PiecewiseControl& c);

class ShootingError : public std::runtime_error {
 public:
  ShootingError(const std::string& what, double best_residual)
      : std::runtime_error(what), best_residual_(best_residual) {}
  double best_residual() const { return best_residual_; }

 private:
  double best_residual_;
};

struct ReachOptions {
  double tol = 1e-9;
  int starts = 48;
  int max_iterations = 200;
  unsigned seed = 0;
};

/// Piecewise control with at most 4 switchings, one component constant +-1,
/// that steers the origin to q1 in time T. The match is measured in the
/// normalized chart (T = 1). Throws std::invalid_argument when q1 is not in
/// the singular attainable set and ShootingError when no family converges.
PiecewiseControl reach_singular(const Point& q1, double T, const ReachOptions& options = {});

}  // namespace cartan

#endif  // CARTAN_SINGULAR_HPP
