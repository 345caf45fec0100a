// Singular attainable set: closed-form boundary functions in the chart
// T = 1, y1 = 1, membership testing and a brute-force sampling oracle.

#ifndef CARTAN_ATTAINABLE_HPP
#define CARTAN_ATTAINABLE_HPP

#include "cartan/types.hpp"

#include <functional>
#include <string_view>

namespace cartan {

/// (1 - x^2) / 4 for |x| <= 1.
double z_max(double x);

/// Upper w bound over the admissible (x, z) region; the z^2/(1 + x) term is
/// taken at its limit 0 when x = -1.
double w_max(double x, double z);

/// Separator between the v_min branches.
double w_mm(double x, double z);

/// A + B sqrt(R): the radical form every v bound takes.
struct RadicalForm {
  double A;
  double B;
  double R;

  /// Radicands in [-1e-12, 0) are clamped; below that std::domain_error.
  double value() const;
};

RadicalForm v_max_form(double x, double z, double w);
RadicalForm v_min_plus_form(double x, double z, double w);
RadicalForm v_min_minus_form(double x, double z, double w);

/// Upper v bound in its unreflected form. Tight only for z >= 0.
double v_max(double x, double z, double w);
double v_min_plus(double x, double z, double w);
double v_min_minus(double x, double z, double w);

/// Lower v bound with the three-way dispatch on w_mm.
double v_min(double x, double z, double w);

/// Upper v bound valid on the whole section: v_max for z >= 0 and its
/// reflection v_max(-x, -z, -w) for z < 0.
double v_upper(double x, double z, double w);

enum class Constraint { None, Face, XRange, ZMax, WMax, WMin, VMax, VMin };

std::string_view to_string(Constraint c);

struct Membership {
  bool inside = false;
  /// First violated constraint, or the one with the least slack when inside.
  Constraint binding = Constraint::None;
  /// Signed slack of the binding constraint in the normalized chart.
  double margin = 0.0;
  /// Point after dilation to T = 1 and reflection into y = 1, x >= 0.
  Point chart;
};

/// Dilation to T = 1 followed by the reflections that move the point onto
/// the face y = 1 with x >= 0. Returns false when the point lies on neither
/// face |x| = 1 nor |y| = 1 within tol.
bool normalize_to_chart(const Point& q, double T, double tol, Point& chart);

/// Throws std::invalid_argument when T <= 0.
Membership membership(const Point& q, double T, double tol = 1e-9);

inline bool contains(const Point& q, double T, double tol = 1e-9) { return membership(q, T, tol).inside; }

/// The v bounds decided through polynomial sign conditions instead of square
/// roots. Chart coordinates; (x, z, w) must satisfy the z and w bounds.
bool v_bounds_polynomial(double x, double z, double w, double v);
bool v_bounds_radical(double x, double z, double w, double v);

enum class SectionFamily { Type1, Type2 };

std::string_view to_string(SectionFamily f);

using SectionSink = std::function<void(const Point&, SectionFamily)>;

/// Streams endpoints (u2 = 1, from the origin, horizon T) of the boundary
/// control families over a lattice with n_grid duration steps:
///   type 1: values (a, c, b), a, b = +-1, c on ceil(n_grid / 10) + 1 points
///           of [-1, 1], durations k_i T / n_grid summing to T;
///   type 2: values alternating from +-1 with durations (Tb, T1, T2, Te),
///           Tb < T2 on the lattice and 0 < Te = T - Tb - T1 - T2 at most the
///           cut bound.
/// Emission order is fixed and independent of jobs.
void brute_force_section(double T, int n_grid, const SectionSink& sink, int jobs = 1);

}  // namespace cartan

#endif  // CARTAN_ATTAINABLE_HPP
