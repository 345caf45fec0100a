// Bang-bang Hamiltonian flow: exact piecewise-polynomial propagation, the
// angular chart on {H = 1}, the dihedral symmetry group G of the vertical
// system, phase-portrait strata and the set-valued exponential map.

#ifndef CARTAN_BANGBANG_HPP
#define CARTAN_BANGBANG_HPP

#include "cartan/extremal.hpp"
#include "cartan/types.hpp"

#include <array>
#include <string>
#include <utility>
#include <vector>

namespace cartan {

// --- exact flow under constant controls -------------------------------------

/// Coefficients of the 10 state coordinates as cubic polynomials in the local
/// time of a constant-control segment; row k, column p multiplies tau^p.
using SegmentPolynomial = Eigen::Matrix<double, 10, 4>;

SegmentPolynomial segment_coefficients(const ExtremalState& s, const Control& u);

/// Evaluates a segment polynomial at local time tau.
ExtremalState evaluate_segment(const SegmentPolynomial& coeffs, double tau);

/// Exact flow of the PMP system under the constant control u for time tau.
ExtremalState segment_flow(const ExtremalState& s, const Control& u, double tau);

/// Exact endpoint of the horizontal system driven by a piecewise control.
Point propagate(const Point& q0, const PiecewiseControl& control);

// --- angular chart ----------------------------------------------------------

/// theta in [0, 2 pi) with h1 = sgn(cos) cos^2, h2 = sgn(sin) sin^2.
/// Requires |h1| + |h2| = 1 within 1e-9.
double theta_from_h(double h1, double h2);

/// (h1, h2) on the square |h1| + |h2| = 1.
Eigen::Vector2d h_from_theta(double theta);

/// U(theta) = s1 cos^2 h5 - s2 sin^2 h4.
double potential_U(double theta, double h4, double h5);

struct AngularState {
  double theta;
  double h3;
  double h4;
  double h5;
};

AngularState to_angular(const Covector& h);
Covector from_angular(const AngularState& a);

/// (d theta, d h3) = (h3 / |sin 2 theta|, s1 h4 + s2 h5). Refused on the
/// chart boundary theta = n pi / 2.
Eigen::Vector2d angular_rhs(const AngularState& a);

// --- symmetry group ---------------------------------------------------------

enum class Symmetry : int { Id = 0, E1, E2, E3, E4, E5, E6, E7 };

inline constexpr std::array<Symmetry, 8> kSymmetries = {Symmetry::Id, Symmetry::E1, Symmetry::E2, Symmetry::E3,
                                                        Symmetry::E4, Symmetry::E5, Symmetry::E6, Symmetry::E7};

std::string to_string(Symmetry e);

/// Signed permutation matrix acting on (h1, ..., h5).
Eigen::Matrix<double, 5, 5> symmetry_matrix(Symmetry e);

Covector apply_symmetry(Symmetry e, const Covector& h);

/// Functional composition a o b (b acts first).
Symmetry compose(Symmetry a, Symmetry b);

Symmetry inverse(Symmetry e);

/// Product table of eps^1..eps^7: entry [i-1][j-1] is the element
/// obtained by applying eps^i first and eps^j second, i.e. eps^j o eps^i.
const std::array<std::array<Symmetry, 7>, 7>& product_table();

/// Image in the wedge h4 >= h5 >= 0 and the element that maps there
/// (Id preferred, then the lowest index).
std::pair<Covector, Symmetry> to_fundamental_domain(const Covector& h);

// --- phase-portrait strata --------------------------------------------------

struct StratumLabel {
  int case_index;  // 1..4
  int stratum;     // C_1 .. C_8 (case 1), C_1 .. C_6, C_1 .. C_4, C_1 .. C_2

  friend bool operator==(const StratumLabel&, const StratumLabel&) = default;
};

/// Case of a wedge point (h4 >= h5 >= 0): 1) h4 > h5 > 0, 2) h4 > h5 = 0,
/// 3) h4 = h5 > 0, 4) h4 = h5 = 0.
int domain_case(double h4, double h5, double tol = 1e-12);

/// Critical energy values of the given case in increasing order.
std::vector<double> critical_energies(int case_index, double h4, double h5);

/// Stratum of the level E of the Casimirs (h4, h5), any (h4, h5) plane point.
/// Throws std::domain_error when E lies below the potential minimum.
StratumLabel stratum_of_level(double h4, double h5, double E, double tol = 1e-12);

/// Requires H(h) = 1 within 1e-9.
StratumLabel classify_stratum(const Covector& h, double tol = 1e-12);

// --- exponential map --------------------------------------------------------

struct BangSegment {
  double t0;
  double t1;
  Control u;
  SegmentPolynomial coeffs;
};

struct BangBranch {
  std::vector<BangSegment> segments;
  std::vector<double> switch_times;
  /// Instants where h3 and one of h1, h2 vanish together.
  std::vector<double> corner_times;
  /// Set when a corner continuation was decided by theta-continuity rather
  /// than by the documented case-1 saddle splitting.
  bool inferred_continuation = false;
  ExtremalState endpoint;

  ExtremalState at(double t) const;
};

struct ExpResult {
  std::vector<BangBranch> branches;
};

struct ExpOptions {
  int branch_cap = 64;
  /// Corner threshold on |h_i| at the turning point and on |h3|.
  double corner_tol = 1e-12;
};

/// Exact bang-bang extremals from (h0, q0) over [0, T]. H(h0) must equal 1
/// within 1e-9. Several branches are returned when a saddle corner of a
/// critical energy level is crossed. Throws std::domain_error for singular
/// initial data and std::length_error when more than branch_cap branches arise.
ExpResult exp_bangbang(const Covector& h0, const Point& q0, double T, const ExpOptions& options = {});

std::vector<double> switching_times(const ExpResult& result, std::size_t branch);

/// Samples of the energy level {h3^2/2 + U(theta) = E} in the (theta, h3)
/// cylinder: upper arc with increasing theta, then the lower arc backwards.
/// Throws std::domain_error when the level set is empty.
std::vector<Eigen::Vector2d> level_curve(double h4, double h5, double E, int n_samples);

struct CutSearchResult {
  bool found = false;
  double time = 0.0;
  std::string reason;
};

/// Experimental lower-bound probe for the cut time: flags the first grid time
/// at which the branch endpoint of Exp(h0, t) is reached earlier, or at the
/// same time by a different extremal of the symmetry orbit of h0.
CutSearchResult cut_search(const Covector& h0, double T_max, int n_grid, double tol = 1e-9);

}  // namespace cartan

#endif  // CARTAN_BANGBANG_HPP
