#include "cartan/attainable.hpp"

#include "cartan/bangbang.hpp"
#include "cartan/cartan_core.hpp"
#include "cartan/singular.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace cartan {

namespace {

constexpr double kClamp = 1e-12;

void require_unit_x(double x, const char* what) {
  if (!(std::abs(x) <= 1.0 + 1e-12)) throw std::domain_error(std::string(what) + ": |x| must not exceed 1");
}

// z^2 / (1 + x) with its removable singularity at x = -1.
double z_ratio(double z, double x) {
  const double d = 1.0 + x;
  return d <= 1e-15 ? 0.0 : z * z / d;
}

void require_z_bound(double x, double z, const char* what) {
  require_unit_x(x, what);
  if (std::abs(z) > z_max(std::clamp(x, -1.0, 1.0)) + 1e-9) {
    throw std::domain_error(std::string(what) + ": |z| exceeds z_max(x)");
  }
}

}  // namespace

double z_max(double x) {
  require_unit_x(x, "z_max");
  return (1.0 - x * x) / 4.0;
}

double w_max(double x, double z) {
  require_z_bound(x, z, "w_max");
  return (3.0 - 15.0 * x - 3.0 * x * x - 17.0 * x * x * x) / 96.0 + z / 2.0 - z_ratio(z, x) / 2.0;
}

double w_mm(double x, double z) {
  require_z_bound(x, z, "w_mm");
  return (-x * (1.0 + x * x) + (3.0 + sign_of(z)) * z - 4.0 * z_ratio(z, x)) / 6.0;
}

double RadicalForm::value() const {
  if (R < -kClamp) {
    throw std::domain_error("negative radicand " + std::to_string(R) + ": arguments outside the admissible region");
  }
  return A + B * std::sqrt(std::max(R, 0.0));
}

RadicalForm v_max_form(double x, double z, double w) {
  const double a = 1.0 - x * x + 4.0 * z;
  const double b = 12.0 * w + 3.0 * x + x * x * x - 6.0 * (1.0 - x) * z;
  return {(1.0 + 3.0 * x * x - 6.0 * (1.0 - x) * z) / 12.0, std::numbers::sqrt2 / 48.0,
          9.0 * a * a * a + 8.0 * b * b};
}

RadicalForm v_min_plus_form(double x, double z, double w) {
  const double x3 = x * x * x;
  return {(3.0 + 12.0 * w + 3.0 * x * x + 2.0 * x3 - 6.0 * (1.0 - x) * z) / 12.0, -(1.0 - x) / 12.0,
          (1.0 - x) * (1.0 + 24.0 * w + 3.0 * x + 4.0 * x3) - 12.0 * (1.0 - x) * z - 12.0 * z * z};
}

RadicalForm v_min_minus_form(double x, double z, double w) {
  const double x3 = x * x * x;
  const double p = 1.0 - 12.0 * w - 2.0 * x - x * x - 2.0 * x3 + 2.0 * (1.0 + x) * z;
  const double r = (1.0 + x) * (6.0 * w + x + x3) - 4.0 * (1.0 + x) * z + 4.0 * z * z;
  return {(1.0 + 3.0 * x * x + 6.0 * z + 6.0 * x * z) / 12.0, 1.0 / 12.0, p * p + 4.0 * (1.0 - x * x - 4.0 * z) * r};
}

double v_max(double x, double z, double w) { return v_max_form(x, z, w).value(); }
double v_min_plus(double x, double z, double w) { return v_min_plus_form(x, z, w).value(); }
double v_min_minus(double x, double z, double w) { return v_min_minus_form(x, z, w).value(); }

namespace {

// The branch of the lower bound active at (x, z, w), as a radical form.
RadicalForm v_min_branch(double x, double z, double w) {
  if (w >= w_mm(x, z)) return v_min_plus_form(-x, -z, -w);
  if (w <= -w_mm(-x, -z)) return v_min_plus_form(x, z, w);
  const double s = z >= 0.0 ? 1.0 : -1.0;
  return v_min_minus_form(x * s, std::abs(z), w * s);
}

RadicalForm v_upper_branch(double x, double z, double w) {
  return z >= 0.0 ? v_max_form(x, z, w) : v_max_form(-x, -z, -w);
}

}  // namespace

double v_min(double x, double z, double w) { return v_min_branch(x, z, w).value(); }

double v_upper(double x, double z, double w) { return v_upper_branch(x, z, w).value(); }

std::string_view to_string(Constraint c) {
  switch (c) {
    case Constraint::None:
      return "none";
    case Constraint::Face:
      return "face";
    case Constraint::XRange:
      return "x_range";
    case Constraint::ZMax:
      return "z_max";
    case Constraint::WMax:
      return "w_max";
    case Constraint::WMin:
      return "w_min";
    case Constraint::VMax:
      return "v_max";
    case Constraint::VMin:
      return "v_min";
  }
  return "none";
}

bool normalize_to_chart(const Point& q, double T, double tol, Point& chart) {
  if (!(T > 0.0)) throw std::invalid_argument("normalize_to_chart: T must be positive");
  Point p = dilation(q, 1.0 / T);
  if (std::abs(std::abs(p.y()) - 1.0) <= tol) {
    if (p.y() < 0.0) p = state_symmetry(2, p);
  } else if (std::abs(std::abs(p.x()) - 1.0) <= tol) {
    p = state_symmetry(3, p);
    if (p.y() < 0.0) p = state_symmetry(2, p);
  } else {
    chart = p;
    return false;
  }
  if (p.x() < 0.0) p = state_symmetry(1, p);
  chart = p;
  return true;
}

Membership membership(const Point& q, double T, double tol) {
  if (!(T > 0.0)) throw std::invalid_argument("membership: T must be positive");
  Membership m;
  if (!q.is_finite()) {
    m.binding = Constraint::Face;
    m.margin = -std::numeric_limits<double>::infinity();
    return m;
  }
  const bool on_face = normalize_to_chart(q, T, tol, m.chart);
  const Point& c = m.chart;
  if (!on_face) {
    m.binding = Constraint::Face;
    m.margin = -std::min(std::abs(std::abs(c.x()) - 1.0), std::abs(std::abs(c.y()) - 1.0));
    return m;
  }

  m.inside = true;
  m.margin = std::numeric_limits<double>::infinity();
  // records the slack of one inequality; stops at the first violation
  auto check = [&](Constraint k, double slack) {
    if (!m.inside) return;
    if (slack < -tol) {
      m.inside = false;
      m.binding = k;
      m.margin = slack;
    } else if (slack < m.margin) {
      m.binding = k;
      m.margin = slack;
    }
  };

  check(Constraint::XRange, 1.0 - std::abs(c.x()));
  if (!m.inside) return m;
  const double x = std::clamp(c.x(), -1.0, 1.0);
  const double zm = z_max(x);
  check(Constraint::ZMax, zm - std::abs(c.z()));
  if (!m.inside) return m;
  const double z = std::clamp(c.z(), -zm, zm);
  const double w_hi = w_max(x, z);
  const double w_lo = -w_max(-x, -z);
  check(Constraint::WMax, w_hi - c.w());
  check(Constraint::WMin, c.w() - w_lo);
  if (!m.inside) return m;
  const double w = std::clamp(c.w(), std::min(w_lo, w_hi), std::max(w_lo, w_hi));
  try {
    check(Constraint::VMax, v_upper(x, z, w) - c.v());
    check(Constraint::VMin, c.v() - v_min(x, z, w));
  } catch (const std::domain_error&) {
    m.inside = false;
    m.binding = Constraint::VMax;
    m.margin = -std::numeric_limits<double>::infinity();
  }
  return m;
}

// ---------------------------------------------------------------------------

namespace {

// v <= A + B sqrt(R) for B > 0, without square roots.
bool below_plus_root(double v, const RadicalForm& f) {
  const double d = v - f.A;
  return d <= 0.0 || f.B * f.B * f.R - d * d >= 0.0;
}

// v >= A + B sqrt(R).
bool above_root(double v, const RadicalForm& f) {
  const double d = v - f.A;
  if (f.B >= 0.0) return d >= 0.0 && d * d - f.B * f.B * f.R >= 0.0;
  return d >= 0.0 || f.B * f.B * f.R - d * d >= 0.0;
}

}  // namespace

bool v_bounds_polynomial(double x, double z, double w, double v) {
  const RadicalForm lo = v_min_branch(x, z, w);
  const RadicalForm hi = v_upper_branch(x, z, w);
  return above_root(v, {lo.A, lo.B, std::max(lo.R, 0.0)}) && below_plus_root(v, {hi.A, hi.B, std::max(hi.R, 0.0)});
}

bool v_bounds_radical(double x, double z, double w, double v) { return v_min(x, z, w) <= v && v <= v_upper(x, z, w); }

// ---------------------------------------------------------------------------

std::string_view to_string(SectionFamily f) { return f == SectionFamily::Type1 ? "type1" : "type2"; }

namespace {

using Batch = std::vector<std::pair<Point, SectionFamily>>;

Point endpoint_of(const std::vector<ControlSegment>& segs) {
  ExtremalState s{Covector(), Point::origin()};
  for (const auto& seg : segs) {
    if (seg.duration > 0.0) s = segment_flow(s, seg.u, seg.duration);
  }
  return s.q;
}

// Type 1 endpoints with first duration index k1 fixed.
void type1_slice(double T, int n, int k1, const std::vector<double>& values, Batch& out) {
  const double h = T / n;
  for (int k2 = 0; k1 + k2 <= n; ++k2) {
    const int k3 = n - k1 - k2;
    for (double a : {1.0, -1.0}) {
      for (double b : {1.0, -1.0}) {
        if (k2 == 0) {
          out.emplace_back(endpoint_of({{{a, 1.0}, k1 * h}, {{b, 1.0}, k3 * h}}), SectionFamily::Type1);
          continue;
        }
        for (double c : values) {
          out.emplace_back(endpoint_of({{{a, 1.0}, k1 * h}, {{c, 1.0}, k2 * h}, {{b, 1.0}, k3 * h}}),
                           SectionFamily::Type1);
        }
      }
    }
  }
}

// Type 2 endpoints with Tb index i fixed.
void type2_slice(double T, int n, int i, Batch& out) {
  const double h = T / n;
  const double Tb = i * h;
  for (int k = i + 1; i + k < n; ++k) {
    const double T2 = k * h;
    for (int j = 1; i + j + k < n; ++j) {
      const double T1 = j * h;
      const double Te = T - Tb - T1 - T2;
      if (!(Te > 0.0) || Te > cut_bound(Tb, T1, T2) + 1e-12 * T) continue;
      for (double s : {1.0, -1.0}) {
        out.emplace_back(endpoint_of({{{s, 1.0}, Tb}, {{-s, 1.0}, T1}, {{s, 1.0}, T2}, {{-s, 1.0}, Te}}),
                         SectionFamily::Type2);
      }
    }
  }
}

}  // namespace

void brute_force_section(double T, int n_grid, const SectionSink& sink, int jobs) {
  if (!(T > 0.0)) throw std::invalid_argument("brute_force_section: T must be positive");
  if (n_grid < 2) throw std::invalid_argument("brute_force_section: n_grid must be at least 2");
  const int n_values = (n_grid + 9) / 10 + 1;
  std::vector<double> values(static_cast<std::size_t>(n_values));
  for (int k = 0; k < n_values; ++k) values[k] = -1.0 + 2.0 * k / (n_values - 1);

  // slice s < n_grid + 1 is type 1 with k1 = s, the rest type 2 with Tb index
  const int n_slices = (n_grid + 1) + n_grid;
  auto run_slice = [&](int s, Batch& out) {
    if (s <= n_grid) {
      type1_slice(T, n_grid, s, values, out);
    } else {
      type2_slice(T, n_grid, s - n_grid, out);
    }
  };

  const int workers = std::max(1, jobs);
  std::vector<Batch> batches(static_cast<std::size_t>(workers));
  for (int base = 0; base < n_slices; base += workers) {
    const int count = std::min(workers, n_slices - base);
    if (count == 1 || workers == 1) {
      for (int k = 0; k < count; ++k) {
        batches[k].clear();
        run_slice(base + k, batches[k]);
      }
    } else {
      std::vector<std::thread> pool;
      for (int k = 0; k < count; ++k) {
        batches[k].clear();
        pool.emplace_back([&, k] { run_slice(base + k, batches[k]); });
      }
      for (auto& t : pool) t.join();
    }
    for (int k = 0; k < count; ++k) {
      for (const auto& [p, f] : batches[k]) sink(p, f);
    }
  }
}

}  // namespace cartan
