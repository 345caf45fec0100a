#include "cartan/bangbang.hpp"
#include "support/oracle.hpp"

#include <doctest.h>

#include <numbers>
#include <random>

using namespace cartan;
using std::numbers::pi;

namespace {

oracle::State to_oracle(const Covector& h, const Point& q) {
  oracle::State r;
  for (int i = 0; i < 5; ++i) {
    r[i] = h.components()(i);
    r[5 + i] = q.coords()(i);
  }
  return r;
}

double distance(const ExtremalState& s, const oracle::State& o) {
  const oracle::State a = to_oracle(s.h, s.q);
  double m = 0;
  for (int i = 0; i < 10; ++i) m = std::max(m, std::abs(a[i] - o[i]));
  return m;
}

Covector on_level(double theta, double h4, double h5, double E, double sign = 1.0) {
  return from_angular({theta, sign * std::sqrt(2.0 * (E - potential_U(theta, h4, h5))), h4, h5});
}

// The C_7 seed of (h4, h5) = (2, 1): E = h4 heading for the saddle (3 pi / 2, 0).
Covector c7_seed() { return on_level(1.5 * pi - 0.5, 2.0, 1.0, 2.0); }

Eigen::Matrix<double, 5, 5> M(Symmetry e) { return symmetry_matrix(e); }

}  // namespace

TEST_CASE("segment flow matches the oracle integrator") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> d(-1.5, 1.5);
  const Control vertices[] = {{1, 1}, {1, -1}, {-1, 1}, {-1, -1}};
  for (int n = 0; n < 40; ++n) {
    const Covector h(d(rng), d(rng), d(rng), d(rng), d(rng));
    const Point q(d(rng), d(rng), d(rng), d(rng), d(rng));
    const Control u = vertices[n % 4];
    const double tau = 0.1 + std::abs(d(rng));
    const ExtremalState s = segment_flow({h, q}, u, tau);
    CHECK(distance(s, oracle::constant(to_oracle(h, q), u.u1, u.u2, tau, 50)) <= 1e-12);
    CHECK(std::abs(energy(s.h) - energy(h)) <= 1e-12 * (1 + std::abs(energy(h))));
  }
}

TEST_CASE("propagate matches the oracle integrator") {
  const PiecewiseControl c({{{1, 1}, 0.3}, {{-1, 1}, 0.5}, {{0.2, -1}, 0.4}});
  oracle::State s{};
  for (const auto& seg : c.segments()) s = oracle::constant(s, seg.u.u1, seg.u.u2, seg.duration, 40);
  const Point q = propagate(Point::origin(), c);
  for (int i = 0; i < 5; ++i) CHECK(std::abs(q.coords()(i) - s[5 + i]) <= 1e-13);
}

TEST_CASE("angular chart") {
  CHECK(theta_from_h(1, 0) == 0.0);
  CHECK(theta_from_h(0.5, 0.5) == doctest::Approx(pi / 4));
  CHECK(theta_from_h(-0.5, 0.5) == doctest::Approx(3 * pi / 4));
  CHECK_THROWS(theta_from_h(1, 1));

  CHECK(potential_U(0, 2, 1) == 1.0);
  CHECK(potential_U(pi / 2, 2, 1) == doctest::Approx(-2.0));
  CHECK(potential_U(pi / 4, 2, 1) == doctest::Approx(-0.5));

  const Eigen::Vector2d a = angular_rhs({pi / 4, 1, 2, 3});
  CHECK(a(0) == doctest::Approx(1.0));
  CHECK(a(1) == doctest::Approx(5.0));
  const Eigen::Vector2d b = angular_rhs({3 * pi / 4, 0, 1, 0});
  CHECK(b(0) == 0.0);
  CHECK(b(1) == doctest::Approx(-1.0));
  CHECK(angular_rhs({pi / 4, 0, 0, 0}).norm() == 0.0);
  CHECK_THROWS_AS(angular_rhs({pi, 1, 1, 1}), std::domain_error);

  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> d(0, 2 * pi);
  for (int n = 0; n < 200; ++n) {
    const double th = d(rng);
    const Eigen::Vector2d h = h_from_theta(th);
    CHECK(std::abs(std::abs(h(0)) + std::abs(h(1)) - 1.0) <= 1e-15);
    CHECK(std::abs(std::remainder(theta_from_h(h(0), h(1)) - th, 2 * pi)) <= 1e-7);
  }
}

TEST_CASE("symmetry elements") {
  const Covector h(1, 2, 3, 4, 5);
  CHECK(apply_symmetry(Symmetry::E1, h) == Covector(2, 1, -3, -5, -4));
  CHECK(apply_symmetry(Symmetry::E7, h) == Covector(-1, -2, 3, -4, -5));
  CHECK(apply_symmetry(Symmetry::Id, h) == h);

  CHECK(compose(Symmetry::E1, Symmetry::E2) == Symmetry::E7);
  CHECK(compose(Symmetry::E5, Symmetry::E6) == Symmetry::Id);
  CHECK(compose(Symmetry::E3, Symmetry::E3) == Symmetry::Id);
  CHECK(product_table()[0][1] == Symmetry::E7);
  CHECK(product_table()[4][5] == Symmetry::Id);

  for (Symmetry a : kSymmetries) {
    CHECK(compose(a, inverse(a)) == Symmetry::Id);
    CHECK(compose(Symmetry::Id, a) == a);
    for (Symmetry b : kSymmetries) CHECK(M(compose(a, b)) == M(a) * M(b));
  }
  // Entry (i, j) is eps^i applied first, then eps^j.
  for (int i = 1; i <= 7; ++i) {
    for (int j = 1; j <= 7; ++j) {
      const Symmetry ei = kSymmetries[i];
      const Symmetry ej = kSymmetries[j];
      CHECK(M(product_table()[i - 1][j - 1]) == M(ej) * M(ei));
    }
  }
}

TEST_CASE("energy is invariant under the group") {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> d(-3, 3);
  for (int n = 0; n < 100; ++n) {
    const Covector h(d(rng), d(rng), d(rng), d(rng), d(rng));
    for (Symmetry e : kSymmetries) {
      CHECK(std::abs(energy(apply_symmetry(e, h)) - energy(h)) <= 1e-14 * (1 + h.components().squaredNorm()));
    }
  }
}

TEST_CASE("fundamental domain") {
  const Covector a(0.5, 0.5, 0.1, 3, 1);
  const auto [ha, ea] = to_fundamental_domain(a);
  CHECK(ea == Symmetry::Id);
  CHECK(ha == a);
  for (const Covector& h : {Covector(0.5, 0.5, 0.1, -3, -1), Covector(0.5, 0.5, 0.1, 1, 3)}) {
    const auto [g, e] = to_fundamental_domain(h);
    CHECK(g.h4() == 3.0);
    CHECK(g.h5() == 1.0);
    CHECK(g == apply_symmetry(e, h));
  }
}

TEST_CASE("strata") {
  CHECK(classify_stratum(Covector(0, 1, 0, 2, 1)) == StratumLabel{1, 1});
  CHECK(classify_stratum(on_level(pi / 2 + 0.3, 2, 1, 0)) == StratumLabel{1, 4});
  CHECK(classify_stratum(Covector(0.5, 0.5, 1, 0, 0)) == StratumLabel{4, 2});
  CHECK_THROWS(classify_stratum(Covector(1, 1, 0, 0, 0)));

  const double energies[] = {-2, -1.5, -1, 0, 1, 1.5, 2, 3};
  for (int k = 0; k < 8; ++k) CHECK(stratum_of_level(2, 1, energies[k]) == StratumLabel{1, k + 1});
  CHECK_THROWS_AS(stratum_of_level(2, 1, -2.5), std::domain_error);
  CHECK(domain_case(2, 1) == 1);
  CHECK(domain_case(2, 0) == 2);
  CHECK(domain_case(1, 1) == 3);
  CHECK(domain_case(0, 0) == 4);
  CHECK(critical_energies(1, 2, 1) == std::vector<double>{-2, -1, 1, 2});
}

TEST_CASE("exponential map: closed-form cases") {
  SUBCASE("constant corner control") {
    const ExpResult r = exp_bangbang(Covector(0.5, 0.5, 0, 0, 0), Point::origin(), 1.0);
    REQUIRE(r.branches.size() == 1);
    CHECK(switching_times(r, 0).empty());
    CHECK((r.branches[0].endpoint.q.coords() - Vec5(1, 1, 0, 1.0 / 3, -1.0 / 3)).norm() <= 1e-15);
  }
  SUBCASE("single switch at 1/2") {
    const ExpResult r = exp_bangbang(Covector(0.5, 0.5, -1, 0, 0), Point::origin(), 1.0);
    REQUIRE(r.branches.size() == 1);
    const auto ts = switching_times(r, 0);
    REQUIRE(ts.size() == 1);
    CHECK(ts[0] == doctest::Approx(0.5).epsilon(1e-14));
    CHECK_THROWS_AS(switching_times(r, 1), std::out_of_range);
  }
  SUBCASE("errors") {
    CHECK_THROWS(exp_bangbang(Covector(1, 1, 0, 0, 0), Point::origin(), 1.0));
    CHECK_THROWS_AS(exp_bangbang(Covector(1, 0, 0, 0, 0), Point::origin(), 1.0), std::domain_error);
  }
}

TEST_CASE("exponential map: saddle splitting") {
  const Covector h0 = c7_seed();
  REQUIRE(classify_stratum(h0) == StratumLabel{1, 7});
  const ExpResult r = exp_bangbang(h0, Point::origin(), 1.0);
  REQUIRE(r.branches.size() == 2);
  for (const auto& b : r.branches) {
    REQUIRE(b.corner_times.size() == 1);
    CHECK_FALSE(b.inferred_continuation);
    for (const auto& seg : b.segments) {
      CHECK(std::abs(energy(evaluate_segment(seg.coeffs, 0).h) - 2.0) <= 1e-12);
      CHECK(std::abs(energy(evaluate_segment(seg.coeffs, seg.t1 - seg.t0).h) - 2.0) <= 1e-12);
    }
  }
  const AngularState a = to_angular(r.branches[0].endpoint.h);
  const AngularState b = to_angular(r.branches[1].endpoint.h);
  CHECK(std::abs(a.theta - b.theta) + std::abs(a.h3 - b.h3) > 1e-3);

  ExpOptions capped;
  capped.branch_cap = 1;
  CHECK_THROWS_AS(exp_bangbang(h0, Point::origin(), 1.0, capped), std::length_error);
}

TEST_CASE("exponential map agrees with the oracle in every case") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> d(0, 1);
  const std::array<std::array<double, 2>, 4> casimirs = {{{2, 1}, {1, 0}, {1, 1}, {0, 0}}};
  std::array<int, 5> seen{};
  for (int n = 0; n < 24; ++n) {
    const auto [h4, h5] = casimirs[n % 4];
    const double th = 2 * pi * d(rng);
    const double E = potential_U(th, h4, h5) + 2 * d(rng) * d(rng);
    Covector h0 = on_level(th, h4, h5, E, d(rng) < 0.5 ? 1.0 : -1.0);
    h0 = apply_symmetry(kSymmetries[n % 8], h0);
    const double T = 1 + 4 * d(rng);
    const ExpResult r = exp_bangbang(h0, Point::origin(), T);
    REQUIRE(r.branches.size() == 1);
    ++seen[classify_stratum(h0).case_index];
    const oracle::State o = oracle::feedback(to_oracle(h0, Point::origin()), T, 1e-3);
    CHECK(distance(r.branches[0].endpoint, o) <= 1e-6);

    const auto ts = switching_times(r, 0);
    for (std::size_t k = 0; k < ts.size(); ++k) {
      CHECK(ts[k] > 0.0);
      CHECK(ts[k] < T);
      if (k > 0) CHECK(ts[k] > ts[k - 1]);
      CHECK(std::abs(energy(r.branches[0].at(ts[k]).h) - energy(h0)) <= 1e-12 * (1 + std::abs(energy(h0))));
    }
  }
  for (int c = 1; c <= 4; ++c) CHECK(seen[c] > 0);
}

TEST_CASE("exponential map is equivariant under the group") {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> d(0, 1);
  for (int n = 0; n < 6; ++n) {
    const double h4 = 0.5 + 2 * d(rng);
    const double h5 = h4 * d(rng);
    const double th = 2 * pi * d(rng);
    const Covector h0 = on_level(th, h4, h5, potential_U(th, h4, h5) + 1.5 * d(rng));
    const ExpResult base = exp_bangbang(h0, Point::origin(), 4.0);
    REQUIRE(base.branches.size() == 1);
    for (Symmetry e : kSymmetries) {
      const ExpResult img = exp_bangbang(apply_symmetry(e, h0), Point::origin(), 4.0);
      REQUIRE(img.branches.size() == 1);
      double worst = 0;
      for (int k = 0; k < 100; ++k) {
        const double t = 4.0 * k / 99;
        const Covector mapped = apply_symmetry(e, base.branches[0].at(t).h);
        worst = std::max(worst, (img.branches[0].at(t).h.components() - mapped.components()).norm());
      }
      CHECK(worst <= 1e-9);
    }
  }
}

TEST_CASE("oscillating stratum: switch period equals the level-curve period") {
  const double h4 = 2;
  const double h5 = 1;
  const double E = 0;
  const Covector h0 = on_level(pi / 2 + 0.3, h4, h5, E);
  REQUIRE(classify_stratum(h0) == StratumLabel{1, 4});
  const ExpResult r = exp_bangbang(h0, Point::origin(), 20.0);
  REQUIRE(r.branches.size() == 1);
  const auto ts = switching_times(r, 0);
  REQUIRE(ts.size() >= 8);

  // dt = |sin 2 theta| d theta / |h3| over both arcs; the oval spans
  // theta in [atan(1/sqrt 2), pi + atan(1/sqrt 2)] where U < 0. The range is
  // split at the kinks of U and each piece mapped by a cosine substitution,
  // which also removes the inverse-square-root endpoint singularities.
  const double a = std::atan(1 / std::sqrt(2.0));
  auto piece = [&](double lo, double hi) {
    auto f = [&](double phi) {
      const double th = lo + (hi - lo) * (1 - std::cos(phi)) / 2;
      const double gap = E - potential_U(th, h4, h5);
      if (gap <= 0) return 0.0;
      return std::abs(std::sin(2 * th)) / std::sqrt(2 * gap) * (hi - lo) * std::sin(phi) / 2;
    };
    return oracle::midpoint(f, 0, pi, 200000);
  };
  const double period = 2 * (piece(a, pi / 2) + piece(pi / 2, pi) + piece(pi, pi + a));
  for (std::size_t k = 0; k + 4 < ts.size(); ++k) CHECK(ts[k + 4] - ts[k] == doctest::Approx(period).epsilon(1e-8));
}

TEST_CASE("level curves") {
  const auto pt = level_curve(2, 1, -2, 50);
  REQUIRE_FALSE(pt.empty());
  for (const auto& p : pt) {
    CHECK(p(0) == doctest::Approx(pi / 2));
    CHECK(p(1) == doctest::Approx(0.0));
  }
  for (const auto& p : level_curve(0, 0, 0.5, 50)) CHECK(std::abs(p(1)) == doctest::Approx(1.0));

  const auto oval = level_curve(2, 1, 0, 400);
  bool top = false;
  bool bottom = false;
  for (const auto& p : oval) {
    CHECK(p(1) * p(1) / 2 + potential_U(p(0), 2, 1) == doctest::Approx(0.0));
    if (std::abs(p(0) - pi / 2) < 1e-12) {
      top = top || std::abs(p(1) - 2) < 1e-12;
      bottom = bottom || std::abs(p(1) + 2) < 1e-12;
    }
  }
  CHECK(top);
  CHECK(bottom);
  CHECK_THROWS_AS(level_curve(2, 1, -3, 10), std::domain_error);
}

TEST_CASE("cut search") {
  const Covector h0 = on_level(pi / 2 + 0.3, 2, 1, 0);
  CHECK_FALSE(cut_search(h0, 1e-3, 4).found);
  CHECK_FALSE(cut_search(Covector(0.5, 0.5, 1, 0, 0), 2.0, 40).found);
}
