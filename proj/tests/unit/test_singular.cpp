#include "cartan/attainable.hpp"
#include "cartan/singular.hpp"
#include "support/oracle.hpp"

#include <doctest.h>

#include <random>

using namespace cartan;

namespace {

// Endpoint from the origin by the oracle integrator.
Vec5 integrate_oracle(const PiecewiseControl& c) {
  oracle::State s{};
  for (const auto& seg : c.segments()) s = oracle::constant(s, seg.u.u1, seg.u.u2, seg.duration, 64);
  return {s[5], s[6], s[7], s[8], s[9]};
}

double max_abs(const Vec5& v) { return v.cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("singular control values") {
  const SingularArcSpec a = singular_control(SingularAxis::H1, Covector(0, 1, 0, 0, 0));
  CHECK(a.kind == SingularCase::A);
  CHECK(a.s == 1);

  const SingularArcSpec b = singular_control(SingularAxis::H1, Covector(0, 1, 0, 2, 1));
  CHECK(b.kind == SingularCase::B);
  CHECK(b.s == 1);
  CHECK(b.u_singular == doctest::Approx(-0.5));

  CHECK_THROWS_AS(singular_control(SingularAxis::H1, Covector(0, 1, 0, 1, 2)), std::domain_error);
  CHECK_THROWS_AS(singular_control(SingularAxis::H1, Covector(0.5, 0.5, 0, 1, 1)), std::domain_error);

  const SingularArcSpec c = singular_control(SingularAxis::H2, Covector(-1, 0, 0, 1, 2));
  CHECK(c.kind == SingularCase::B);
  CHECK(c.s == -1);
  CHECK(c.u_singular == doctest::Approx(0.5));
}

TEST_CASE("normalized adjoint") {
  const NormalizedAdjoint n = normalize_adjoint(Covector(2, 0, 4, -2, -6));
  CHECK(n.hf1 == -1.0);
  CHECK(n.hf3 == -2.0);
  CHECK(n.hf4 == -1.0);
  CHECK(n.hf5 == 3.0);
  CHECK_THROWS_AS(normalize_adjoint(Covector(1, 0, 1, 0, 1)), std::domain_error);
}

TEST_CASE("reduced vector field and first integral") {
  CHECK(reduced_rhs({1, 0, -1, 1}) == Eigen::Vector2d(0, 0));
  CHECK(reduced_rhs({-2, 1, 1, 0}) == Eigen::Vector2d(-1, -1));
  CHECK(reduced_rhs({0.3, 0, 1, 1.5}) == Eigen::Vector2d(0, 2.5));
  CHECK_THROWS_AS(reduced_rhs({0, 1, 1, 0}), std::domain_error);

  CHECK(reduced_first_integral({0, 0, 1, 0.7}) == 0.0);
  CHECK(reduced_first_integral({0, 0, -1, 3}) == 0.0);
  CHECK(reduced_first_integral({1, 1, -1, 0.5}) == 0.0);
  CHECK(reduced_first_integral({-1, 0, 1, 1}) == 0.0);
}

TEST_CASE("region labels") {
  CHECK(to_string(classify_adjoint_region({0, 0, -1, 1.5})) == "C1inf-");
  CHECK(to_string(classify_adjoint_region({0, 0, 1, 1})) == "C1+");
  CHECK(to_string(classify_adjoint_region({0, 0, 1, 0})) == "C0+");
  CHECK(to_string(classify_adjoint_region({0, 0, -1, 0.5})) == "C01-");
  CHECK_THROWS_AS(classify_adjoint_region({0, 0, 1, -0.5}), std::invalid_argument);
  CHECK_THROWS_AS(classify_adjoint_region({0, 0, 2, 0.5}), std::invalid_argument);
}

TEST_CASE("reduced integration") {
  SUBCASE("crossing time against the closed form") {
    // hf3 = 1 + t, hf1 = 1 - t - t^2 / 2 on the right half-plane.
    const ReducedTrajectory tr = integrate_reduced({1, 1, 1, 0}, 2.0);
    REQUIRE_FALSE(tr.crossing_times.empty());
    CHECK(tr.crossing_times[0] == doctest::Approx(std::sqrt(3.0) - 1).epsilon(1e-12));
  }
  SUBCASE("first integral across crossings") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> d(-2, 2);
    int crossings = 0;
    for (double hf5 : {0.0, 0.5, 1.0, 1.5}) {
      for (double hf4 : {-1.0, 1.0}) {
        for (int n = 0; n < 5; ++n) {
          const NormalizedAdjoint n0{d(rng), d(rng), hf4, hf5};
          const double I0 = reduced_first_integral(n0);
          const ReducedTrajectory tr = integrate_reduced(n0, 10.0, 1e-4, 50);
          crossings += static_cast<int>(tr.crossing_times.size());
          for (const auto& s : tr.samples) {
            CHECK(std::abs(reduced_first_integral({s.hf1, s.hf3, hf4, hf5}) - I0) <= 1e-9);
          }
        }
      }
    }
    CHECK(crossings > 20);
  }
  SUBCASE("arrival at the origin rests on a singular arc") {
    // hf3 = 1 - t / 2, hf1 = 1 - t + t^2 / 4 reach (0, 0) together at t = 2.
    const ReducedTrajectory tr = integrate_reduced({1, 1, -1, 0.5}, 3.0, 1e-3);
    CHECK(tr.singular_arc);
    CHECK(tr.samples.back().hf1 == 0.0);
  }
  CHECK_THROWS_AS(integrate_reduced({1, 1, 0.5, 0}, 1.0), std::invalid_argument);
}

TEST_CASE("boundary control families") {
  const PiecewiseControl t1 = boundary_control_type1({1, 0.5, -1}, {0.2, 0.5, 0.3});
  CHECK(t1.total_duration() == doctest::Approx(1.0));
  CHECK(t1.size() == 3);
  for (const auto& s : t1.segments()) CHECK(s.u.u2 == 1.0);
  CHECK(boundary_control_type1({1, 0.5, -1}, {0.5, 0, 0.5}).size() == 2);
  CHECK_THROWS_AS(boundary_control_type1({0.5, 0.5, -1}, {0.2, 0.5, 0.3}), std::invalid_argument);
  CHECK_THROWS_AS(boundary_control_type1({1, 0.5, -1}, {0, 0, 0}), std::invalid_argument);

  const PiecewiseControl t2 = alternating_control(1, {1, 3, 2, 1});
  CHECK(t2.size() == 4);
  CHECK(t2.segments()[1].u.u1 == -1.0);
  CHECK_THROWS_AS(alternating_control(1, {3, 3, 2, 1}), std::invalid_argument);
  CHECK_THROWS_AS(alternating_control(1, {1, 3, 2}), std::invalid_argument);
}

TEST_CASE("cut bound and candidates") {
  CHECK(cut_bound(1, 3, 2) == doctest::Approx(1.0));
  CHECK(cut_bound(2, 5, 2) == 0.0);
  CHECK(cut_bound(1, 6, 3) == doctest::Approx(3.0));
  CHECK(is_geometrically_optimal_candidate(alternating_control(1, {1, 3, 2, 0.5})));
  CHECK_FALSE(is_geometrically_optimal_candidate(alternating_control(1, {1, 3, 2, 1.5})));
  CHECK_FALSE(is_geometrically_optimal_candidate(alternating_control(1, {2, 3, 2, 0.1})));
}

TEST_CASE("threshold trajectories") {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> d(0.1, 1);
  for (int n = 0; n < 20; ++n) {
    const double T2 = d(rng);
    const double Tb = T2 * d(rng) * 0.95;
    const double T1 = d(rng);
    const double Te = cut_bound(Tb, T1, T2);
    const Vec5 q = integrate_oracle(alternating_control(1, {Tb, T1, T2, Te}));
    CHECK(std::abs(q(2)) <= 1e-9);
    const Vec5 p = integrate_oracle(PiecewiseControl({{{-1, 1}, Te}, {{1, 1}, T2}, {{-1, 1}, T1}, {{1, 1}, Tb}}));
    CHECK(max_abs(q - p) <= 1e-9);
  }
}

TEST_CASE("family endpoints are attainable") {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> d(0, 1);
  for (int n = 0; n < 200; ++n) {
    const double a = d(rng) < 0.5 ? 1 : -1;
    const double b = d(rng) < 0.5 ? 1 : -1;
    const PiecewiseControl t1 = boundary_control_type1({a, 2 * d(rng) - 1, b}, {d(rng), d(rng), d(rng)});
    CHECK(contains(Point(integrate_oracle(t1)), t1.total_duration(), 1e-8));

    const double T2 = 0.1 + d(rng);
    const double Tb = T2 * d(rng);
    const double T1 = 0.1 + d(rng);
    const PiecewiseControl t2 = alternating_control(a, {Tb, T1, T2, cut_bound(Tb, T1, T2) * d(rng)});
    CHECK(contains(Point(integrate_oracle(t2)), t2.total_duration(), 1e-8));
  }
}

TEST_CASE("reaching singular endpoints") {
  SUBCASE("the corner has a unique constant preimage") {
    const PiecewiseControl c = reach_singular(Point(1, 1, 0, 1.0 / 3, -1.0 / 3), 1.0);
    CHECK(c.switch_count() == 0);
    CHECK(c.at(0.5) == Control{1, 1});
  }
  SUBCASE("z = z_max recovers the one-switch control") {
    const PiecewiseControl src({{{1, 1}, 0.5}, {{-1, 1}, 0.5}});
    const Vec5 q1 = integrate_oracle(src);
    CHECK(q1(2) == doctest::Approx(0.25));
    const PiecewiseControl c = reach_singular(Point(q1), 1.0);
    REQUIRE(c.switch_count() == 1);
    CHECK(c.segments()[0].duration == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(c.segments()[0].u == Control{1, 1});
  }
  SUBCASE("interior points use a zero prefix") {
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> d(-1, 1);
    std::uniform_real_distribution<double> p(0.05, 1);
    for (int n = 0; n < 8; ++n) {
      std::vector<ControlSegment> segs;
      for (int k = 0; k < 6; ++k) segs.push_back({{d(rng), 1}, p(rng) / 3});
      const PiecewiseControl src(segs);
      const double T = src.total_duration();
      const Point q1(integrate_oracle(src));
      REQUIRE(membership(q1, T).margin > 0);
      const PiecewiseControl c = reach_singular(q1, T);
      CHECK(c.total_duration() == doctest::Approx(T));
      CHECK(c.switch_count() <= 4);
      CHECK(c.segments().front().u.u1 == 0.0);
      for (const auto& s : c.segments()) CHECK(s.u.u2 == 1.0);
      CHECK(max_abs(integrate_oracle(c) - q1.coords()) <= 1e-9);
    }
  }
  SUBCASE("symmetric images of a target") {
    const PiecewiseControl src({{{0, 1}, 0.3}, {{1, 1}, 0.2}, {{0.2, 1}, 0.3}, {{-1, 1}, 0.2}});
    const Point q(integrate_oracle(src));
    for (int k = 1; k <= 3; ++k) {
      const Point qk = state_symmetry(k, q);
      const PiecewiseControl c = reach_singular(qk, 1.0);
      CHECK(max_abs(integrate_oracle(c) - qk.coords()) <= 1e-9);
    }
  }
  SUBCASE("targets outside the set are rejected") {
    CHECK_THROWS_AS(reach_singular(Point(0, 1, 0.3, 0, 0), 1.0), std::invalid_argument);
    CHECK_THROWS_AS(reach_singular(Point(1, 1, 0, -1.0 / 3, 1.0 / 3), 1.0), std::invalid_argument);
  }
}
