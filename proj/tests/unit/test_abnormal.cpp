#include "cartan/abnormal.hpp"
#include "cartan/extremal.hpp"
#include "support/oracle.hpp"

#include <doctest.h>

#include <vector>

using namespace cartan;

namespace {

std::vector<Control> boundary_controls() {
  return {{1, 1}, {1, -1}, {-1, 0.3}, {0.2, 1}, {-0.7, -1}, {1, 0}, {-1, -1}};
}

}  // namespace

TEST_CASE("abnormal endpoints") {
  CHECK((abnormal_point({1, 1}, 1.0).coords() - Vec5(1, 1, 0, 1.0 / 3, -1.0 / 3)).norm() <= 1e-15);
  CHECK((abnormal_point({1, 0}, 2.0).coords() - Vec5(2, 0, 0, 0, -8.0 / 6)).norm() <= 1e-15);
  CHECK(abnormal_point({-1, 0.5}, 0.0) == Point::origin());
}

TEST_CASE("abnormal manifold residual") {
  CHECK(abnormal_residual(Point::origin()) == Eigen::Vector3d::Zero());
  CHECK(abnormal_residual(Point(1, 1, 0, 1.0 / 3, -1.0 / 3)).norm() <= 1e-15);
  CHECK((abnormal_residual(Point(1, 1, 1, 0, 0)) - Eigen::Vector3d(1, -1.0 / 3, 1.0 / 3)).norm() <= 1e-15);
}

TEST_CASE("abnormal points lie on the manifold") {
  for (const Control& u : boundary_controls()) {
    for (int k = 0; k <= 50; ++k) {
      CHECK(abnormal_residual(abnormal_point(u, 0.1 * k)).norm() <= 1e-12);
    }
  }
}

TEST_CASE("abnormal points agree with direct integration") {
  for (const Control& u : boundary_controls()) {
    const oracle::State e = oracle::constant(oracle::State{}, u.u1, u.u2, 1.7, 100);
    const Vec5 q = abnormal_point(u, 1.7).coords();
    for (int i = 0; i < 5; ++i) CHECK(std::abs(q(i) - e[5 + i]) <= 1e-9);

    const Trajectory tr = integrate({Covector(), Point::origin()}, PiecewiseControl({{u, 1.7}}), 1.7, 1e-3);
    CHECK((tr.final_state().q.coords() - q).norm() <= 1e-9);
  }
}

TEST_CASE("one-parameter subgroup: x, y additive, z zero") {
  for (const Control& u : boundary_controls()) {
    const double s = 0.4;
    const double t = 1.1;
    const Point a = abnormal_point(u, s);
    const Point b = abnormal_point(u, t);
    const Point c = abnormal_point(u, s + t);
    CHECK(c.x() == doctest::Approx(a.x() + b.x()));
    CHECK(c.y() == doctest::Approx(a.y() + b.y()));
    CHECK(c.z() == 0.0);
  }
}
