#include <doctest.h>

#include <cmath>
#include <random>

#include "bearloc/geometry.hpp"
#include "fixtures.hpp"

using namespace bearloc;
using fixtures::vec2;
using fixtures::vec3;

namespace {

Eigen::VectorXd random_unit(int d, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::VectorXd v(d);
  do {
    for (int k = 0; k < d; ++k) v[k] = gauss(rng);
  } while (v.norm() < 1e-6);
  return v.normalized();
}

}  // namespace

TEST_CASE("bearing examples") {
  CHECK((bearing(vec2(0, 0), vec2(2, 0)) - vec2(1, 0)).norm() == 0.0);
  const double s = std::sqrt(2.0) / 2.0;
  CHECK((bearing(vec2(0, 0), vec2(1, 1)) - vec2(s, s)).norm() <
        1e-15);
  CHECK((bearing(vec3(0, 0, 0), vec3(0, 0, -5)) - vec3(0, 0, -1)).norm() ==
        0.0);
  CHECK_THROWS_AS(bearing(vec2(1, 1), vec2(1, 1)), CollocatedNodes);
}

TEST_CASE("bearing antisymmetry on random pairs") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> coord(-10.0, 10.0);
  for (int trial = 0; trial < 200; ++trial) {
    const int d = 2 + trial % 3;
    Eigen::VectorXd a(d), b(d);
    for (int k = 0; k < d; ++k) {
      a[k] = coord(rng);
      b[k] = coord(rng);
    }
    CHECK((bearing(a, b) + bearing(b, a)).norm() <= 1e-15);
  }
}

TEST_CASE("projector examples") {
  Eigen::MatrixXd P = projector(vec2(1, 0));
  CHECK(P(0, 0) == 0.0);
  CHECK(P(1, 1) == 1.0);
  CHECK(P(0, 1) == 0.0);

  Eigen::MatrixXd Q = projector(vec2(1, 1));
  CHECK(std::abs(Q(0, 0) - 0.5) < 1e-15);
  CHECK(std::abs(Q(0, 1) + 0.5) < 1e-15);

  CHECK_THROWS_AS(projector(vec2(0, 0)), ZeroVector);
}

TEST_CASE("projector properties on random vectors") {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> gauss(0.0, 3.0);
  for (int trial = 0; trial < 200; ++trial) {
    const int d = 2 + trial % 4;
    Eigen::VectorXd x(d);
    for (int k = 0; k < d; ++k) x[k] = gauss(rng);
    if (x.norm() < 1e-3) continue;
    Eigen::MatrixXd P = projector(x);
    CHECK((P - P.transpose()).norm() < 1e-14);
    CHECK((P * P - P).norm() < 1e-10);
    CHECK((P * x).norm() < 1e-10 * x.norm());
    CHECK(std::abs(P.trace() - (d - 1)) < 1e-12);
  }
}

TEST_CASE("angle_between examples") {
  CHECK(angle_between(vec2(1, 0), vec2(1, 0)) == 0.0);
  CHECK(std::abs(angle_between(vec2(1, 0), vec2(0, 1)) - M_PI / 2) < 1e-15);
  CHECK(std::abs(angle_between(vec2(1, 0), vec2(-1, 0)) - M_PI) < 1e-15);
  CHECK_THROWS_AS(angle_between(vec2(2, 0), vec2(1, 0)), NotUnit);
}

TEST_CASE("perturb_bearing hits the requested angle") {
  std::mt19937_64 rng(17);
  SUBCASE("zero angle is the identity") {
    Eigen::VectorXd g = random_unit(3, rng);
    CHECK((perturb_bearing(g, 0.0, std::uint64_t{42}) - g).norm() == 0.0);
  }
  SUBCASE("right angle forces orthogonality") {
    Eigen::VectorXd g = random_unit(4, rng);
    Eigen::VectorXd gt = perturb_bearing(g, M_PI / 2, std::uint64_t{42});
    CHECK(std::abs(g.dot(gt)) < 1e-10);
    CHECK(std::abs(gt.norm() - 1.0) < 1e-12);
  }
  SUBCASE("round trip through angle_between") {
    for (int trial = 0; trial < 100; ++trial) {
      const int d = 2 + trial % 4;
      Eigen::VectorXd g = random_unit(d, rng);
      Eigen::VectorXd gt = perturb_bearing(g, 0.3, rng);
      CHECK(std::abs(angle_between(g, gt) - 0.3) < 1e-10);
      CHECK(std::abs(gt.norm() - 1.0) < 1e-12);
    }
  }
  SUBCASE("deterministic per seed") {
    Eigen::VectorXd g = random_unit(3, rng);
    CHECK((perturb_bearing(g, 0.2, std::uint64_t{9}) -
           perturb_bearing(g, 0.2, std::uint64_t{9}))
              .norm() == 0.0);
  }
}

TEST_CASE("residuals vanish at the true configuration") {
  for (const auto& net : fixtures::localizable_fixtures()) {
    CHECK(nonlinear_residual(net, net.stacked_positions()).max_value() <
          1e-12);
    CHECK(linear_residual(net, net.stacked_positions()).max_value() < 1e-12);
  }
}

namespace {

// Estimate for the square-cycle network with the followers shifted horizontally by t
// toward the anchors; any t in (-3, +inf) keeps all bearings, so it solves
// the nonlinear system.
Eigen::VectorXd square_shifted(const Network& net, double t) {
  Eigen::VectorXd est = net.stacked_positions();
  const int d = net.dimension();
  for (int i = net.anchor_count(); i < net.node_count(); ++i) {
    est[d * i] += t;
  }
  return est;
}

}  // namespace

TEST_CASE("square-cycle estimates") {
  Network net = fixtures::square_cycle();

  SUBCASE("rectangle estimate solves the nonlinear system") {
    Eigen::VectorXd est = square_shifted(net, -1.0);
    CHECK(nonlinear_residual(net, est).max_value() < 1e-12);
    CHECK(linear_residual(net, est).max_value() < 1e-12);
  }
  SUBCASE("mirrored estimate solves only the linear system") {
    Eigen::VectorXd est = square_shifted(net, -6.0);  // x = -3 column
    CHECK(linear_residual(net, est).max_value() < 1e-12);
    auto nl = nonlinear_residual(net, est);
    double worst = 0.0;
    for (const auto& r : nl.edges) worst = std::max(worst, r.value);
    CHECK(worst == doctest::Approx(2.0));  // flipped bearing
  }
}

TEST_CASE("nonlinear solutions always satisfy the linear system") {
  Network net = fixtures::square_cycle();
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> shift(-2.5, 4.0);
  for (int trial = 0; trial < 50; ++trial) {
    Eigen::VectorXd est = square_shifted(net, shift(rng));
    REQUIRE(nonlinear_residual(net, est).max_value() < 1e-10);
    CHECK(linear_residual(net, est).max_value() < 1e-9);
  }
}
