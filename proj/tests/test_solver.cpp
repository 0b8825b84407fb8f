#include <doctest.h>

#include <random>
#include <sstream>

#include "bearloc/localizability.hpp"
#include "bearloc/solver.hpp"
#include "fixtures.hpp"

using namespace bearloc;

TEST_CASE("direct solve recovers withheld follower positions") {
  for (const auto& net : fixtures::localizable_fixtures()) {
    auto lap = bearing_laplacian(net);
    auto sol = solve_direct(lap, net.anchor_positions());
    Eigen::VectorXd truth = net.follower_positions();
    CHECK((sol.p_f - truth).norm() <= 1e-8 * std::max(1.0, truth.norm()));
    CHECK(sol.residual <=
          1e-8 * std::max(1.0, (lap.Bfa() * net.anchor_positions()).norm()));
  }
}

TEST_CASE("direct solve is translation invariant") {
  Network net = fixtures::braced_square();
  Eigen::VectorXd t(2);
  t << 13.0, -7.5;
  NetworkSpec moved = net.to_spec();
  for (auto& node : moved.nodes) node.position += t;
  Network shifted = Network::from_spec(moved);

  auto sol0 = solve_direct(bearing_laplacian(net), net.anchor_positions());
  auto sol1 =
      solve_direct(bearing_laplacian(shifted), shifted.anchor_positions());
  for (int i = 0; i < net.follower_count(); ++i) {
    CHECK((sol1.p_f.segment(2 * i, 2) - sol0.p_f.segment(2 * i, 2) - t)
              .norm() < 1e-8);
  }
}

TEST_CASE("direct solve rejects singular systems") {
  auto lap = bearing_laplacian(fixtures::square_cycle());
  CHECK_THROWS_AS(solve_direct(lap, fixtures::square_cycle().anchor_positions()),
                  SingularSystem);
}

TEST_CASE("flow converges to the direct solution on localizable fixtures") {
  Network net = fixtures::triangle();
  auto lap = bearing_laplacian(net);
  Eigen::VectorXd truth = net.follower_positions();
  FlowConfig cfg;
  cfg.convergence_tol = 1e-12;

  Eigen::VectorXd init = default_initial_estimate(net, 101);
  auto traj = simulate_flow(lap, net.anchor_positions(), init, cfg, &truth);
  CHECK(traj.converged);
  CHECK((traj.records.back().estimate_f - truth).norm() < 1e-8);

  // Error to truth never increases with the auto step.
  double prev = std::numeric_limits<double>::infinity();
  for (const auto& rec : traj.records) {
    REQUIRE(rec.error_norm.has_value());
    CHECK(*rec.error_norm <= prev + 1e-15);
    prev = *rec.error_norm;
  }
}

TEST_CASE("truth is a fixed point of the flow") {
  for (const auto& net : fixtures::localizable_fixtures()) {
    auto lap = bearing_laplacian(net);
    FlowConfig cfg;
    auto traj = simulate_flow(lap, net.anchor_positions(),
                              net.follower_positions(), cfg);
    CHECK(traj.converged);
    CHECK(traj.steps_taken == 0);
  }
}

TEST_CASE("non-localizable flow limit depends on the initialization") {
  Network net = fixtures::square_cycle();
  auto lap = bearing_laplacian(net);
  FlowConfig cfg;
  cfg.convergence_tol = 1e-11;
  cfg.max_steps = 2000000;
  auto a = simulate_flow(lap, net.anchor_positions(),
                         default_initial_estimate(net, 1), cfg);
  auto b = simulate_flow(lap, net.anchor_positions(),
                         default_initial_estimate(net, 2), cfg);
  REQUIRE(a.converged);
  REQUIRE(b.converged);
  CHECK((a.records.back().estimate_f - b.records.back().estimate_f).norm() >
        1e-3);
}

TEST_CASE("explicit step size is checked against the spectrum") {
  Network net = fixtures::triangle();
  auto lap = bearing_laplacian(net);
  FlowConfig cfg;
  cfg.step_size = 100.0;
  CHECK_THROWS_AS(simulate_flow(lap, net.anchor_positions(),
                                default_initial_estimate(net, 0), cfg),
                  StepTooLarge);
}

TEST_CASE("matrix and edge-wise velocities agree") {
  std::mt19937_64 rng(61);
  std::normal_distribution<double> gauss(0.0, 3.0);
  for (int trial = 0; trial < 20; ++trial) {
    const int d = 2 + trial % 3;
    auto net = fixtures::random_network(d, 7, 2, rng);
    auto lap = bearing_laplacian(net);
    Eigen::VectorXd est(d * net.follower_count());
    for (Eigen::Index k = 0; k < est.size(); ++k) est[k] = gauss(rng);
    Eigen::VectorXd matrix_form =
        -(lap.Bff() * est + lap.Bfa() * net.anchor_positions());
    Eigen::VectorXd edge_form = flow_velocity_edgewise(net, est);
    CHECK((matrix_form - edge_form).norm() <=
          1e-12 * std::max(1.0, matrix_form.norm()));
  }
}

TEST_CASE("anchor error propagation") {
  Network net = fixtures::cube_diagonal_anchors();
  auto lap = bearing_laplacian(net);
  const int d = net.dimension();

  SUBCASE("translation errors translate the followers") {
    Eigen::VectorXd t(d);
    t << 0.4, -1.1, 2.0;
    Eigen::VectorXd dpa(d * net.anchor_count());
    for (int i = 0; i < net.anchor_count(); ++i) dpa.segment(d * i, d) = t;
    Eigen::VectorXd dpf = anchor_error_propagation(lap, dpa);
    for (int i = 0; i < net.follower_count(); ++i) {
      CHECK((dpf.segment(d * i, d) - t).norm() < 1e-10 * t.norm());
    }
  }
  SUBCASE("scaling errors scale the followers") {
    const double s = 0.37;
    Eigen::VectorXd dpf =
        anchor_error_propagation(lap, s * net.anchor_positions());
    CHECK((dpf - s * net.follower_positions()).norm() <
          1e-10 * net.follower_positions().norm());
  }
  SUBCASE("zero error maps to zero") {
    Eigen::VectorXd dpf = anchor_error_propagation(
        lap, Eigen::VectorXd::Zero(d * net.anchor_count()));
    CHECK(dpf.norm() < 1e-12);
  }
}

TEST_CASE("trajectory CSV has the documented columns") {
  Network net = fixtures::triangle();
  auto lap = bearing_laplacian(net);
  FlowConfig cfg;
  cfg.record_every = 10;
  Eigen::VectorXd truth = net.follower_positions();
  auto traj = simulate_flow(lap, net.anchor_positions(),
                            default_initial_estimate(net, 5), cfg, &truth);
  std::ostringstream os;
  write_trajectory_csv(os, traj, net);
  std::istringstream is(os.str());
  std::string header;
  std::getline(is, header);
  CHECK(header == "step,t,3_0,3_1,velocity_inf_norm,error_norm");
  std::string first;
  std::getline(is, first);
  CHECK(first.rfind("0,0,", 0) == 0);
}
