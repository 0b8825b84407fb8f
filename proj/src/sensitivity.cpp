#include "bearloc/sensitivity.hpp"

#include <cmath>
#include <functional>
#include <limits>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/SVD>

#include "bearloc/geometry.hpp"

namespace bearloc {

double projector_distance(const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
  Eigen::MatrixXd diff = projector(x) - projector(y);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(diff);
  return svd.singularValues()(0);
}

namespace {

PerturbationScenario assemble(
    const Network& net, const BearingLaplacian& lap,
    const std::function<double(int, int)>& angle_of, std::mt19937_64& rng) {
  const int d = net.dimension();
  const int n_a = net.anchor_count();
  const int n_f = net.follower_count();

  PerturbationScenario sc;
  sc.Bff_tilde = Eigen::MatrixXd::Zero(d * n_f, d * n_f);
  sc.Bfa_tilde = Eigen::MatrixXd::Zero(d * n_f, d * n_a);

  // Deterministic order: followers ascending, neighbors ascending. Each
  // follower-tailed directed edge gets its own independent draw, so the
  // two directions of a follower-follower edge differ in general.
  for (int i = n_a; i < net.node_count(); ++i) {
    const int fi = i - n_a;
    for (int j : net.neighbors()[i]) {
      Eigen::VectorXd g = bearing(net.position(i), net.position(j),
                                  net.position_tolerance());
      const double theta = angle_of(i, j);
      Eigen::VectorXd g_tilde = perturb_bearing(g, theta, rng);
      sc.bearings.push_back({i, j, g_tilde, theta});
      sc.epsilon += 2.0 * std::sin(theta);

      Eigen::MatrixXd P = projector(g_tilde);
      sc.Bff_tilde.block(d * fi, d * fi, d, d) += P;
      if (j >= n_a) {
        sc.Bff_tilde.block(d * fi, d * (j - n_a), d, d) -= P;
      } else {
        sc.Bfa_tilde.block(d * fi, d * j, d, d) -= P;
      }
    }
  }
  sc.dBff = sc.Bff_tilde - lap.Bff();
  sc.dBfa = sc.Bfa_tilde - lap.Bfa();
  return sc;
}

}  // namespace

PerturbationScenario build_scenario(
    const Network& net, const BearingLaplacian& lap,
    const std::map<std::pair<int, int>, double>& angles, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return assemble(
      net, lap,
      [&angles](int i, int j) {
        auto it = angles.find({i, j});
        return it == angles.end() ? 0.0 : it->second;
      },
      rng);
}

PerturbationScenario build_scenario(const Network& net,
                                    const BearingLaplacian& lap,
                                    double max_angle, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(0.0, max_angle);
  return assemble(
      net, lap, [&uni, &rng](int, int) { return uni(rng); }, rng);
}

StabilityCheck stability_check(const PerturbationScenario& scenario,
                               const BearingLaplacian& lap, double tau_loc) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(
      (lap.Bff() + lap.Bff().transpose()) / 2.0, Eigen::EigenvaluesOnly);
  const double lambda_min = es.eigenvalues().minCoeff();
  const double tau = tau_loc > 0.0
                         ? tau_loc
                         : static_cast<double>(lap.Bff().rows()) *
                               std::numeric_limits<double>::epsilon() *
                               es.eigenvalues().maxCoeff();

  StabilityCheck out;
  out.sufficient_condition_met = scenario.epsilon < lambda_min;
  out.margin = lambda_min - scenario.epsilon;

  Eigen::EigenSolver<Eigen::MatrixXd> ges(scenario.Bff_tilde);
  out.min_real_part = ges.eigenvalues().real().minCoeff();
  out.actually_stable = out.min_real_part > tau;
  return out;
}

std::optional<double> error_bound(const PerturbationScenario& scenario,
                                  const BearingLaplacian& lap,
                                  const Eigen::VectorXd& p_a,
                                  const Eigen::VectorXd& p_f) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(
      (lap.Bff() + lap.Bff().transpose()) / 2.0, Eigen::EigenvaluesOnly);
  const double lambda_min = es.eigenvalues().minCoeff();
  if (scenario.epsilon >= lambda_min) return std::nullopt;
  return scenario.epsilon / (lambda_min - scenario.epsilon) *
         (0.5 * p_a.norm() + p_f.norm());
}

PerturbedSolution perturbed_solve(const PerturbationScenario& scenario,
                                  const Eigen::VectorXd& p_a,
                                  const Eigen::VectorXd& truth_f) {
  Eigen::FullPivLU<Eigen::MatrixXd> lu(scenario.Bff_tilde);
  if (!lu.isInvertible()) {
    throw SingularPerturbedSystem("perturbed block B~_ff is singular");
  }
  PerturbedSolution sol;
  sol.p_f = lu.solve(-(scenario.Bfa_tilde * p_a));
  sol.realized_error = (sol.p_f - truth_f).norm();
  return sol;
}

}  // namespace bearloc
