#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "bearloc/network.hpp"
#include "bearloc/rigidity.hpp"

namespace bearloc {

/// Spectral norm of P_x - P_y. Equals sin of the angle between x and y
/// (verified as an identity by the tests). Throws ZeroVector.
double projector_distance(const Eigen::VectorXd& x, const Eigen::VectorXd& y);

/// One measured bearing for a follower-tailed directed edge (i, j),
/// i follower, j any neighbor. The reverse measurement of a
/// follower-follower edge is drawn independently.
struct MeasuredBearing {
  int tail = 0;
  int head = 0;
  Eigen::VectorXd g_tilde;
  double theta = 0.0;
};

struct PerturbationScenario {
  std::vector<MeasuredBearing> bearings;
  double epsilon = 0.0;  // 2 sum_{i in V_f} sum_{j in N_i} sin(theta_ij)
  Eigen::MatrixXd Bff_tilde;  // possibly nonsymmetric
  Eigen::MatrixXd Bfa_tilde;
  Eigen::MatrixXd dBff;  // Bff_tilde - B_ff
  Eigen::MatrixXd dBfa;
};

/// Perturbed follower blocks from per-directed-edge angles. Keys are
/// internal (tail, head) pairs with a follower tail; missing edges get a
/// zero angle. The rotation direction for each measured bearing is drawn
/// from the seeded engine in a fixed edge order.
PerturbationScenario build_scenario(
    const Network& net, const BearingLaplacian& lap,
    const std::map<std::pair<int, int>, double>& angles, std::uint64_t seed);

/// Angles drawn uniformly from [0, max_angle] per follower-tailed directed
/// edge, then as above.
PerturbationScenario build_scenario(const Network& net,
                                    const BearingLaplacian& lap,
                                    double max_angle, std::uint64_t seed);

struct StabilityCheck {
  bool sufficient_condition_met = false;  // epsilon < lambda_min(B_ff)
  bool actually_stable = false;  // all eigenvalues of Bff_tilde right of tau
  double margin = 0.0;           // lambda_min(B_ff) - epsilon
  double min_real_part = 0.0;
};

/// The epsilon < lambda_min condition is sufficient only; actual stability
/// is decided by the eigenvalues of the perturbed block.
StabilityCheck stability_check(const PerturbationScenario& scenario,
                               const BearingLaplacian& lap,
                               double tau_loc = -1.0);

/// Closed-form bound epsilon/(lambda_min - epsilon) (|p_a|/2 + |p_f|) on the
/// localization error; nullopt when epsilon >= lambda_min.
std::optional<double> error_bound(const PerturbationScenario& scenario,
                                  const BearingLaplacian& lap,
                                  const Eigen::VectorXd& p_a,
                                  const Eigen::VectorXd& p_f);

struct PerturbedSolution {
  Eigen::VectorXd p_f;
  double realized_error = 0.0;  // |p_f - truth|
};

/// Fixed point -Bff_tilde^{-1} Bfa_tilde p_a of the perturbed flow via a
/// general LU solve. Throws SingularPerturbedSystem.
PerturbedSolution perturbed_solve(const PerturbationScenario& scenario,
                                  const Eigen::VectorXd& p_a,
                                  const Eigen::VectorXd& truth_f);

}  // namespace bearloc
