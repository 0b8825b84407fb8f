#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <vector>

#include <Eigen/Dense>

#include "bearloc/network.hpp"
#include "bearloc/rigidity.hpp"

namespace bearloc {

struct DirectSolution {
  Eigen::VectorXd p_f;
  double residual = 0.0;        // |B_ff x + B_fa p_a|
  double condition = 0.0;       // lambda_max / lambda_min of B_ff
  bool ill_conditioned = false; // condition > 1e12; result still returned
  double lambda_min = 0.0;
  double lambda_max = 0.0;
};

/// Follower positions from the SPD solve B_ff x = -B_fa p_a. Throws
/// SingularSystem when B_ff is numerically singular.
DirectSolution solve_direct(const BearingLaplacian& lap,
                            const Eigen::VectorXd& p_a,
                            double tau_loc = -1.0);

struct FlowConfig {
  double step_size = 0.0;  // <= 0: auto, 1/lambda_max (1/sigma_max if nonsymmetric)
  int max_steps = 100000;
  double convergence_tol = 1e-9;  // on the infinity norm of the velocity
  int record_every = 100;
};

struct FlowRecord {
  int step = 0;
  double time = 0.0;
  Eigen::VectorXd estimate_f;
  double velocity_inf_norm = 0.0;
  std::optional<double> error_norm;  // vs truth when known
};

struct FlowTrajectory {
  std::vector<FlowRecord> records;
  bool converged = false;
  int steps_taken = 0;
  double step_size = 0.0;
};

/// Explicit-Euler discretization of the gradient flow
/// p_f <- p_f - h (M_ff p_f + M_fa p_a). M_ff may be the perturbed,
/// nonsymmetric block. Throws StepTooLarge when an explicit step violates
/// h * lambda_max < 2. Records step 0, every record_every-th step and the
/// final step; error_norm is filled when truth_f is given.
FlowTrajectory simulate_flow(const Eigen::MatrixXd& M_ff,
                             const Eigen::MatrixXd& M_fa,
                             const Eigen::VectorXd& p_a,
                             const Eigen::VectorXd& initial_estimate,
                             const FlowConfig& config,
                             const Eigen::VectorXd* truth_f = nullptr);

FlowTrajectory simulate_flow(const BearingLaplacian& lap,
                             const Eigen::VectorXd& p_a,
                             const Eigen::VectorXd& initial_estimate,
                             const FlowConfig& config,
                             const Eigen::VectorXd* truth_f = nullptr);

/// Flow velocity assembled edge-wise per follower (the distributed form):
/// -sum_j P_{g_ij} (p_i - p_j) with anchor neighbors held at their true
/// positions. Agrees with -(B_ff p_f + B_fa p_a) up to rounding.
Eigen::VectorXd flow_velocity_edgewise(const Network& net,
                                       const Eigen::VectorXd& estimate_f);

/// Anchors' centroid replicated per follower plus seeded uniform noise with
/// magnitude of the network diameter.
Eigen::VectorXd default_initial_estimate(const Network& net,
                                         std::uint64_t seed);

/// Follower error caused by an anchor location error: -B_ff^{-1} B_fa dp_a.
Eigen::VectorXd anchor_error_propagation(const BearingLaplacian& lap,
                                         const Eigen::VectorXd& delta_p_a,
                                         double tau_loc = -1.0);

/// Columns: step, t, follower coordinates, velocity_inf_norm, error_norm
/// (blank when truth was withheld).
void write_trajectory_csv(std::ostream& out, const FlowTrajectory& traj,
                          const Network& net);

}  // namespace bearloc
