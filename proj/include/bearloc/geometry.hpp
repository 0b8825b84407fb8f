#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "bearloc/network.hpp"

namespace bearloc {

/// Unit vector from p_i toward p_j. Throws CollocatedNodes when the points
/// coincide within tau_pos.
Eigen::VectorXd bearing(const Eigen::VectorXd& p_i, const Eigen::VectorXd& p_j,
                        double tau_pos = 1e-12);

/// Orthogonal projector I - (x/|x|)(x/|x|)^T. Throws ZeroVector.
Eigen::MatrixXd projector(const Eigen::VectorXd& x, double tau_pos = 1e-12);

/// Angle in [0, pi] between two unit vectors; the inner product is clamped
/// to [-1, 1] before acos. Throws NotUnit when a norm deviates by > 1e-6.
double angle_between(const Eigen::VectorXd& g, const Eigen::VectorXd& g_tilde);

/// Rotates g by exactly theta within the plane spanned by g and a random
/// unit vector orthogonal to g drawn from the engine. Result is unit norm
/// with angle_between(g, result) == theta.
Eigen::VectorXd perturb_bearing(const Eigen::VectorXd& g, double theta,
                                std::mt19937_64& rng);
Eigen::VectorXd perturb_bearing(const Eigen::VectorXd& g, double theta,
                                std::uint64_t seed);

struct EdgeResidual {
  std::string node_i;
  std::string node_j;
  double value = 0.0;
};

struct AnchorResidual {
  std::string node;
  double value = 0.0;
};

struct ResidualMap {
  std::vector<EdgeResidual> edges;
  std::vector<AnchorResidual> anchors;
  double max_value() const;
};

/// Residuals of the nonlinear bearing constraints: per edge
/// |(p_j - p_i)/|p_j - p_i| - g_ij| against the true bearings, per anchor
/// |p_i - p_i^true|. Throws CollocatedEstimates when an edge's estimated
/// endpoints coincide.
ResidualMap nonlinear_residual(const Network& net,
                               const Eigen::VectorXd& estimate);

/// Residuals of the linearized constraints: per edge |P_{g_ij}(p_j - p_i)|,
/// per anchor |p_i - p_i^true|. Defined for any estimate.
ResidualMap linear_residual(const Network& net,
                            const Eigen::VectorXd& estimate);

}  // namespace bearloc
