#pragma once

#include <Eigen/Dense>

#include "bearloc/network.hpp"

namespace bearloc {

/// m x n incidence matrix under the canonical orientation (tail = smaller
/// internal index carries -1, head +1). Row sums are exactly zero.
Eigen::MatrixXd incidence_matrix(const Network& net);

/// Bearing rigidity matrix, dm x dn: block row k is -P_{g_k}/|e_k| at the
/// tail and +P_{g_k}/|e_k| at the head of edge k.
Eigen::MatrixXd rigidity_matrix(const Network& net);

/// dn x dn bearing Laplacian with the anchor/follower block partition.
struct BearingLaplacian {
  Eigen::MatrixXd B;
  int d = 0;
  int n_a = 0;
  int n_f = 0;

  int order() const { return B.rows(); }
  auto Baa() const { return B.topLeftCorner(d * n_a, d * n_a); }
  auto Baf() const { return B.topRightCorner(d * n_a, d * n_f); }
  auto Bfa() const { return B.bottomLeftCorner(d * n_f, d * n_a); }
  auto Bff() const { return B.bottomRightCorner(d * n_f, d * n_f); }
};

/// Assembles B from the projectors of the true bearings and cross-checks it
/// against the factorization B = R~^T R~, R~ = diag(P_{g_k}) (H kron I_d).
BearingLaplacian bearing_laplacian(const Network& net);

/// Value of the bearing least-squares objective at a stacked estimate,
/// accumulated edge-wise (both directions of every undirected edge).
double bearing_cost(const Network& net, const Eigen::VectorXd& estimate);

struct SpectralSummary {
  Eigen::VectorXd eigenvalues;  // ascending
  int rank = 0;
  Eigen::MatrixXd null_basis;  // orthonormal columns
  double tolerance = 0.0;
};

/// Eigendecomposition of a symmetric PSD matrix with a numeric rank cut.
/// Default tolerance: order * 2^-52 * lambda_max; pass tol_override > 0 to
/// replace it. Throws AsymmetricInput.
SpectralSummary spectral_summary(const Eigen::MatrixXd& M,
                                 double tol_override = -1.0);

struct IbrResult {
  bool ibr = false;
  int rank_B = 0;
  int rank_RB = 0;
  int required_rank = 0;  // dn - d - 1
};

/// Infinitesimal bearing rigidity: rank(B) == dn - d - 1. The rank is
/// computed from both B and the rigidity matrix; a mismatch throws
/// RankDisagreement instead of being resolved silently.
IbrResult is_ibr(const Network& net, double tol_override = -1.0);

/// Orthonormal basis (d+1 columns) of the trivial motions: d translations
/// plus the scaling direction p. The scaling column uses mean-centered p,
/// which spans the same space once the translations are present.
Eigen::MatrixXd trivial_motion_space(const Network& net);

}  // namespace bearloc
