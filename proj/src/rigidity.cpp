#include "bearloc/rigidity.hpp"

#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "bearloc/geometry.hpp"

namespace bearloc {

Eigen::MatrixXd incidence_matrix(const Network& net) {
  const int m = net.edge_count();
  const int n = net.node_count();
  Eigen::MatrixXd H = Eigen::MatrixXd::Zero(m, n);
  for (int k = 0; k < m; ++k) {
    H(k, net.edges()[k].tail) = -1.0;
    H(k, net.edges()[k].head) = 1.0;
  }
  return H;
}

Eigen::MatrixXd rigidity_matrix(const Network& net) {
  const int d = net.dimension();
  const int m = net.edge_count();
  const int n = net.node_count();
  Eigen::MatrixXd R = Eigen::MatrixXd::Zero(d * m, d * n);
  for (int k = 0; k < m; ++k) {
    const Edge& e = net.edges()[k];
    Eigen::VectorXd ek = net.position(e.head) - net.position(e.tail);
    Eigen::MatrixXd block = projector(ek, net.position_tolerance()) / ek.norm();
    R.block(d * k, d * e.tail, d, d) = -block;
    R.block(d * k, d * e.head, d, d) = block;
  }
  return R;
}

BearingLaplacian bearing_laplacian(const Network& net) {
  const int d = net.dimension();
  const int n = net.node_count();
  BearingLaplacian lap;
  lap.d = d;
  lap.n_a = net.anchor_count();
  lap.n_f = net.follower_count();
  lap.B = Eigen::MatrixXd::Zero(d * n, d * n);
  for (const Edge& e : net.edges()) {
    Eigen::MatrixXd P = projector(net.position(e.head) - net.position(e.tail),
                                  net.position_tolerance());
    lap.B.block(d * e.tail, d * e.head, d, d) -= P;
    lap.B.block(d * e.head, d * e.tail, d, d) -= P;
    lap.B.block(d * e.tail, d * e.tail, d, d) += P;
    lap.B.block(d * e.head, d * e.head, d, d) += P;
  }

  // Cross-check against the incidence factorization.
  const int m = net.edge_count();
  Eigen::MatrixXd Hbar = Eigen::MatrixXd::Zero(d * m, d * n);
  for (int k = 0; k < m; ++k) {
    const Edge& e = net.edges()[k];
    Hbar.block(d * k, d * e.tail, d, d) =
        -Eigen::MatrixXd::Identity(d, d);
    Hbar.block(d * k, d * e.head, d, d) = Eigen::MatrixXd::Identity(d, d);
  }
  Eigen::MatrixXd Rtilde = Eigen::MatrixXd::Zero(d * m, d * n);
  for (int k = 0; k < m; ++k) {
    const Edge& e = net.edges()[k];
    Eigen::MatrixXd P = projector(net.position(e.head) - net.position(e.tail),
                                  net.position_tolerance());
    Rtilde.middleRows(d * k, d) = P * Hbar.middleRows(d * k, d);
  }
  const double scale = std::max(1.0, lap.B.norm());
  if ((lap.B - Rtilde.transpose() * Rtilde).norm() > 1e-10 * scale) {
    throw InternalInconsistency(
        "bearing Laplacian does not match its incidence factorization");
  }
  return lap;
}

double bearing_cost(const Network& net, const Eigen::VectorXd& estimate) {
  const int d = net.dimension();
  double cost = 0.0;
  // Both directions of every undirected edge, times the 1/2 prefactor.
  for (const Edge& e : net.edges()) {
    Eigen::MatrixXd P = projector(net.position(e.head) - net.position(e.tail),
                                  net.position_tolerance());
    Eigen::VectorXd diff =
        estimate.segment(d * e.head, d) - estimate.segment(d * e.tail, d);
    cost += (P * diff).squaredNorm();
  }
  return cost;
}

SpectralSummary spectral_summary(const Eigen::MatrixXd& M,
                                 double tol_override) {
  const double scale = std::max(1.0, M.norm());
  if ((M - M.transpose()).norm() > 1e-10 * scale) {
    throw AsymmetricInput("spectral_summary expects a symmetric matrix");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(
      (M + M.transpose()) / 2.0);
  SpectralSummary s;
  s.eigenvalues = es.eigenvalues();
  const double lambda_max =
      s.eigenvalues.size() > 0 ? std::abs(s.eigenvalues.maxCoeff()) : 0.0;
  s.tolerance = tol_override > 0.0
                    ? tol_override
                    : static_cast<double>(M.rows()) *
                          std::numeric_limits<double>::epsilon() * lambda_max;
  int nullity = 0;
  for (Eigen::Index i = 0; i < s.eigenvalues.size(); ++i) {
    if (s.eigenvalues[i] <= s.tolerance) ++nullity;
  }
  s.rank = static_cast<int>(s.eigenvalues.size()) - nullity;
  s.null_basis = es.eigenvectors().leftCols(nullity);
  return s;
}

IbrResult is_ibr(const Network& net, double tol_override) {
  const int d = net.dimension();
  const int n = net.node_count();
  IbrResult r;
  r.required_rank = d * n - d - 1;

  BearingLaplacian lap = bearing_laplacian(net);
  r.rank_B = spectral_summary(lap.B, tol_override).rank;

  Eigen::MatrixXd RB = rigidity_matrix(net);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(RB);
  const double sigma_max =
      svd.singularValues().size() > 0 ? svd.singularValues()(0) : 0.0;
  // tol_override targets the eigenvalues of B; R_B always gets the
  // standard SVD cut on its own scale.
  const double tol = static_cast<double>(std::max(RB.rows(), RB.cols())) *
                     std::numeric_limits<double>::epsilon() * sigma_max;
  r.rank_RB = 0;
  for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i) {
    if (svd.singularValues()(i) > tol) ++r.rank_RB;
  }

  if (r.rank_B != r.rank_RB) {
    throw RankDisagreement(
        "rank(B) = " + std::to_string(r.rank_B) +
        " but rank(R_B) = " + std::to_string(r.rank_RB) +
        "; tighten or override the rank tolerance");
  }
  r.ibr = (r.rank_B == r.required_rank);
  return r;
}

Eigen::MatrixXd trivial_motion_space(const Network& net) {
  const int d = net.dimension();
  const int n = net.node_count();
  Eigen::MatrixXd basis(d * n, d + 1);
  const double inv_sqrt_n = 1.0 / std::sqrt(static_cast<double>(n));
  basis.leftCols(d).setZero();
  for (int i = 0; i < n; ++i) {
    for (int t = 0; t < d; ++t) basis(d * i + t, t) = inv_sqrt_n;
  }
  // Scaling direction: p centered by its mean, which is p minus its
  // projection onto the translations.
  Eigen::VectorXd centered = net.stacked_positions();
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(d);
  for (int i = 0; i < n; ++i) mean += centered.segment(d * i, d);
  mean /= static_cast<double>(n);
  for (int i = 0; i < n; ++i) centered.segment(d * i, d) -= mean;
  basis.col(d) = centered / centered.norm();
  return basis;
}

}  // namespace bearloc
