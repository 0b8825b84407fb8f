#include "bearloc/localizability.hpp"

#include <cmath>
#include <limits>

#include <Eigen/SVD>

namespace bearloc {

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Localizable:
      return "localizable";
    case Verdict::NotLocalizable:
      return "not_localizable";
    case Verdict::NearSingular:
      return "near_singular";
  }
  return "unknown";
}

namespace {

double default_tau_loc(const Eigen::VectorXd& eigenvalues) {
  const double lambda_max =
      eigenvalues.size() > 0 ? std::abs(eigenvalues.maxCoeff()) : 0.0;
  return static_cast<double>(eigenvalues.size()) *
         std::numeric_limits<double>::epsilon() * lambda_max;
}

}  // namespace

AlgebraicCheck check_algebraic(const BearingLaplacian& lap,
                               const Tolerances& tol) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(
      (lap.Bff() + lap.Bff().transpose()) / 2.0);
  AlgebraicCheck out;
  out.lambda_min = es.eigenvalues().minCoeff();
  out.tau_loc =
      tol.tau_loc > 0.0 ? tol.tau_loc : default_tau_loc(es.eigenvalues());
  out.localizable = out.lambda_min > out.tau_loc;
  return out;
}

RigidityCheck check_rigidity(const BearingLaplacian& lap,
                             const SpectralSummary& spectrum) {
  RigidityCheck out;
  const int da = lap.d * lap.n_a;
  const Eigen::MatrixXd& N = spectrum.null_basis;
  const Eigen::Index k = N.cols();
  if (k == 0) {
    // Empty null space cannot host a follower-only motion.
    out.localizable = true;
    return out;
  }
  Eigen::MatrixXd Na = N.topRows(da);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(
      Na, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const double sigma_max =
      svd.singularValues().size() > 0 ? svd.singularValues()(0) : 0.0;
  // The computed null basis spans the true null space only up to
  // eps * lambda_max / gap (gap = smallest eigenvalue counted as nonzero),
  // so the rank cut on N_a has to absorb that rotation error.
  const int order = static_cast<int>(spectrum.eigenvalues.size());
  const int rank_B = spectrum.rank;
  double conditioning = 1.0;
  if (rank_B > 0) {
    const double lambda_max = spectrum.eigenvalues(order - 1);
    const double gap = spectrum.eigenvalues(order - rank_B);
    if (gap > 0.0) conditioning = std::max(1.0, lambda_max / gap);
  }
  const double tol = static_cast<double>(std::max<Eigen::Index>(Na.rows(), k)) *
                     std::numeric_limits<double>::epsilon() * conditioning *
                     std::max(sigma_max, 1.0);
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i) {
    if (svd.singularValues()(i) > tol) ++rank;
  }
  out.localizable = (Na.rows() >= k) && (rank == k);
  if (!out.localizable) {
    // Right singular vector of the smallest singular value of N_a gives the
    // null-space coefficients of a motion with (numerically) zero anchor part.
    Eigen::VectorXd x;
    if (Na.rows() >= k) {
      x = svd.matrixV().col(k - 1);
    } else {
      // Wide N_a: complete the SVD to get a right null vector.
      Eigen::JacobiSVD<Eigen::MatrixXd> full(Na, Eigen::ComputeFullV);
      x = full.matrixV().col(k - 1);
    }
    Eigen::VectorXd dp = N * x;
    const double follower_norm = dp.tail(lap.d * lap.n_f).norm();
    if (follower_norm > 0.0) dp /= follower_norm;
    out.witness = dp;
  }
  return out;
}

double anchor_lower_bound(const SpectralSummary& spectrum, int d) {
  const int order = static_cast<int>(spectrum.eigenvalues.size());
  return static_cast<double>(order - spectrum.rank) / static_cast<double>(d);
}

AugmentedIbrCheck check_augmented_ibr(const Network& net,
                                      double tol_override) {
  if (net.anchor_count() < 2) {
    throw TooFewAnchors("augmented-network check requires n_a >= 2");
  }
  AugmentedIbrCheck out;
  Network augmented = Network::from_spec(augment_anchors(net.to_spec()));
  out.ibr_augmented = is_ibr(augmented, tol_override).ibr;
  out.sufficient_verdict = out.ibr_augmented;
  out.equivalence_applies = (net.anchor_count() == 2);
  return out;
}

LocalizabilityReport classify(const Network& net, const Tolerances& tol) {
  LocalizabilityReport report;
  BearingLaplacian lap = bearing_laplacian(net);
  SpectralSummary spectrum = spectral_summary(lap.B, tol.tau_rank);

  report.rank_B = spectrum.rank;
  report.nullity_B = lap.order() - spectrum.rank;
  report.tau_rank = spectrum.tolerance;
  report.anchor_lower_bound = anchor_lower_bound(spectrum, net.dimension());

  AlgebraicCheck algebraic = check_algebraic(lap, tol);
  report.lambda_min_Bff = algebraic.lambda_min;
  report.tau_loc = algebraic.tau_loc;

  RigidityCheck rigidity = check_rigidity(lap, spectrum);
  report.witness = rigidity.witness;

  report.ibr_G = is_ibr(net, tol.tau_rank).ibr;
  bool augmented_applicable = net.anchor_count() >= 2;
  AugmentedIbrCheck augmented;
  if (augmented_applicable) {
    augmented = check_augmented_ibr(net, tol.tau_rank);
    report.ibr_augmented = augmented.ibr_augmented;
  }

  const bool in_band =
      algebraic.lambda_min > algebraic.tau_loc &&
      algebraic.lambda_min <= tol.near_singular_factor * algebraic.tau_loc;
  if (!algebraic.localizable) {
    report.verdict = Verdict::NotLocalizable;
  } else if (in_band) {
    report.verdict = Verdict::NearSingular;
  } else {
    report.verdict = Verdict::Localizable;
  }

  report.condition_agreement =
      algebraic.localizable == rigidity.localizable &&
      (!augmented_applicable || !augmented.equivalence_applies ||
       augmented.ibr_augmented == algebraic.localizable);
  if (!report.condition_agreement && !in_band) {
    throw InternalInconsistency(
        "localizability conditions disagree outside the near-singular band "
        "(lambda_min = " +
        std::to_string(algebraic.lambda_min) + ")");
  }
  return report;
}

}  // namespace bearloc
