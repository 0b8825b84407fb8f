#pragma once

#include <optional>
#include <string>

#include <Eigen/Dense>

#include "bearloc/network.hpp"
#include "bearloc/rigidity.hpp"

namespace bearloc {

enum class Verdict { Localizable, NotLocalizable, NearSingular };

std::string to_string(Verdict v);

struct Tolerances {
  /// Numeric-rank cut; <= 0 means the order * eps * lambda_max default.
  double tau_rank = -1.0;
  /// Localizability cut on lambda_min(B_ff); <= 0 means
  /// d*n_f * 2^-52 * lambda_max(B_ff).
  double tau_loc = -1.0;
  /// NearSingular spans (tau_loc, near_singular_decades * tau_loc].
  double near_singular_factor = 1e3;
};

struct AlgebraicCheck {
  bool localizable = false;
  double lambda_min = 0.0;
  double tau_loc = 0.0;
};

/// Nonsingularity of B_ff: lambda_min(B_ff) > tau_loc.
AlgebraicCheck check_algebraic(const BearingLaplacian& lap,
                               const Tolerances& tol = {});

struct RigidityCheck {
  bool localizable = false;
  /// Unit-norm (in the follower part) infinitesimal motion with zero anchor
  /// displacement; present iff not localizable.
  std::optional<Eigen::VectorXd> witness;
};

/// Every infinitesimal bearing motion must involve an anchor: the anchor-row
/// block N_a of the null-space basis has full column rank. When it does not,
/// a follower-only motion is reconstructed from the null space of N_a.
RigidityCheck check_rigidity(const BearingLaplacian& lap,
                             const SpectralSummary& spectrum);

/// Necessary-condition quantity nullity(B)/d; localizability requires
/// n_a >= this value.
double anchor_lower_bound(const SpectralSummary& spectrum, int d);

struct AugmentedIbrCheck {
  bool ibr_augmented = false;
  bool sufficient_verdict = false;  // implies localizable when true
  bool equivalence_applies = false; // n_a == 2: ibr_augmented <=> localizable
};

/// IBR of the anchor-augmented network. Sufficient for localizability when
/// n_a >= 2 and equivalent to it when n_a == 2. Throws TooFewAnchors for
/// n_a < 2.
AugmentedIbrCheck check_augmented_ibr(const Network& net,
                                      double tol_override = -1.0);

struct LocalizabilityReport {
  Verdict verdict = Verdict::NotLocalizable;
  double lambda_min_Bff = 0.0;
  int rank_B = 0;
  int nullity_B = 0;
  double anchor_lower_bound = 0.0;
  bool ibr_G = false;
  bool ibr_augmented = false;
  bool condition_agreement = false;
  std::optional<Eigen::VectorXd> witness;  // stacked dn vector, anchor part ~0
  double tau_rank = 0.0;
  double tau_loc = 0.0;
};

/// Runs all applicable conditions and cross-validates them. Disagreement
/// outside the near-singular ambiguity band throws InternalInconsistency.
LocalizabilityReport classify(const Network& net, const Tolerances& tol = {});

}  // namespace bearloc
