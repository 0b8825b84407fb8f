#include "bearloc/solver.hpp"

#include <cmath>
#include <limits>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "bearloc/geometry.hpp"

namespace bearloc {

namespace {

struct FfSpectrum {
  double lambda_min = 0.0;
  double lambda_max = 0.0;
  double tau_loc = 0.0;
};

FfSpectrum ff_spectrum(const Eigen::MatrixXd& Bff, double tau_loc) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(
      (Bff + Bff.transpose()) / 2.0, Eigen::EigenvaluesOnly);
  FfSpectrum s;
  s.lambda_min = es.eigenvalues().minCoeff();
  s.lambda_max = es.eigenvalues().maxCoeff();
  s.tau_loc = tau_loc > 0.0
                  ? tau_loc
                  : static_cast<double>(Bff.rows()) *
                        std::numeric_limits<double>::epsilon() * s.lambda_max;
  return s;
}

}  // namespace

DirectSolution solve_direct(const BearingLaplacian& lap,
                            const Eigen::VectorXd& p_a, double tau_loc) {
  const Eigen::MatrixXd Bff = lap.Bff();
  const Eigen::MatrixXd Bfa = lap.Bfa();
  FfSpectrum s = ff_spectrum(Bff, tau_loc);
  if (s.lambda_min <= s.tau_loc) {
    throw SingularSystem("B_ff is singular; the network is not localizable");
  }
  DirectSolution sol;
  sol.lambda_min = s.lambda_min;
  sol.lambda_max = s.lambda_max;
  sol.condition = s.lambda_max / s.lambda_min;
  sol.ill_conditioned = sol.condition > 1e12;
  Eigen::VectorXd rhs = -(Bfa * p_a);
  sol.p_f = Eigen::LDLT<Eigen::MatrixXd>(Bff).solve(rhs);
  sol.residual = (Bff * sol.p_f - rhs).norm();
  return sol;
}

FlowTrajectory simulate_flow(const Eigen::MatrixXd& M_ff,
                             const Eigen::MatrixXd& M_fa,
                             const Eigen::VectorXd& p_a,
                             const Eigen::VectorXd& initial_estimate,
                             const FlowConfig& config,
                             const Eigen::VectorXd* truth_f) {
  const bool symmetric =
      (M_ff - M_ff.transpose()).norm() <= 1e-12 * std::max(1.0, M_ff.norm());
  double spectral_bound;  // lambda_max or sigma_max
  if (symmetric) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(
        (M_ff + M_ff.transpose()) / 2.0, Eigen::EigenvaluesOnly);
    spectral_bound = es.eigenvalues().cwiseAbs().maxCoeff();
  } else {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(M_ff);
    spectral_bound = svd.singularValues()(0);
  }

  double h = config.step_size;
  if (h <= 0.0) {
    h = 1.0 / spectral_bound;
  } else if (h * spectral_bound >= 2.0) {
    throw StepTooLarge("step size " + std::to_string(h) +
                       " violates h * lambda_max < 2");
  }

  FlowTrajectory traj;
  traj.step_size = h;

  Eigen::VectorXd est = initial_estimate;
  const Eigen::VectorXd forcing = M_fa * p_a;
  const int record_every = std::max(1, config.record_every);

  auto record = [&](int step, const Eigen::VectorXd& velocity) {
    FlowRecord rec;
    rec.step = step;
    rec.time = h * step;
    rec.estimate_f = est;
    rec.velocity_inf_norm =
        velocity.size() > 0 ? velocity.cwiseAbs().maxCoeff() : 0.0;
    if (truth_f != nullptr) rec.error_norm = (est - *truth_f).norm();
    traj.records.push_back(std::move(rec));
  };

  int step = 0;
  Eigen::VectorXd velocity = -(M_ff * est + forcing);
  record(0, velocity);
  while (true) {
    if (velocity.cwiseAbs().maxCoeff() < config.convergence_tol) {
      traj.converged = true;
      break;
    }
    if (step >= config.max_steps) break;
    est += h * velocity;
    ++step;
    velocity = -(M_ff * est + forcing);
    if (step % record_every == 0) record(step, velocity);
  }
  if (traj.records.back().step != step) record(step, velocity);
  traj.steps_taken = step;
  return traj;
}

FlowTrajectory simulate_flow(const BearingLaplacian& lap,
                             const Eigen::VectorXd& p_a,
                             const Eigen::VectorXd& initial_estimate,
                             const FlowConfig& config,
                             const Eigen::VectorXd* truth_f) {
  return simulate_flow(lap.Bff(), lap.Bfa(), p_a, initial_estimate, config,
                       truth_f);
}

Eigen::VectorXd flow_velocity_edgewise(const Network& net,
                                       const Eigen::VectorXd& estimate_f) {
  const int d = net.dimension();
  const int n_a = net.anchor_count();
  Eigen::VectorXd vel = Eigen::VectorXd::Zero(d * net.follower_count());
  auto node_estimate = [&](int idx) -> Eigen::VectorXd {
    if (idx < n_a) return net.position(idx);  // anchors stay at truth
    return estimate_f.segment(d * (idx - n_a), d);
  };
  for (int i = n_a; i < net.node_count(); ++i) {
    Eigen::VectorXd sum = Eigen::VectorXd::Zero(d);
    for (int j : net.neighbors()[i]) {
      Eigen::MatrixXd P = projector(net.position(j) - net.position(i),
                                    net.position_tolerance());
      sum -= P * (node_estimate(i) - node_estimate(j));
    }
    vel.segment(d * (i - n_a), d) = sum;
  }
  return vel;
}

Eigen::VectorXd default_initial_estimate(const Network& net,
                                         std::uint64_t seed) {
  const int d = net.dimension();
  Eigen::VectorXd centroid = Eigen::VectorXd::Zero(d);
  for (int i = 0; i < net.anchor_count(); ++i) centroid += net.position(i);
  centroid /= std::max(1, net.anchor_count());

  double diameter = 0.0;
  for (int i = 0; i < net.node_count(); ++i) {
    for (int j = i + 1; j < net.node_count(); ++j) {
      diameter = std::max(diameter,
                          (net.position(i) - net.position(j)).norm());
    }
  }
  if (diameter == 0.0) diameter = 1.0;

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(-diameter, diameter);
  Eigen::VectorXd est(d * net.follower_count());
  for (int i = 0; i < net.follower_count(); ++i) {
    for (int t = 0; t < d; ++t) est[d * i + t] = centroid[t] + uni(rng);
  }
  return est;
}

Eigen::VectorXd anchor_error_propagation(const BearingLaplacian& lap,
                                         const Eigen::VectorXd& delta_p_a,
                                         double tau_loc) {
  const Eigen::MatrixXd Bff = lap.Bff();
  FfSpectrum s = ff_spectrum(Bff, tau_loc);
  if (s.lambda_min <= s.tau_loc) {
    throw SingularSystem("B_ff is singular; error propagation undefined");
  }
  return Eigen::LDLT<Eigen::MatrixXd>(Bff).solve(-(lap.Bfa() * delta_p_a));
}

void write_trajectory_csv(std::ostream& out, const FlowTrajectory& traj,
                          const Network& net) {
  const int d = net.dimension();
  out << "step,t";
  for (int i = net.anchor_count(); i < net.node_count(); ++i) {
    for (int t = 0; t < d; ++t) {
      out << "," << net.id_of(i) << "_" << t;
    }
  }
  out << ",velocity_inf_norm,error_norm\n";
  out.precision(17);
  for (const auto& rec : traj.records) {
    out << rec.step << "," << rec.time;
    for (Eigen::Index k = 0; k < rec.estimate_f.size(); ++k) {
      out << "," << rec.estimate_f[k];
    }
    out << "," << rec.velocity_inf_norm << ",";
    if (rec.error_norm) out << *rec.error_norm;
    out << "\n";
  }
}

}  // namespace bearloc
