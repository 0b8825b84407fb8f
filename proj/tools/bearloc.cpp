// Command-line front end: load a network file, classify it, solve for the
// followers, run the gradient-flow protocol, or evaluate measurement-error
// sensitivity. Reports are JSON (trajectories CSV); every report embeds the
// input digest, the seeds and the tolerances that produced it.
#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <string>

#include <CLI11.hpp>
#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "bearloc/geometry.hpp"
#include "bearloc/json_io.hpp"
#include "bearloc/localizability.hpp"
#include "bearloc/rigidity.hpp"
#include "bearloc/sensitivity.hpp"
#include "bearloc/solver.hpp"

using nlohmann::json;

namespace {

// Exit codes, stable across versions:
//   0 success / localizable
//   1 malformed input
//   2 internal inconsistency
//   3 not localizable
//   4 near-singular verdict
//   5 step limit reached without convergence
constexpr int kOk = 0;
constexpr int kBadInput = 1;
constexpr int kInconsistent = 2;
constexpr int kNotLocalizable = 3;
constexpr int kNearSingular = 4;
constexpr int kStepLimit = 5;

struct Options {
  std::string input;
  std::string out;
  std::uint64_t seed = 0;
  double tol_rank = -1.0;
  double tol_loc = -1.0;
  double step = 0.0;
  int max_steps = 100000;
  double conv_tol = 1e-9;
  double max_angle = -1.0;
  std::string angles_file;
  bool emit_matrices = false;
};

void emit(const Options& opt, const json& report) {
  if (opt.out.empty()) {
    std::cout << report.dump(2) << "\n";
  } else {
    std::ofstream os(opt.out);
    if (!os) throw bearloc::Error("cannot write '" + opt.out + "'");
    os << report.dump(2) << "\n";
  }
}

json vector_by_id(const bearloc::Network& net, const Eigen::VectorXd& stacked,
                  int first_node) {
  const int d = net.dimension();
  json out = json::object();
  for (int i = first_node; i < net.node_count(); ++i) {
    Eigen::VectorXd v = stacked.segment(d * (i - first_node), d);
    out[net.id_of(i)] = std::vector<double>(v.data(), v.data() + d);
  }
  return out;
}

void write_matrix_csv(const std::string& path, const Eigen::MatrixXd& M) {
  std::ofstream os(path);
  if (!os) throw bearloc::Error("cannot write '" + path + "'");
  os.precision(17);
  for (Eigen::Index r = 0; r < M.rows(); ++r) {
    for (Eigen::Index c = 0; c < M.cols(); ++c) {
      if (c) os << ",";
      os << M(r, c);
    }
    os << "\n";
  }
}

// Dense CSV export next to --out (or into the working directory when writing
// to stdout); the report lists the file names.
json export_matrices(const Options& opt,
                     const std::vector<std::pair<std::string,
                                                 Eigen::MatrixXd>>& mats) {
  std::string stem = "bearloc";
  if (!opt.out.empty()) {
    stem = opt.out;
    auto dot = stem.rfind('.');
    if (dot != std::string::npos && dot > stem.rfind('/') + 1) {
      stem = stem.substr(0, dot);
    }
  }
  json out = json::object();
  for (const auto& [name, M] : mats) {
    const std::string path = stem + "_" + name + ".csv";
    write_matrix_csv(path, M);
    out[name] = path;
  }
  return out;
}

json base_report(const Options& opt) {
  json j;
  j["input"] = opt.input;
  j["input_digest"] = bearloc::file_digest(opt.input);
  return j;
}

bearloc::Tolerances tolerances(const Options& opt) {
  bearloc::Tolerances tol;
  tol.tau_rank = opt.tol_rank;
  tol.tau_loc = opt.tol_loc;
  return tol;
}

// Per-directed-edge angles from the --angles-file JSON:
// [{"tail": id, "head": id, "angle": radians}, ...]. Tails must be
// followers.
std::map<std::pair<int, int>, double> load_angles(
    const bearloc::Network& net, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw bearloc::Error("cannot open '" + path + "'");
  json j;
  in >> j;
  std::map<std::pair<int, int>, double> angles;
  for (const auto& row : j) {
    const int tail = net.index_of(row.at("tail").get<std::string>());
    const int head = net.index_of(row.at("head").get<std::string>());
    if (net.is_anchor(tail)) {
      throw bearloc::Error("angle entries must have follower tails");
    }
    angles[{tail, head}] = row.at("angle").get<double>();
  }
  return angles;
}

std::optional<bearloc::PerturbationScenario> maybe_scenario(
    const Options& opt, const bearloc::Network& net,
    const bearloc::BearingLaplacian& lap) {
  if (!opt.angles_file.empty()) {
    return bearloc::build_scenario(net, lap, load_angles(net, opt.angles_file),
                                   opt.seed);
  }
  if (opt.max_angle >= 0.0) {
    return bearloc::build_scenario(net, lap, opt.max_angle, opt.seed);
  }
  return std::nullopt;
}

int cmd_check(const Options& opt) {
  auto loaded = bearloc::load_network(opt.input);
  if (!loaded.missing_positions.empty()) {
    throw bearloc::Error("'check' needs every node position");
  }
  auto net = bearloc::Network::from_spec(loaded.spec);
  auto report = bearloc::classify(net, tolerances(opt));

  json j = base_report(opt);
  j.update(bearloc::report_to_json(report, net));
  if (report.verdict != bearloc::Verdict::Localizable &&
      net.anchor_count() < report.anchor_lower_bound) {
    j["reason"] = "anchor count below the necessary lower bound nullity(B)/d";
  }
  if (opt.emit_matrices) {
    auto lap = bearloc::bearing_laplacian(net);
    j["matrices"] = export_matrices(
        opt, {{"B", lap.B},
              {"Bff", lap.Bff()},
              {"Bfa", lap.Bfa()},
              {"RB", bearloc::rigidity_matrix(net)}});
  }
  emit(opt, j);
  switch (report.verdict) {
    case bearloc::Verdict::Localizable:
      return kOk;
    case bearloc::Verdict::NearSingular:
      return kNearSingular;
    case bearloc::Verdict::NotLocalizable:
      return kNotLocalizable;
  }
  return kInconsistent;
}

json spectral_to_json(const bearloc::SpectralSummary& s) {
  json j;
  j["rank"] = s.rank;
  j["nullity"] = static_cast<int>(s.null_basis.cols());
  j["tolerance"] = s.tolerance;
  j["eigenvalues"] = std::vector<double>(
      s.eigenvalues.data(), s.eigenvalues.data() + s.eigenvalues.size());
  return j;
}

int cmd_rigidity(const Options& opt) {
  auto loaded = bearloc::load_network(opt.input);
  if (!loaded.missing_positions.empty()) {
    throw bearloc::Error("'rigidity' needs every node position");
  }
  auto net = bearloc::Network::from_spec(loaded.spec);
  auto lap = bearloc::bearing_laplacian(net);
  auto ibr = bearloc::is_ibr(net, opt.tol_rank);
  Eigen::MatrixXd R = bearloc::rigidity_matrix(net);

  json j = base_report(opt);
  j["ibr"] = ibr.ibr;
  j["rank_B"] = ibr.rank_B;
  j["rank_RB"] = ibr.rank_RB;
  j["required_rank"] = ibr.required_rank;
  j["B"] = spectral_to_json(bearloc::spectral_summary(lap.B, opt.tol_rank));
  j["RB_gram"] = spectral_to_json(
      bearloc::spectral_summary(Eigen::MatrixXd(R.transpose() * R)));
  j["tolerances"] = {{"tau_rank", opt.tol_rank}};
  if (opt.emit_matrices) {
    j["matrices"] = export_matrices(opt, {{"B", lap.B}, {"RB", R}});
  }
  emit(opt, j);
  return kOk;
}

// Blocks assembled from explicitly measured bearings (solve with withheld
// follower positions). Falls back to the reversed measurement, then to the
// geometric bearing when both endpoint positions are known.
std::pair<Eigen::MatrixXd, Eigen::MatrixXd> blocks_from_bearings(
    const bearloc::Network& net,
    const std::map<std::pair<int, int>, Eigen::VectorXd>& measured,
    const std::set<std::string>& missing) {
  const int d = net.dimension();
  const int n_a = net.anchor_count();
  const int n_f = net.follower_count();
  Eigen::MatrixXd Mff = Eigen::MatrixXd::Zero(d * n_f, d * n_f);
  Eigen::MatrixXd Mfa = Eigen::MatrixXd::Zero(d * n_f, d * n_a);
  for (int i = n_a; i < net.node_count(); ++i) {
    for (int j : net.neighbors()[i]) {
      Eigen::VectorXd g;
      if (auto it = measured.find({i, j}); it != measured.end()) {
        g = it->second;
      } else if (auto rev = measured.find({j, i}); rev != measured.end()) {
        g = -rev->second;
      } else if (!missing.count(net.id_of(i)) &&
                 !missing.count(net.id_of(j))) {
        g = bearloc::bearing(net.position(i), net.position(j));
      } else {
        throw bearloc::Error("no bearing available for edge " + net.id_of(i) +
                             " -> " + net.id_of(j));
      }
      Eigen::MatrixXd P = bearloc::projector(g);
      const int row = d * (i - n_a);
      Mff.block(row, row, d, d) += P;
      if (j < n_a) {
        Mfa.block(row, d * j, d, d) -= P;
      } else {
        Mff.block(row, d * (j - n_a), d, d) -= P;
      }
    }
  }
  return {Mff, Mfa};
}

std::map<std::pair<int, int>, Eigen::VectorXd> load_measured_bearings(
    const bearloc::Network& net, const std::string& path) {
  std::ifstream in(path);
  json j;
  in >> j;
  std::map<std::pair<int, int>, Eigen::VectorXd> measured;
  for (const auto& row : j.value("bearings", json::array())) {
    auto coords = row.at("vector").get<std::vector<double>>();
    Eigen::VectorXd g = Eigen::Map<Eigen::VectorXd>(
        coords.data(), static_cast<Eigen::Index>(coords.size()));
    if (std::abs(g.norm() - 1.0) > 1e-9) {
      throw bearloc::Error("measured bearing is not a unit vector");
    }
    measured[{net.index_of(row.at("tail").get<std::string>()),
              net.index_of(row.at("head").get<std::string>())}] = g;
  }
  return measured;
}

int cmd_solve(const Options& opt) {
  auto loaded = bearloc::load_network(opt.input);
  auto net = bearloc::Network::from_spec(loaded.spec);
  const std::set<std::string> missing(loaded.missing_positions.begin(),
                                      loaded.missing_positions.end());
  auto measured = load_measured_bearings(net, opt.input);

  json j = base_report(opt);
  Eigen::VectorXd p_f_hat;
  if (missing.empty() && measured.empty()) {
    // Positions act as ground truth; bearings derive from them.
    auto lap = bearloc::bearing_laplacian(net);
    auto report = bearloc::classify(net, tolerances(opt));
    j["verdict"] = bearloc::to_string(report.verdict);
    if (report.verdict == bearloc::Verdict::NotLocalizable) {
      emit(opt, j);
      return kNotLocalizable;
    }
    auto sol = bearloc::solve_direct(lap, net.anchor_positions(), opt.tol_loc);
    p_f_hat = sol.p_f;
    j["residual"] = sol.residual;
    j["condition"] = sol.condition;
    j["ill_conditioned"] = sol.ill_conditioned;
    j["error_norm"] = (sol.p_f - net.follower_positions()).norm();
  } else {
    // Followers are genuine unknowns; the file must supply the bearings.
    auto [Mff, Mfa] = blocks_from_bearings(net, measured, missing);
    Eigen::FullPivLU<Eigen::MatrixXd> lu(Mff);
    if (!lu.isInvertible()) {
      j["verdict"] = "not_localizable";
      emit(opt, j);
      return kNotLocalizable;
    }
    p_f_hat = lu.solve(-(Mfa * net.anchor_positions()));
    j["residual"] = (Mff * p_f_hat + Mfa * net.anchor_positions()).norm();
  }

  // Linear residual of the full estimate, using the same bearings.
  Eigen::VectorXd full(net.dimension() * net.node_count());
  full.head(net.dimension() * net.anchor_count()) = net.anchor_positions();
  full.tail(p_f_hat.size()) = p_f_hat;
  if (measured.empty()) {
    j["linear_residual"] = bearloc::linear_residual(net, full).max_value();
  }
  j["positions"] = vector_by_id(net, p_f_hat, net.anchor_count());
  j["tolerances"] = {{"tau_loc", opt.tol_loc}};
  emit(opt, j);
  return kOk;
}

int cmd_simulate(const Options& opt) {
  auto loaded = bearloc::load_network(opt.input);
  if (!loaded.missing_positions.empty()) {
    throw bearloc::Error("'simulate' needs every node position");
  }
  auto net = bearloc::Network::from_spec(loaded.spec);
  auto lap = bearloc::bearing_laplacian(net);

  bearloc::FlowConfig cfg;
  cfg.step_size = opt.step;
  cfg.max_steps = opt.max_steps;
  cfg.convergence_tol = opt.conv_tol;

  Eigen::VectorXd init = bearloc::default_initial_estimate(net, opt.seed);
  Eigen::VectorXd truth = net.follower_positions();
  Eigen::VectorXd p_a = net.anchor_positions();

  auto scenario = maybe_scenario(opt, net, lap);
  bearloc::FlowTrajectory traj =
      scenario ? bearloc::simulate_flow(scenario->Bff_tilde,
                                        scenario->Bfa_tilde, p_a, init, cfg,
                                        &truth)
               : bearloc::simulate_flow(lap, p_a, init, cfg, &truth);

  json j = base_report(opt);
  j["seed"] = opt.seed;
  j["converged"] = traj.converged;
  j["steps"] = traj.steps_taken;
  j["step_size"] = traj.step_size;
  j["final_error"] = *traj.records.back().error_norm;
  j["final_velocity_inf_norm"] = traj.records.back().velocity_inf_norm;
  j["perturbed"] = scenario.has_value();
  if (scenario) j["epsilon"] = scenario->epsilon;
  j["positions"] =
      vector_by_id(net, traj.records.back().estimate_f, net.anchor_count());
  j["config"] = {{"step", opt.step},
                 {"max_steps", opt.max_steps},
                 {"conv_tol", opt.conv_tol}};

  // Summary JSON on stdout; the CSV trajectory goes to --out when given.
  if (!opt.out.empty()) {
    std::ofstream os(opt.out);
    if (!os) throw bearloc::Error("cannot write '" + opt.out + "'");
    bearloc::write_trajectory_csv(os, traj, net);
    j["trajectory"] = opt.out;
  }
  std::cout << j.dump(2) << "\n";
  return traj.converged ? kOk : kStepLimit;
}

int cmd_perturb(const Options& opt) {
  auto loaded = bearloc::load_network(opt.input);
  if (!loaded.missing_positions.empty()) {
    throw bearloc::Error("'perturb' needs every node position");
  }
  auto net = bearloc::Network::from_spec(loaded.spec);
  auto lap = bearloc::bearing_laplacian(net);

  auto report = bearloc::classify(net, tolerances(opt));
  if (report.verdict == bearloc::Verdict::NotLocalizable) {
    json j = base_report(opt);
    j["verdict"] = bearloc::to_string(report.verdict);
    emit(opt, j);
    return kNotLocalizable;
  }

  Options with_default = opt;
  if (opt.angles_file.empty() && opt.max_angle < 0.0) {
    with_default.max_angle = 0.05;
  }
  auto scenario = *maybe_scenario(with_default, net, lap);
  auto stability = bearloc::stability_check(scenario, lap, opt.tol_loc);
  Eigen::VectorXd p_a = net.anchor_positions();
  Eigen::VectorXd p_f = net.follower_positions();
  auto bound = bearloc::error_bound(scenario, lap, p_a, p_f);

  json j = base_report(opt);
  j["seed"] = opt.seed;
  j["epsilon"] = scenario.epsilon;
  j["lambda_min_Bff"] = report.lambda_min_Bff;
  j["dBff_norm"] = scenario.dBff.norm();
  j["dBfa_norm"] = scenario.dBfa.norm();
  j["sufficient_condition_met"] = stability.sufficient_condition_met;
  j["actually_stable"] = stability.actually_stable;
  j["margin"] = stability.margin;
  j["min_real_part"] = stability.min_real_part;
  if (bound) {
    j["error_bound"] = *bound;
  } else {
    j["error_bound"] = "inapplicable";
  }
  if (stability.actually_stable) {
    auto sol = bearloc::perturbed_solve(scenario, p_a, p_f);
    j["realized_error"] = sol.realized_error;
    j["positions"] = vector_by_id(net, sol.p_f, net.anchor_count());
  }
  j["angles"] = json::array();
  for (const auto& mb : scenario.bearings) {
    j["angles"].push_back({{"tail", net.id_of(mb.tail)},
                           {"head", net.id_of(mb.head)},
                           {"angle", mb.theta}});
  }
  j["tolerances"] = {{"tau_loc", opt.tol_loc}};
  if (opt.emit_matrices) {
    j["matrices"] = export_matrices(opt, {{"Bff_tilde", scenario.Bff_tilde},
                                          {"Bfa_tilde", scenario.Bfa_tilde}});
  }
  emit(opt, j);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bearing-based network localizability and localization"};
  app.require_subcommand(1);

  Options opt;
  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--input", opt.input, "network JSON file")->required();
    cmd->add_option("--out", opt.out, "output path (default: stdout)");
    cmd->add_option("--seed", opt.seed, "RNG seed, echoed in the output");
    cmd->add_option("--tol-rank", opt.tol_rank, "numeric-rank tolerance");
    cmd->add_option("--tol-loc", opt.tol_loc,
                    "localizability tolerance on lambda_min(B_ff)");
    cmd->add_flag("--emit-matrices", opt.emit_matrices,
                  "export dense matrices as CSV");
  };
  auto add_flow = [&](CLI::App* cmd) {
    cmd->add_option("--step", opt.step, "step size (default: 1/lambda_max)");
    cmd->add_option("--max-steps", opt.max_steps, "iteration limit");
    cmd->add_option("--conv-tol", opt.conv_tol,
                    "velocity infinity-norm convergence cut");
  };
  auto add_perturbation = [&](CLI::App* cmd) {
    cmd->add_option("--max-angle", opt.max_angle,
                    "uniform per-edge angle cap (radians)");
    cmd->add_option("--angles-file", opt.angles_file,
                    "per-edge angle JSON file");
  };

  auto* check = app.add_subcommand("check", "classify localizability");
  add_common(check);
  auto* solve = app.add_subcommand("solve", "direct follower solve");
  add_common(solve);
  auto* simulate = app.add_subcommand("simulate", "gradient-flow protocol");
  add_common(simulate);
  add_flow(simulate);
  add_perturbation(simulate);
  auto* perturb = app.add_subcommand("perturb", "measurement-error analysis");
  add_common(perturb);
  add_perturbation(perturb);
  auto* rigidity = app.add_subcommand("rigidity", "rigidity spectra and ranks");
  add_common(rigidity);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kBadInput;
  }

  try {
    if (check->parsed()) return cmd_check(opt);
    if (solve->parsed()) return cmd_solve(opt);
    if (simulate->parsed()) return cmd_simulate(opt);
    if (perturb->parsed()) return cmd_perturb(opt);
    if (rigidity->parsed()) return cmd_rigidity(opt);
  } catch (const bearloc::InternalInconsistency& e) {
    std::cerr << "internal inconsistency: " << e.what() << "\n";
    return kInconsistent;
  } catch (const bearloc::RankDisagreement& e) {
    std::cerr << "internal inconsistency: " << e.what() << "\n";
    return kInconsistent;
  } catch (const bearloc::StepTooLarge& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kBadInput;
  } catch (const bearloc::SingularSystem& e) {
    std::cerr << "not localizable: " << e.what() << "\n";
    return kNotLocalizable;
  } catch (const bearloc::SingularPerturbedSystem& e) {
    std::cerr << "not localizable: " << e.what() << "\n";
    return kNotLocalizable;
  } catch (const bearloc::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kBadInput;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kBadInput;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kInconsistent;
  }
  return kBadInput;
}
