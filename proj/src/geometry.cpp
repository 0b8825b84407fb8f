#include "bearloc/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace bearloc {

Eigen::VectorXd bearing(const Eigen::VectorXd& p_i, const Eigen::VectorXd& p_j,
                        double tau_pos) {
  Eigen::VectorXd e = p_j - p_i;
  const double len = e.norm();
  if (len <= tau_pos) {
    throw CollocatedNodes("cannot form a bearing between collocated points");
  }
  return e / len;
}

Eigen::MatrixXd projector(const Eigen::VectorXd& x, double tau_pos) {
  const double len = x.norm();
  if (len <= tau_pos) {
    throw ZeroVector("projector of a (near-)zero vector is undefined");
  }
  Eigen::VectorXd u = x / len;
  return Eigen::MatrixXd::Identity(x.size(), x.size()) - u * u.transpose();
}

double angle_between(const Eigen::VectorXd& g,
                     const Eigen::VectorXd& g_tilde) {
  if (std::abs(g.norm() - 1.0) > 1e-6 || std::abs(g_tilde.norm() - 1.0) > 1e-6) {
    throw NotUnit("angle_between expects unit vectors");
  }
  const double c = std::clamp(g.dot(g_tilde), -1.0, 1.0);
  return std::acos(c);
}

Eigen::VectorXd perturb_bearing(const Eigen::VectorXd& g, double theta,
                                std::mt19937_64& rng) {
  if (theta == 0.0) return g;
  const auto d = g.size();
  std::normal_distribution<double> gauss(0.0, 1.0);
  // Random unit direction orthogonal to g.
  Eigen::VectorXd u(d);
  double norm = 0.0;
  do {
    for (Eigen::Index k = 0; k < d; ++k) u[k] = gauss(rng);
    u -= g.dot(u) * g;
    norm = u.norm();
  } while (norm < 1e-8);
  u /= norm;
  Eigen::VectorXd out = std::cos(theta) * g + std::sin(theta) * u;
  return out / out.norm();
}

Eigen::VectorXd perturb_bearing(const Eigen::VectorXd& g, double theta,
                                std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return perturb_bearing(g, theta, rng);
}

double ResidualMap::max_value() const {
  double m = 0.0;
  for (const auto& r : edges) m = std::max(m, r.value);
  for (const auto& r : anchors) m = std::max(m, r.value);
  return m;
}

namespace {

ResidualMap edge_anchor_residuals(
    const Network& net, const Eigen::VectorXd& estimate,
    const std::function<double(const Edge&, const Eigen::VectorXd&)>&
        edge_value) {
  const int d = net.dimension();
  if (estimate.size() != net.stacked_positions().size()) {
    throw Error("estimate has wrong length");
  }
  ResidualMap out;
  for (const auto& e : net.edges()) {
    Eigen::VectorXd diff = estimate.segment(d * e.head, d) -
                           estimate.segment(d * e.tail, d);
    out.edges.push_back(
        {net.id_of(e.tail), net.id_of(e.head), edge_value(e, diff)});
  }
  for (int i = 0; i < net.anchor_count(); ++i) {
    out.anchors.push_back(
        {net.id_of(i),
         (estimate.segment(d * i, d) - net.position(i)).norm()});
  }
  return out;
}

}  // namespace

ResidualMap nonlinear_residual(const Network& net,
                               const Eigen::VectorXd& estimate) {
  return edge_anchor_residuals(
      net, estimate, [&](const Edge& e, const Eigen::VectorXd& diff) {
        const double len = diff.norm();
        if (len <= net.position_tolerance()) {
          throw CollocatedEstimates(
              "estimated endpoints of edge (" + net.id_of(e.tail) + ", " +
              net.id_of(e.head) + ") coincide");
        }
        Eigen::VectorXd g =
            bearing(net.position(e.tail), net.position(e.head),
                    net.position_tolerance());
        return (diff / len - g).norm();
      });
}

ResidualMap linear_residual(const Network& net,
                            const Eigen::VectorXd& estimate) {
  return edge_anchor_residuals(
      net, estimate, [&](const Edge& e, const Eigen::VectorXd& diff) {
        Eigen::MatrixXd P =
            projector(net.position(e.head) - net.position(e.tail),
                      net.position_tolerance());
        return (P * diff).norm();
      });
}

}  // namespace bearloc
