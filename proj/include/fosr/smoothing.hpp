#pragma once

#include <cmath>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "fosr/error.hpp"
#include "fosr/graph.hpp"
#include "fosr/spectral.hpp"

namespace fosr {

/// Weights of a linear relational GCN layer
///   phi(X) = X Theta + sum_r D^{-1/2} A_r D^{-1/2} X Theta_r,
/// with D the degree matrix of the whole graph.
struct LinearLayerSpec {
  Eigen::MatrixXd theta;
  std::map<RelationTag, Eigen::MatrixXd> theta_r;
  std::optional<double> alpha;

  /// Theta = (1 - alpha) I and Theta_1 = Theta_2 = alpha I, which makes
  /// phi(X) = (I - alpha L) X.
  static LinearLayerSpec alpha_construction(double alpha, Eigen::Index width) {
    if (!(alpha >= 0.0 && alpha <= 1.0)) {
      throw Error(ErrorKind::InvalidParameter, "alpha must lie in [0, 1], got " + std::to_string(alpha));
    }
    const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(width, width);
    LinearLayerSpec spec;
    spec.theta = (1.0 - alpha) * eye;
    spec.theta_r[RelationTag::Original] = alpha * eye;
    spec.theta_r[RelationTag::Added] = alpha * eye;
    spec.alpha = alpha;
    return spec;
  }
};

inline Eigen::MatrixXd rgcn_linear_apply(const Graph& g2, const Eigen::MatrixXd& features,
                                         const LinearLayerSpec& spec) {
  require_no_isolated(g2);
  require_length(static_cast<std::size_t>(features.rows()), g2.node_count(), "feature rows");
  const Eigen::Index p = features.cols();
  auto check_square = [p](const Eigen::MatrixXd& m, const char* name) {
    if (m.rows() != p || m.cols() != p) {
      throw Error(ErrorKind::DimensionMismatch, std::string(name) + " must be " + std::to_string(p) + "x" +
                                                    std::to_string(p));
    }
  };
  check_square(spec.theta, "theta");
  for (const auto& [tag, weight] : spec.theta_r) check_square(weight, "theta_r");

  const std::vector<double> s = sqrt_degrees(g2);
  std::map<RelationTag, Eigen::MatrixXd> propagated;
  for (const auto& [tag, weight] : spec.theta_r) {
    propagated.emplace(tag, Eigen::MatrixXd::Zero(features.rows(), p));
  }
  for (const Edge& e : g2.edges()) {
    auto it = propagated.find(e.tag);
    if (it == propagated.end()) {
      throw Error(ErrorKind::UnknownRelation,
                  "no weight for relation " + std::to_string(static_cast<int>(e.tag)));
    }
    const auto u = static_cast<Eigen::Index>(e.u);
    const auto v = static_cast<Eigen::Index>(e.v);
    const double w = 1.0 / (s[e.u] * s[e.v]);
    it->second.row(u) += w * features.row(v);
    it->second.row(v) += w * features.row(u);
  }
  Eigen::MatrixXd out = features * spec.theta;
  for (const auto& [tag, weight] : spec.theta_r) out += propagated.at(tag) * weight;
  return out;
}

struct SmoothingReport {
  double energy_ratio_sup = 0.0;
  double norm_ratio_sup = 0.0;
  double rate = 0.0;
  double lambda2 = 0.0;
};

/// Rate of smoothing 1 - sqrt(sup E(MX)/E(X) / sup |MX|^2/|X|^2) of the linear
/// map X -> M X. Both suprema are extremal eigenvalues: the numerator is
/// computed on the complement of ker L in L's eigenbasis, which is only
/// finite when M maps ker L into ker L.
inline SmoothingReport rate_of_smoothing(const Graph& g2, const Eigen::MatrixXd& m,
                                         std::size_t guard = default_dense_guard()) {
  require_dense_size(g2, guard);
  require_no_isolated(g2);
  const auto n = static_cast<Eigen::Index>(g2.node_count());
  if (m.rows() != n || m.cols() != n) throw Error(ErrorKind::DimensionMismatch, "M must be n x n");

  const Eigen::MatrixXd lap = dense_normalized_laplacian(g2);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(lap);
  const Eigen::VectorXd& values = eig.eigenvalues();
  const Eigen::MatrixXd& basis = eig.eigenvectors();

  constexpr double kernel_tol = 1e-10;
  Eigen::Index kernel_dim = 0;
  while (kernel_dim < n && values(kernel_dim) < kernel_tol) ++kernel_dim;

  SmoothingReport report;
  report.lambda2 = n >= 2 ? std::max(0.0, values(1)) : 0.0;

  const Eigen::MatrixXd mtm = m.transpose() * m;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> gain(mtm, Eigen::EigenvaluesOnly);
  report.norm_ratio_sup = std::max(0.0, gain.eigenvalues()(n - 1));

  const Eigen::MatrixXd kernel = basis.leftCols(kernel_dim);
  const double leak = (lap * m * kernel).norm();
  if (leak > 1e-8 * std::max(1.0, m.norm())) {
    throw Error(ErrorKind::EnergyBlowup, "M moves ker L out of ker L (leak " + std::to_string(leak) + ")");
  }
  const Eigen::Index rest = n - kernel_dim;
  if (rest == 0) {
    report.energy_ratio_sup = 0.0;
  } else {
    const Eigen::MatrixXd range = basis.rightCols(rest);
    const Eigen::ArrayXd inv_sqrt = values.tail(rest).array().rsqrt();
    // Energy pencil (U^T M^T L M U, Sigma) whitened by Sigma^{-1/2}.
    Eigen::MatrixXd pencil = range.transpose() * m.transpose() * lap * m * range;
    pencil = inv_sqrt.matrix().asDiagonal() * pencil * inv_sqrt.matrix().asDiagonal();
    pencil = 0.5 * (pencil + pencil.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> energy(pencil, Eigen::EigenvaluesOnly);
    report.energy_ratio_sup = std::max(0.0, energy.eigenvalues()(rest - 1));
  }
  if (report.norm_ratio_sup == 0.0) {
    throw Error(ErrorKind::InvalidParameter, "M is the zero map");
  }
  report.rate = 1.0 - std::sqrt(report.energy_ratio_sup / report.norm_ratio_sup);
  return report;
}

struct AlphaSmoothingCheck {
  SmoothingReport report;
  double alpha = 0.0;
  double expected_rate = 0.0;  // alpha * lambda_2(L(G2))
  bool pass = false;
  Graph rewired;
};

/// Builds G2 = G1 plus `added` (tagged Added), realises I - alpha L through
/// the relational layer with the alpha construction, and checks that its rate
/// of smoothing equals alpha * lambda_2(L(G2)).
inline AlphaSmoothingCheck verify_alpha_smoothing(const Graph& g1, std::span<const std::pair<Node, Node>> added,
                                                  double alpha, double tolerance = 1e-8) {
  Graph g2 = g1;
  for (const auto& [u, v] : added) g2.add_edge(u, v, RelationTag::Added);
  if (!is_connected(g2)) throw Error(ErrorKind::DisconnectedGraph, "rewired graph is disconnected");
  const auto n = static_cast<Eigen::Index>(g2.node_count());
  const LinearLayerSpec spec = LinearLayerSpec::alpha_construction(alpha, n);
  // Applying the layer to the identity yields its matrix.
  const Eigen::MatrixXd m = rgcn_linear_apply(g2, Eigen::MatrixXd::Identity(n, n), spec);

  AlphaSmoothingCheck check;
  check.report = rate_of_smoothing(g2, m);
  check.alpha = alpha;
  check.expected_rate = alpha * check.report.lambda2;
  check.pass = std::abs(check.report.rate - check.expected_rate) <= tolerance;
  check.rewired = std::move(g2);
  return check;
}

}  // namespace fosr
