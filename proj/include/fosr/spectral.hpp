#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "fosr/error.hpp"
#include "fosr/graph.hpp"
#include "fosr/random.hpp"

namespace fosr {

inline constexpr std::size_t kDefaultDenseGuard = 2000;
inline constexpr std::size_t kDefaultCheegerGuard = 20;
inline constexpr double kDegenerateNorm = 1e-14;

/// Largest n for which dense O(n^3) eigensolves are allowed. Reads
/// SPECTRAL_REWIRE_DENSE_GUARD when set to a positive integer.
inline std::size_t default_dense_guard() {
  if (const char* env = std::getenv("SPECTRAL_REWIRE_DENSE_GUARD")) {
    char* end = nullptr;
    const unsigned long long value = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0' && value > 0) return static_cast<std::size_t>(value);
  }
  return kDefaultDenseGuard;
}

inline void require_no_isolated(const Graph& g) {
  if (const Node v = g.first_isolated_node(); v < g.node_count()) {
    throw Error(ErrorKind::IsolatedNode, "node " + std::to_string(v) + " has degree 0");
  }
}

inline void require_dense_size(const Graph& g, std::size_t guard) {
  if (g.node_count() > guard) {
    throw Error(ErrorKind::GraphTooLarge, "n = " + std::to_string(g.node_count()) +
                                              " exceeds dense limit " + std::to_string(guard));
  }
}

inline void require_length(std::size_t actual, std::size_t expected, const char* what) {
  if (actual != expected) {
    throw Error(ErrorKind::DimensionMismatch, std::string(what) + " has length " + std::to_string(actual) +
                                                  ", expected " + std::to_string(expected));
  }
}

inline std::vector<double> sqrt_degrees(const Graph& g) {
  std::vector<double> s(g.node_count());
  for (Node v = 0; v < g.node_count(); ++v) s[v] = std::sqrt(static_cast<double>(g.degree(v)));
  return s;
}

inline double dot(std::span<const double> a, std::span<const double> b) {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += a[i] * b[i];
  return sum;
}

inline double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

// ---------------------------------------------------------------------------
// Sparse kernels
// ---------------------------------------------------------------------------

/// y = D^{-1/2} A D^{-1/2} x in one pass over the adjacency lists.
inline void normalized_adjacency_apply(const Graph& g, std::span<const double> x, std::span<double> y) {
  require_no_isolated(g);
  require_length(x.size(), g.node_count(), "x");
  require_length(y.size(), g.node_count(), "y");
  const std::size_t n = g.node_count();
  std::vector<double> scaled(n);
  std::vector<double> inv_sqrt(n);
  for (Node v = 0; v < n; ++v) {
    inv_sqrt[v] = 1.0 / std::sqrt(static_cast<double>(g.degree(v)));
    scaled[v] = x[v] * inv_sqrt[v];
  }
  for (Node i = 0; i < n; ++i) {
    double sum = 0.0;
    for (Node j : g.neighbors(i)) sum += scaled[j];
    y[i] = sum * inv_sqrt[i];
  }
}

inline std::vector<double> normalized_adjacency_apply(const Graph& g, std::span<const double> x) {
  std::vector<double> y(g.node_count());
  normalized_adjacency_apply(g, x, y);
  return y;
}

/// A_N x with the sqrt(d) component of x removed: the deflated operator.
/// Since A_N sqrt(d) = sqrt(d) and ||sqrt(d)||^2 = 2m this is orthogonal to sqrt(d).
inline std::vector<double> deflated_apply(const Graph& g, std::span<const double> x) {
  std::vector<double> y = normalized_adjacency_apply(g, x);
  const std::vector<double> s = sqrt_degrees(g);
  const double coeff = dot(x, s) / (2.0 * static_cast<double>(g.edge_count()));
  for (std::size_t i = 0; i < y.size(); ++i) y[i] -= coeff * s[i];
  return y;
}

/// One deflated power step followed by normalisation.
inline std::vector<double> deflate_and_normalize(const Graph& g, std::span<const double> x) {
  std::vector<double> y = deflated_apply(g, x);
  const double len = norm2(y);
  if (!(len >= kDegenerateNorm)) {
    throw Error(ErrorKind::DegenerateVector, "deflated vector has norm " + std::to_string(len));
  }
  for (double& value : y) value /= len;
  return y;
}

struct SpectralEstimate {
  std::vector<double> x;
  double rayleigh = 0.0;
  double residual = 0.0;
  std::size_t iterations = 0;
};

/// Rayleigh value and deflated residual for a unit vector x.
inline SpectralEstimate make_estimate(const Graph& g, std::vector<double> x, std::size_t iterations) {
  SpectralEstimate est;
  const std::vector<double> ax = normalized_adjacency_apply(g, x);
  est.rayleigh = dot(x, ax);
  std::vector<double> y = deflated_apply(g, x);
  for (std::size_t i = 0; i < y.size(); ++i) y[i] -= est.rayleigh * x[i];
  est.residual = norm2(y);
  est.x = std::move(x);
  est.iterations = iterations;
  return est;
}

/// Standard-normal start with the sqrt(d) direction projected out, unit norm.
inline std::vector<double> random_deflated_start(const Graph& g, std::uint64_t seed) {
  PortableRng rng(seed);
  std::vector<double> x = rng.normal_vector(g.node_count());
  const std::vector<double> s = sqrt_degrees(g);
  const double coeff = dot(x, s) / (2.0 * static_cast<double>(g.edge_count()));
  for (std::size_t i = 0; i < x.size(); ++i) x[i] -= coeff * s[i];
  const double len = norm2(x);
  if (!(len >= kDegenerateNorm)) throw Error(ErrorKind::DegenerateVector, "random start collapsed");
  for (double& value : x) value /= len;
  return x;
}

namespace detail {

inline std::vector<double> power_steps(const Graph& g, std::vector<double> x, std::size_t iters) {
  for (std::size_t k = 0; k < iters; ++k) x = deflate_and_normalize(g, x);
  return x;
}

}  // namespace detail

/// Deflated power iteration towards the second eigenvector of A_N, starting
/// from `init`. If the iteration collapses, one restart from a seeded random
/// vector is attempted before DegenerateVector propagates.
inline SpectralEstimate second_eigen_power(const Graph& g, std::size_t iters, std::span<const double> init,
                                           std::uint64_t reseed = 0) {
  require_no_isolated(g);
  require_length(init.size(), g.node_count(), "init");
  if (iters == 0) throw Error(ErrorKind::InvalidParameter, "iters must be >= 1");
  std::vector<double> x;
  try {
    x = detail::power_steps(g, std::vector<double>(init.begin(), init.end()), iters);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::DegenerateVector) throw;
    x = detail::power_steps(g, random_deflated_start(g, reseed), iters);
  }
  return make_estimate(g, std::move(x), iters);
}

inline SpectralEstimate second_eigen_power(const Graph& g, std::size_t iters, std::uint64_t seed) {
  require_no_isolated(g);
  const std::vector<double> x0 = random_deflated_start(g, seed);
  return second_eigen_power(g, iters, x0, seed + 1);
}

// ---------------------------------------------------------------------------
// Dense routes
// ---------------------------------------------------------------------------

inline Eigen::MatrixXd dense_adjacency(const Graph& g) {
  const auto n = static_cast<Eigen::Index>(g.node_count());
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (const Edge& e : g.edges()) {
    a(static_cast<Eigen::Index>(e.u), static_cast<Eigen::Index>(e.v)) = 1.0;
    a(static_cast<Eigen::Index>(e.v), static_cast<Eigen::Index>(e.u)) = 1.0;
  }
  return a;
}

inline Eigen::MatrixXd dense_normalized_adjacency(const Graph& g) {
  require_no_isolated(g);
  const auto n = static_cast<Eigen::Index>(g.node_count());
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (const Edge& e : g.edges()) {
    const double w = 1.0 / std::sqrt(static_cast<double>(g.degree(e.u)) * static_cast<double>(g.degree(e.v)));
    a(static_cast<Eigen::Index>(e.u), static_cast<Eigen::Index>(e.v)) = w;
    a(static_cast<Eigen::Index>(e.v), static_cast<Eigen::Index>(e.u)) = w;
  }
  return a;
}

inline Eigen::MatrixXd dense_normalized_laplacian(const Graph& g) {
  const Eigen::MatrixXd a = dense_normalized_adjacency(g);
  return Eigen::MatrixXd::Identity(a.rows(), a.cols()) - a;
}

/// All eigenvalues of the normalized Laplacian, ascending.
inline Eigen::VectorXd laplacian_spectrum(const Graph& g, std::size_t guard = default_dense_guard()) {
  require_dense_size(g, guard);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(dense_normalized_laplacian(g),
                                                        Eigen::EigenvaluesOnly);
  return solver.eigenvalues();
}

/// lambda_2 of the normalized Laplacian from a dense solve; 0 for disconnected graphs.
inline double spectral_gap_exact(const Graph& g, std::size_t guard = default_dense_guard()) {
  require_no_isolated(g);
  require_dense_size(g, guard);
  if (g.node_count() < 2) return 0.0;
  const Eigen::VectorXd spectrum = laplacian_spectrum(g, guard);
  return std::max(0.0, spectrum(1));
}

struct Eigenpair {
  double value = 0.0;
  Eigen::VectorXd vector;
};

/// Eigenpair of A_N with the second-largest eigenvalue (unit vector).
inline Eigenpair second_adjacency_eigenpair(const Graph& g, std::size_t guard = default_dense_guard()) {
  require_dense_size(g, guard);
  if (g.node_count() < 2) throw Error(ErrorKind::InvalidParameter, "need at least two nodes");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(dense_normalized_adjacency(g));
  const auto idx = static_cast<Eigen::Index>(g.node_count()) - 2;
  return {solver.eigenvalues()(idx), solver.eigenvectors().col(idx)};
}

// ---------------------------------------------------------------------------
// Energies and the Cheeger constant
// ---------------------------------------------------------------------------

/// tr(X^T L X), accumulated once per undirected edge.
inline double dirichlet_energy(const Graph& g, const Eigen::MatrixXd& features) {
  require_no_isolated(g);
  require_length(static_cast<std::size_t>(features.rows()), g.node_count(), "feature rows");
  if (features.cols() < 1) throw Error(ErrorKind::DimensionMismatch, "feature matrix has no columns");
  const std::vector<double> s = sqrt_degrees(g);
  double energy = 0.0;
  for (const Edge& e : g.edges()) {
    const auto u = static_cast<Eigen::Index>(e.u);
    const auto v = static_cast<Eigen::Index>(e.v);
    energy += (features.row(u) / s[e.u] - features.row(v) / s[e.v]).squaredNorm();
  }
  return energy;
}

struct CheegerReport {
  double h = 0.0;
  std::size_t boundary = 0;  // |dS| of the minimising cut
  std::size_t volume = 0;    // min(vol S, vol S^c) of the minimising cut
  std::vector<Node> cut;     // the minimising S; always contains node 0
  double lambda2 = 0.0;
  bool bounds_ok = false;
};

/// Exact Cheeger constant by enumerating the 2^{n-1} subsets that contain
/// node 0 in Gray-code order, so each step updates |dS| and vol S in O(deg).
inline CheegerReport cheeger_bruteforce(const Graph& g, std::size_t max_nodes = kDefaultCheegerGuard) {
  const std::size_t n = g.node_count();
  if (n > max_nodes || n > 62) {
    throw Error(ErrorKind::GraphTooLarge,
                "n = " + std::to_string(n) + " exceeds Cheeger limit " + std::to_string(max_nodes));
  }
  if (n < 2 || !is_connected(g)) throw Error(ErrorKind::DisconnectedGraph, "Cheeger constant needs a connected graph");

  const std::size_t total_volume = 2 * g.edge_count();
  const std::uint64_t full = (std::uint64_t{1} << n) - 1;
  std::uint64_t members = 1;
  std::size_t boundary = g.degree(0);
  std::size_t volume = g.degree(0);

  std::size_t best_boundary = 0;
  std::size_t best_volume = 0;
  std::uint64_t best_mask = 0;
  auto consider = [&] {
    if (members == full) return;
    const std::size_t small = std::min(volume, total_volume - volume);
    if (best_volume == 0 || boundary * best_volume < best_boundary * small) {
      best_boundary = boundary;
      best_volume = small;
      best_mask = members;
    }
  };
  consider();
  const std::uint64_t steps = std::uint64_t{1} << (n - 1);
  for (std::uint64_t i = 1; i < steps; ++i) {
    const Node w = static_cast<Node>(std::countr_zero(i)) + 1;
    const std::uint64_t bit = std::uint64_t{1} << w;
    const bool entering = (members & bit) == 0;
    for (Node y : g.neighbors(w)) {
      const bool inside = (members >> y) & 1U;
      if (entering == inside) {
        --boundary;
      } else {
        ++boundary;
      }
    }
    if (entering) {
      members |= bit;
      volume += g.degree(w);
    } else {
      members &= ~bit;
      volume -= g.degree(w);
    }
    consider();
  }

  CheegerReport report;
  report.boundary = best_boundary;
  report.volume = best_volume;
  report.h = static_cast<double>(best_boundary) / static_cast<double>(best_volume);
  for (Node v = 0; v < n; ++v) {
    if ((best_mask >> v) & 1U) report.cut.push_back(v);
  }
  report.lambda2 = spectral_gap_exact(g);
  constexpr double slack = 1e-12;
  report.bounds_ok =
      report.lambda2 / 2.0 <= report.h + slack && report.h <= std::sqrt(2.0 * report.lambda2) + slack;
  return report;
}

/// Rayleigh quotient x^T L x / x^T x for x orthogonal to sqrt(d). Its value
/// bounds lambda_2(L) from above.
inline double variational_gap_check(const Graph& g, std::span<const double> x) {
  require_no_isolated(g);
  require_length(x.size(), g.node_count(), "x");
  const double xx = dot(x, x);
  if (xx == 0.0) throw Error(ErrorKind::ZeroVector, "x is zero");
  const std::vector<double> s = sqrt_degrees(g);
  if (std::abs(dot(x, s)) > 1e-10 * std::sqrt(xx) * norm2(s)) {
    throw Error(ErrorKind::NotDeflated, "x has a component along sqrt(d)");
  }
  const std::vector<double> ax = normalized_adjacency_apply(g, x);
  return (xx - dot(x, ax)) / xx;
}

}  // namespace fosr
