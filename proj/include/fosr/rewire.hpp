#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "fosr/error.hpp"
#include "fosr/graph.hpp"
#include "fosr/random.hpp"
#include "fosr/spectral.hpp"

namespace fosr {

enum class Selection { Exhaustive, Relaxed };

struct RewireConfig {
  std::size_t iterations = 0;          // k: edges to add
  std::size_t initial_power_iters = 8; // r: deflation steps before the first edge
  std::size_t steps_per_edge = 1;      // deflation steps after each edge
  Selection selection = Selection::Exhaustive;
  std::uint64_t seed = 0;
  bool track_exact_gap = false;
  std::size_t dense_guard = default_dense_guard();
};

struct TrajectoryRecord {
  std::size_t iter = 0;
  Node u = 0;
  Node v = 0;
  std::optional<double> score;
  std::optional<double> rayleigh;
  std::optional<double> gap;
};

struct PhaseTimes {
  double setup_seconds = 0.0;
  double rewire_seconds = 0.0;
  double gap_tracking_seconds = 0.0;
};

struct RewireResult {
  Graph graph;
  std::vector<TrajectoryRecord> trajectory;
  std::optional<double> initial_gap;
  bool truncated = false;  // stopped before k edges because the graph became complete
  PhaseTimes times;
};

namespace detail {

inline void require_pair(const Graph& g, Node u, Node v) {
  if (u >= g.node_count() || v >= g.node_count()) {
    throw Error(ErrorKind::NodeOutOfRange, "pair (" + std::to_string(u) + ", " + std::to_string(v) + ")");
  }
  if (u == v) throw Error(ErrorKind::SelfPair, "node " + std::to_string(u));
}

inline void require_non_edge(const Graph& g, Node u, Node v) {
  require_pair(g, u, v);
  if (g.has_edge(u, v)) {
    throw Error(ErrorKind::EdgeExists, "(" + std::to_string(u) + ", " + std::to_string(v) + ") is an edge");
  }
}

inline std::pair<Node, Node> ordered(Node a, Node b) { return a < b ? std::pair{a, b} : std::pair{b, a}; }

inline double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace detail

/// x_u x_v / sqrt((1 + d_u)(1 + d_v)): the edge score FoSR minimises.
inline double fosr_score(std::span<const double> x, const Graph& g, Node u, Node v) {
  detail::require_pair(g, u, v);
  require_length(x.size(), g.node_count(), "x");
  const double du = static_cast<double>(g.augmented_degree(u));
  const double dv = static_cast<double>(g.augmented_degree(v));
  return x[u] * x[v] / std::sqrt(du * dv);
}

/// First-order change of an A_N eigenvalue `lambda` (eigenvector x) when the
/// non-edge (u, v) is added.
inline double first_order_gap_change(const Graph& g, std::span<const double> x, double lambda, Node u, Node v) {
  detail::require_non_edge(g, u, v);
  require_length(x.size(), g.node_count(), "x");
  const double du = static_cast<double>(g.degree(u));
  const double dv = static_cast<double>(g.degree(v));
  const double cross = 2.0 * x[u] * x[v] / (std::sqrt(1.0 + du) * std::sqrt(1.0 + dv));
  const double shrink_u = 2.0 * lambda * x[u] * x[u] * (std::sqrt(du) / std::sqrt(1.0 + du) - 1.0);
  const double shrink_v = 2.0 * lambda * x[v] * x[v] * (std::sqrt(dv) / std::sqrt(1.0 + dv) - 1.0);
  return cross + shrink_u + shrink_v;
}

struct MatrixEntry {
  Node row = 0;
  Node col = 0;
  double value = 0.0;
};

/// Nonzero entries of A_N(g + uv) - A_N(g), both triangles, sorted by (row, col).
/// Support lies in rows and columns u and v.
inline std::vector<MatrixEntry> delta_normalized_adjacency(const Graph& g, Node u, Node v) {
  detail::require_non_edge(g, u, v);
  require_no_isolated(g);
  std::vector<MatrixEntry> entries;
  auto rescale_row = [&](Node a) {
    const double da = static_cast<double>(g.degree(a));
    const double factor = 1.0 / std::sqrt(1.0 + da) - 1.0 / std::sqrt(da);
    for (Node j : g.neighbors(a)) {
      const double value = factor / std::sqrt(static_cast<double>(g.degree(j)));
      entries.push_back({a, j, value});
      entries.push_back({j, a, value});
    }
  };
  rescale_row(u);
  rescale_row(v);
  const double fresh = 1.0 / (std::sqrt(1.0 + static_cast<double>(g.degree(u))) *
                              std::sqrt(1.0 + static_cast<double>(g.degree(v))));
  entries.push_back({u, v, fresh});
  entries.push_back({v, u, fresh});
  std::sort(entries.begin(), entries.end(), [](const MatrixEntry& a, const MatrixEntry& b) {
    return a.row < b.row || (a.row == b.row && a.col < b.col);
  });
  return entries;
}

/// x^T M x for a sparse symmetric entry list.
inline double quadratic_form(std::span<const MatrixEntry> entries, std::span<const double> x) {
  double sum = 0.0;
  for (const MatrixEntry& e : entries) sum += x[e.row] * e.value * x[e.col];
  return sum;
}

namespace detail {

inline std::vector<double> scaled_by_augmented_degree(const Graph& g, std::span<const double> x) {
  std::vector<double> y(g.node_count());
  for (Node i = 0; i < g.node_count(); ++i) y[i] = x[i] / std::sqrt(static_cast<double>(g.augmented_degree(i)));
  return y;
}

}  // namespace detail

/// Scans every non-edge and returns the one with the smallest score.
/// Ties go to the lexicographically smallest (u, v).
inline std::pair<Node, Node> select_edge_exhaustive(const Graph& g, std::span<const double> x) {
  require_length(x.size(), g.node_count(), "x");
  if (g.is_complete()) throw Error(ErrorKind::GraphComplete, "no non-edge left");
  const std::size_t n = g.node_count();
  const std::vector<double> y = detail::scaled_by_augmented_degree(g, x);
  std::optional<std::pair<Node, Node>> best;
  double best_score = 0.0;
  for (Node u = 0; u + 1 < n; ++u) {
    const auto nbrs = g.neighbors(u);
    auto next_nbr = std::upper_bound(nbrs.begin(), nbrs.end(), u);
    const double yu = y[u];
    for (Node v = u + 1; v < n; ++v) {
      if (next_nbr != nbrs.end() && *next_nbr == v) {
        ++next_nbr;
        continue;
      }
      const double score = yu * y[v];
      if (!best || score < best_score) {
        best_score = score;
        best = std::pair{u, v};
      }
    }
  }
  return *best;
}

/// O(n + m) approximation of the exhaustive rule: anchor i at the smallest
/// y_i = x_i / sqrt(1 + d_i), then pick j among the non-neighbours of i with
/// the largest y_j (if y_i <= 0) or the smallest y_j (if y_i > 0).
inline std::pair<Node, Node> select_edge_relaxed(const Graph& g, std::span<const double> x) {
  require_length(x.size(), g.node_count(), "x");
  if (g.is_complete()) throw Error(ErrorKind::GraphComplete, "no non-edge left");
  const std::size_t n = g.node_count();
  const std::vector<double> y = detail::scaled_by_augmented_degree(g, x);

  auto has_non_neighbor = [&](Node i) { return g.degree(i) + 1 < n; };
  std::optional<Node> anchor;
  for (Node i = 0; i < n; ++i) {
    if (!anchor || y[i] < y[*anchor]) anchor = i;
  }
  if (!has_non_neighbor(*anchor)) {
    // Rare: the minimiser is adjacent to everything. Fall back through the
    // nodes in ascending (y, index) order.
    std::vector<Node> order(n);
    std::iota(order.begin(), order.end(), Node{0});
    std::stable_sort(order.begin(), order.end(), [&](Node a, Node b) { return y[a] < y[b]; });
    anchor = *std::find_if(order.begin(), order.end(), has_non_neighbor);
  }
  const Node i = *anchor;
  const bool want_max = y[i] <= 0.0;

  const auto nbrs = g.neighbors(i);
  auto next_nbr = nbrs.begin();
  std::optional<Node> partner;
  for (Node k = 0; k < n; ++k) {
    if (next_nbr != nbrs.end() && *next_nbr == k) {
      ++next_nbr;
      continue;
    }
    if (k == i) continue;
    if (!partner || (want_max ? y[k] > y[*partner] : y[k] < y[*partner])) partner = k;
  }
  return detail::ordered(i, *partner);
}

inline std::pair<Node, Node> select_edge(const Graph& g, std::span<const double> x, Selection selection) {
  return selection == Selection::Exhaustive ? select_edge_exhaustive(g, x) : select_edge_relaxed(g, x);
}

/// First-order spectral rewiring: alternate between adding the edge with the
/// smallest FoSR score and refreshing the eigenvector estimate by deflated
/// power iteration on the updated graph. Edges are only ever added.
inline RewireResult fosr_rewire(const Graph& input, const RewireConfig& cfg) {
  require_no_isolated(input);
  if (cfg.initial_power_iters == 0) throw Error(ErrorKind::InvalidParameter, "initial_power_iters must be >= 1");
  if (cfg.track_exact_gap) require_dense_size(input, cfg.dense_guard);

  RewireResult result{input, {}, std::nullopt, false, {}};
  Graph& g = result.graph;
  if (cfg.track_exact_gap) result.initial_gap = spectral_gap_exact(g, cfg.dense_guard);

  const auto setup_start = std::chrono::steady_clock::now();
  std::vector<double> x = random_deflated_start(g, cfg.seed);
  for (std::size_t r = 0; r < cfg.initial_power_iters; ++r) x = deflate_and_normalize(g, x);
  result.times.setup_seconds = detail::seconds_since(setup_start);

  const auto rewire_start = std::chrono::steady_clock::now();
  double tracking = 0.0;
  for (std::size_t iter = 1; iter <= cfg.iterations; ++iter) {
    if (g.is_complete()) {
      result.truncated = true;
      break;
    }
    const auto [u, v] = select_edge(g, x, cfg.selection);
    TrajectoryRecord rec;
    rec.iter = iter;
    rec.u = u;
    rec.v = v;
    rec.score = fosr_score(x, g, u, v);
    g.add_edge(u, v, RelationTag::Added);
    for (std::size_t s = 0; s < cfg.steps_per_edge; ++s) {
      try {
        x = deflate_and_normalize(g, x);
      } catch (const Error& e) {
        // The estimate landed on sqrt(d) of the new graph; restart it.
        if (e.kind() != ErrorKind::DegenerateVector) throw;
        x = random_deflated_start(g, cfg.seed + iter);
      }
    }
    rec.rayleigh = dot(x, normalized_adjacency_apply(g, x));
    if (cfg.track_exact_gap) {
      const auto t0 = std::chrono::steady_clock::now();
      rec.gap = spectral_gap_exact(g, cfg.dense_guard);
      tracking += detail::seconds_since(t0);
    }
    result.trajectory.push_back(rec);
  }
  result.times.gap_tracking_seconds = tracking;
  result.times.rewire_seconds = detail::seconds_since(rewire_start) - tracking;
  return result;
}

namespace detail {

inline double gap_of_dense_adjacency(const Eigen::MatrixXd& normalized_adjacency) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(normalized_adjacency, Eigen::EigenvaluesOnly);
  const Eigen::Index n = normalized_adjacency.rows();
  return std::max(0.0, 1.0 - solver.eigenvalues()(n - 2));
}

/// Writes the rows/columns of u and v of A_N for the given degree vector.
inline void refresh_rows(const Graph& g, Eigen::MatrixXd& an, std::span<const double> deg, Node a) {
  const auto ia = static_cast<Eigen::Index>(a);
  for (Node j : g.neighbors(a)) {
    const double w = 1.0 / std::sqrt(deg[a] * deg[j]);
    an(ia, static_cast<Eigen::Index>(j)) = w;
    an(static_cast<Eigen::Index>(j), ia) = w;
  }
}

}  // namespace detail

/// Baseline that adds, k times, the non-edge whose addition maximises the
/// exact spectral gap (dense eigensolve per candidate). Ties lexicographic.
inline RewireResult greedy_exact_rewire(const Graph& input, std::size_t k,
                                        std::size_t dense_guard = default_dense_guard()) {
  require_dense_size(input, dense_guard);
  require_no_isolated(input);
  RewireResult result{input, {}, std::nullopt, false, {}};
  Graph& g = result.graph;
  const std::size_t n = g.node_count();
  const auto start = std::chrono::steady_clock::now();
  double current_gap = spectral_gap_exact(g, dense_guard);
  result.initial_gap = current_gap;

  for (std::size_t iter = 1; iter <= k; ++iter) {
    if (g.is_complete()) {
      result.truncated = true;
      break;
    }
    const Eigen::MatrixXd base = dense_normalized_adjacency(g);
    std::vector<double> deg = g.degrees();
    Eigen::MatrixXd trial(base.rows(), base.cols());
    std::optional<std::pair<Node, Node>> best;
    double best_gap = 0.0;
    for (Node u = 0; u + 1 < n; ++u) {
      for (Node v = u + 1; v < n; ++v) {
        if (g.has_edge(u, v)) continue;
        trial = base;
        deg[u] += 1.0;
        deg[v] += 1.0;
        detail::refresh_rows(g, trial, deg, u);
        detail::refresh_rows(g, trial, deg, v);
        const double w = 1.0 / std::sqrt(deg[u] * deg[v]);
        trial(static_cast<Eigen::Index>(u), static_cast<Eigen::Index>(v)) = w;
        trial(static_cast<Eigen::Index>(v), static_cast<Eigen::Index>(u)) = w;
        deg[u] -= 1.0;
        deg[v] -= 1.0;
        const double gap = detail::gap_of_dense_adjacency(trial);
        if (!best || gap > best_gap) {
          best_gap = gap;
          best = std::pair{u, v};
        }
      }
    }
    g.add_edge(best->first, best->second, RelationTag::Added);
    TrajectoryRecord rec;
    rec.iter = iter;
    rec.u = best->first;
    rec.v = best->second;
    rec.score = best_gap - current_gap;
    rec.gap = best_gap;
    current_gap = best_gap;
    result.trajectory.push_back(rec);
  }
  result.times.rewire_seconds = detail::seconds_since(start);
  return result;
}

/// Control baseline: k distinct non-edges drawn uniformly at random.
inline RewireResult random_rewire(const Graph& input, std::size_t k, std::uint64_t seed,
                                  bool track_exact_gap = false,
                                  std::size_t dense_guard = default_dense_guard()) {
  if (track_exact_gap) {
    require_dense_size(input, dense_guard);
    require_no_isolated(input);
  }
  RewireResult result{input, {}, std::nullopt, false, {}};
  Graph& g = result.graph;
  if (track_exact_gap) result.initial_gap = spectral_gap_exact(g, dense_guard);
  const std::size_t n = g.node_count();
  const std::uint64_t total_pairs = static_cast<std::uint64_t>(n) * (n > 0 ? n - 1 : 0) / 2;
  PortableRng rng(seed);
  const auto start = std::chrono::steady_clock::now();

  for (std::size_t iter = 1; iter <= k; ++iter) {
    const std::uint64_t free_pairs = total_pairs - g.edge_count();
    if (free_pairs == 0) {
      result.truncated = true;
      break;
    }
    Node u = 0;
    Node v = 0;
    if (free_pairs * 4 >= total_pairs) {
      // Rejection sampling while at least a quarter of all pairs are free.
      do {
        u = static_cast<Node>(rng.below(n));
        v = static_cast<Node>(rng.below(n - 1));
        if (v >= u) ++v;
      } while (g.has_edge(u, v));
    } else {
      std::uint64_t target = rng.below(free_pairs);
      bool found = false;
      for (Node a = 0; a + 1 < n && !found; ++a) {
        for (Node b = a + 1; b < n; ++b) {
          if (g.has_edge(a, b)) continue;
          if (target-- == 0) {
            u = a;
            v = b;
            found = true;
            break;
          }
        }
      }
    }
    std::tie(u, v) = detail::ordered(u, v);
    g.add_edge(u, v, RelationTag::Added);
    TrajectoryRecord rec;
    rec.iter = iter;
    rec.u = u;
    rec.v = v;
    if (track_exact_gap) rec.gap = spectral_gap_exact(g, dense_guard);
    result.trajectory.push_back(rec);
  }
  result.times.rewire_seconds = detail::seconds_since(start);
  return result;
}

}  // namespace fosr
