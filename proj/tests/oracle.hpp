#pragma once

// Test-only reference computations. Nothing here calls into the sparse
// kernels or the Eigen-based solvers of the library: matrices are built from
// the raw edge list and diagonalised with cyclic Jacobi rotations.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <utility>
#include <vector>

#include "fosr/generators.hpp"
#include "fosr/graph.hpp"
#include "fosr/random.hpp"

namespace oracle {

using Matrix = std::vector<std::vector<double>>;

inline Matrix zeros(std::size_t n) { return Matrix(n, std::vector<double>(n, 0.0)); }

inline std::vector<std::size_t> edge_degrees(const fosr::Graph& g) {
  std::vector<std::size_t> d(g.node_count(), 0);
  for (const fosr::Edge& e : g.edges()) {
    ++d[e.u];
    ++d[e.v];
  }
  return d;
}

inline Matrix normalized_adjacency(const fosr::Graph& g) {
  const auto d = edge_degrees(g);
  Matrix a = zeros(g.node_count());
  for (const fosr::Edge& e : g.edges()) {
    const double w = 1.0 / std::sqrt(static_cast<double>(d[e.u] * d[e.v]));
    a[e.u][e.v] = w;
    a[e.v][e.u] = w;
  }
  return a;
}

inline Matrix laplacian(const fosr::Graph& g) {
  Matrix l = normalized_adjacency(g);
  for (std::size_t i = 0; i < l.size(); ++i) {
    for (std::size_t j = 0; j < l.size(); ++j) l[i][j] = (i == j ? 1.0 : 0.0) - l[i][j];
  }
  return l;
}

inline std::vector<double> matvec(const Matrix& m, const std::vector<double>& x) {
  std::vector<double> y(m.size(), 0.0);
  for (std::size_t i = 0; i < m.size(); ++i) {
    for (std::size_t j = 0; j < x.size(); ++j) y[i] += m[i][j] * x[j];
  }
  return y;
}

struct Eigh {
  std::vector<double> values;          // ascending
  std::vector<std::vector<double>> vectors;  // vectors[k] pairs with values[k]
};

/// Cyclic Jacobi eigendecomposition of a symmetric matrix.
inline Eigh jacobi(Matrix a) {
  const std::size_t n = a.size();
  Matrix v = zeros(n);
  for (std::size_t i = 0; i < n; ++i) v[i][i] = 1.0;
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) off += a[p][q] * a[p][q];
    }
    if (off < 1e-30) break;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        if (std::abs(a[p][q]) < 1e-300) continue;
        const double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a[k][p];
          const double akq = a[k][q];
          a[k][p] = c * akp - s * akq;
          a[k][q] = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a[p][k];
          const double aqk = a[q][k];
          a[p][k] = c * apk - s * aqk;
          a[q][k] = s * apk + c * aqk;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v[k][p];
          const double vkq = v[k][q];
          v[k][p] = c * vkp - s * vkq;
          v[k][q] = s * vkp + c * vkq;
        }
      }
    }
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return a[i][i] < a[j][j]; });
  Eigh out;
  for (std::size_t k : order) {
    out.values.push_back(a[k][k]);
    std::vector<double> col(n);
    for (std::size_t i = 0; i < n; ++i) col[i] = v[i][k];
    out.vectors.push_back(std::move(col));
  }
  return out;
}

/// lambda_2 of the normalized Laplacian.
inline double gap(const fosr::Graph& g) { return jacobi(laplacian(g)).values.at(1); }

/// min |dS| / min(vol S, vol S^c) by recomputing every subset from scratch.
inline double cheeger(const fosr::Graph& g) {
  const std::size_t n = g.node_count();
  const auto d = edge_degrees(g);
  std::size_t total = 0;
  for (std::size_t x : d) total += x;
  double best = 1e300;
  for (std::uint64_t mask = 1; mask + 1 < (std::uint64_t{1} << n); ++mask) {
    std::size_t boundary = 0;
    std::size_t vol = 0;
    for (std::size_t v = 0; v < n; ++v) {
      if ((mask >> v) & 1U) vol += d[v];
    }
    for (const fosr::Edge& e : g.edges()) {
      if (((mask >> e.u) & 1U) != ((mask >> e.v) & 1U)) ++boundary;
    }
    best = std::min(best, static_cast<double>(boundary) / static_cast<double>(std::min(vol, total - vol)));
  }
  return best;
}

inline bool connected(const fosr::Graph& g) {
  std::vector<int> seen(g.node_count(), 0);
  std::vector<std::size_t> stack{0};
  seen[0] = 1;
  while (!stack.empty()) {
    const std::size_t v = stack.back();
    stack.pop_back();
    for (const fosr::Edge& e : g.edges()) {
      std::size_t w = g.node_count();
      if (e.u == v) w = e.v;
      if (e.v == v) w = e.u;
      if (w < g.node_count() && !seen[w]) {
        seen[w] = 1;
        stack.push_back(w);
      }
    }
  }
  return std::all_of(seen.begin(), seen.end(), [](int s) { return s == 1; });
}

/// Random connected graph: a random spanning tree plus G(n, p) extras.
inline fosr::Graph random_connected(std::size_t n, double p, std::uint64_t seed) {
  fosr::PortableRng rng(seed);
  fosr::Graph g(n);
  for (std::size_t v = 1; v < n; ++v) g.add_edge(v, rng.below(v));
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t v = u + 1; v < n; ++v) {
      if (!g.has_edge(u, v) && rng.uniform() < p) g.add_edge(u, v);
    }
  }
  return g;
}

}  // namespace oracle
