#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "fosr/error.hpp"
#include "fosr/graph.hpp"
#include "fosr/random.hpp"

namespace fosr {

namespace detail {

inline void require_at_least(std::size_t value, std::size_t minimum, const char* name) {
  if (value < minimum) {
    throw Error(ErrorKind::InvalidParameter,
                std::string(name) + " must be >= " + std::to_string(minimum) + ", got " + std::to_string(value));
  }
}

inline void add_clique(Graph& g, Node first, std::size_t size) {
  for (Node a = first; a < first + size; ++a) {
    for (Node b = a + 1; b < first + size; ++b) g.add_edge(a, b);
  }
}

}  // namespace detail

inline Graph complete(std::size_t n) {
  detail::require_at_least(n, 2, "n");
  Graph g(n);
  detail::add_clique(g, 0, n);
  return g;
}

inline Graph path(std::size_t n) {
  detail::require_at_least(n, 2, "n");
  Graph g(n);
  for (Node v = 0; v + 1 < n; ++v) g.add_edge(v, v + 1);
  return g;
}

inline Graph ring(std::size_t n) {
  detail::require_at_least(n, 3, "n");
  Graph g = path(n);
  g.add_edge(0, n - 1);
  return g;
}

/// Hub 0 joined to `leaves` leaf nodes.
inline Graph star(std::size_t leaves) {
  detail::require_at_least(leaves, 1, "leaves");
  Graph g(leaves + 1);
  for (Node v = 1; v <= leaves; ++v) g.add_edge(0, v);
  return g;
}

/// Two K_c cliques joined by a path of `path_len` edges between their first
/// nodes. Layout: clique A = [0, c), path interior = [c, c + l - 1),
/// clique B = [c + l - 1, 2c + l - 1).
inline Graph dumbbell(std::size_t clique_size, std::size_t path_len) {
  detail::require_at_least(clique_size, 2, "clique size");
  detail::require_at_least(path_len, 1, "path length");
  const std::size_t interior = path_len - 1;
  const Node b_first = clique_size + interior;
  Graph g(2 * clique_size + interior);
  detail::add_clique(g, 0, clique_size);
  detail::add_clique(g, b_first, clique_size);
  Node prev = 0;
  for (Node k = 0; k < interior; ++k) {
    g.add_edge(prev, clique_size + k);
    prev = clique_size + k;
  }
  g.add_edge(prev, b_first);
  return g;
}

/// q cliques of size c in a row; the last node of clique i is bridged to the
/// first node of clique i + 1.
inline Graph path_of_cliques(std::size_t num_cliques, std::size_t clique_size) {
  detail::require_at_least(num_cliques, 2, "number of cliques");
  detail::require_at_least(clique_size, 2, "clique size");
  Graph g(num_cliques * clique_size);
  for (std::size_t q = 0; q < num_cliques; ++q) {
    detail::add_clique(g, q * clique_size, clique_size);
    if (q + 1 < num_cliques) g.add_edge(q * clique_size + clique_size - 1, (q + 1) * clique_size);
  }
  return g;
}

/// G(n, p): each pair (u < v), visited in lexicographic order, is kept with
/// probability p.
inline Graph erdos_renyi(std::size_t n, double p, std::uint64_t seed) {
  detail::require_at_least(n, 2, "n");
  if (!(p > 0.0 && p <= 1.0)) throw Error(ErrorKind::InvalidParameter, "p must lie in (0, 1]");
  PortableRng rng(seed);
  Graph g(n);
  for (Node u = 0; u < n; ++u) {
    for (Node v = u + 1; v < n; ++v) {
      if (rng.uniform() < p) g.add_edge(u, v);
    }
  }
  return g;
}

enum class LogBase { Natural, Ten };

/// Edge probability 5 log(n) / n, capped at 1.
inline double er_default_probability(std::size_t n, LogBase base = LogBase::Natural) {
  const double nn = static_cast<double>(n);
  const double logn = base == LogBase::Natural ? std::log(nn) : std::log10(nn);
  return std::min(1.0, 5.0 * logn / nn);
}

inline Graph er_default(std::size_t n, std::uint64_t seed, LogBase base = LogBase::Natural) {
  detail::require_at_least(n, 2, "n");
  return erdos_renyi(n, er_default_probability(n, base), seed);
}

enum class GeneratorKind { Dumbbell, PathOfCliques, ErdosRenyi, Complete, Path, Ring, Star };

inline GeneratorKind parse_generator_kind(std::string_view name) {
  if (name == "dumbbell") return GeneratorKind::Dumbbell;
  if (name == "path-of-cliques" || name == "path_of_cliques") return GeneratorKind::PathOfCliques;
  if (name == "er" || name == "erdos-renyi") return GeneratorKind::ErdosRenyi;
  if (name == "complete") return GeneratorKind::Complete;
  if (name == "path") return GeneratorKind::Path;
  if (name == "ring") return GeneratorKind::Ring;
  if (name == "star") return GeneratorKind::Star;
  throw Error(ErrorKind::InvalidParameter, "unknown generator kind '" + std::string(name) + "'");
}

/// Parameters of one synthetic construction. Fields a kind does not use are ignored.
struct GeneratorSpec {
  GeneratorKind kind = GeneratorKind::Path;
  std::size_t n = 0;             // complete, path, ring, er; leaves for star
  std::size_t clique_size = 0;   // dumbbell, path-of-cliques
  std::size_t path_len = 1;      // dumbbell
  std::size_t num_cliques = 0;   // path-of-cliques
  std::optional<double> p;       // er; defaults to 5 log(n) / n
  LogBase log_base = LogBase::Natural;
  std::uint64_t seed = 0;        // er
};

inline Graph generate(const GeneratorSpec& spec) {
  switch (spec.kind) {
    case GeneratorKind::Dumbbell: return dumbbell(spec.clique_size, spec.path_len);
    case GeneratorKind::PathOfCliques: return path_of_cliques(spec.num_cliques, spec.clique_size);
    case GeneratorKind::ErdosRenyi:
      detail::require_at_least(spec.n, 2, "n");
      return erdos_renyi(spec.n, spec.p.value_or(er_default_probability(spec.n, spec.log_base)), spec.seed);
    case GeneratorKind::Complete: return complete(spec.n);
    case GeneratorKind::Path: return path(spec.n);
    case GeneratorKind::Ring: return ring(spec.n);
    case GeneratorKind::Star: return star(spec.n);
  }
  throw Error(ErrorKind::InvalidParameter, "unknown generator kind");
}

}  // namespace fosr
