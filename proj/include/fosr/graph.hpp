#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <queue>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "fosr/error.hpp"

namespace fosr {

using Node = std::size_t;

/// Relation type of an edge. Input edges are Original, edges introduced by
/// rewiring are Added, so a relational GNN can weight the two separately.
enum class RelationTag : std::uint8_t { Original = 1, Added = 2 };

inline RelationTag relation_from_int(long value) {
  if (value == 1) return RelationTag::Original;
  if (value == 2) return RelationTag::Added;
  throw Error(ErrorKind::UnknownRelation, "relation " + std::to_string(value));
}

struct Edge {
  Node u;
  Node v;
  RelationTag tag = RelationTag::Original;

  friend bool operator==(const Edge&, const Edge&) = default;
};

/// Undirected simple graph on nodes [0, n) with relation-tagged edges.
///
/// Edges are stored canonically (u < v) and kept sorted by (u, v); each node
/// keeps a sorted neighbour list. The only mutation is add_edge.
class Graph {
 public:
  explicit Graph(std::size_t node_count = 0) : adjacency_(node_count) {}

  /// Builds a graph from an unordered edge list. Throws on the first invalid
  /// edge; the result does not depend on the input order.
  static Graph from_edges(std::size_t node_count, std::span<const Edge> edges) {
    Graph g(node_count);
    for (const Edge& e : edges) g.add_edge(e.u, e.v, e.tag);
    return g;
  }

  std::size_t node_count() const noexcept { return adjacency_.size(); }
  std::size_t edge_count() const noexcept { return edges_.size(); }

  const std::vector<Edge>& edges() const noexcept { return edges_; }

  std::span<const Node> neighbors(Node v) const {
    check_node(v);
    return adjacency_[v];
  }

  std::size_t degree(Node v) const {
    check_node(v);
    return adjacency_[v].size();
  }

  /// 1 + d_v: the degree once a self-loop is accounted for.
  std::size_t augmented_degree(Node v) const { return degree(v) + 1; }

  std::vector<double> degrees() const {
    std::vector<double> d(node_count());
    for (Node v = 0; v < node_count(); ++v) d[v] = static_cast<double>(adjacency_[v].size());
    return d;
  }

  bool has_edge(Node u, Node v) const {
    check_node(u);
    check_node(v);
    const auto& a = adjacency_[u].size() <= adjacency_[v].size() ? adjacency_[u] : adjacency_[v];
    const Node other = adjacency_[u].size() <= adjacency_[v].size() ? v : u;
    return std::binary_search(a.begin(), a.end(), other);
  }

  /// Relation tag of an existing edge.
  RelationTag relation(Node u, Node v) const {
    if (u > v) std::swap(u, v);
    auto it = std::lower_bound(edges_.begin(), edges_.end(), std::pair{u, v}, edge_less);
    if (it == edges_.end() || it->u != u || it->v != v) {
      throw Error(ErrorKind::InvalidParameter,
                  "no edge (" + std::to_string(u) + ", " + std::to_string(v) + ")");
    }
    return it->tag;
  }

  bool is_complete() const noexcept {
    const std::size_t n = node_count();
    return edges_.size() == n * (n - (n > 0 ? 1 : 0)) / 2;
  }

  /// Inserts the undirected edge {u, v}. Nothing is modified on failure.
  void add_edge(Node u, Node v, RelationTag tag = RelationTag::Original) {
    if (u >= node_count() || v >= node_count()) {
      throw Error(ErrorKind::NodeOutOfRange, "edge (" + std::to_string(u) + ", " + std::to_string(v) +
                                                 ") with n = " + std::to_string(node_count()));
    }
    if (u == v) throw Error(ErrorKind::SelfLoop, "node " + std::to_string(u));
    if (u > v) std::swap(u, v);
    if (has_edge(u, v)) {
      throw Error(ErrorKind::DuplicateEdge, "(" + std::to_string(u) + ", " + std::to_string(v) + ")");
    }
    auto pos = std::lower_bound(edges_.begin(), edges_.end(), std::pair{u, v}, edge_less);
    edges_.insert(pos, Edge{u, v, tag});
    insert_sorted(adjacency_[u], v);
    insert_sorted(adjacency_[v], u);
  }

  /// First node with degree zero, or node_count() if there is none.
  Node first_isolated_node() const noexcept {
    for (Node v = 0; v < node_count(); ++v) {
      if (adjacency_[v].empty()) return v;
    }
    return node_count();
  }

  friend bool operator==(const Graph& a, const Graph& b) {
    return a.node_count() == b.node_count() && a.edges_ == b.edges_;
  }

 private:
  static bool edge_less(const Edge& e, const std::pair<Node, Node>& key) {
    return e.u < key.first || (e.u == key.first && e.v < key.second);
  }

  static void insert_sorted(std::vector<Node>& list, Node value) {
    list.insert(std::lower_bound(list.begin(), list.end(), value), value);
  }

  void check_node(Node v) const {
    if (v >= node_count()) {
      throw Error(ErrorKind::NodeOutOfRange,
                  "node " + std::to_string(v) + " with n = " + std::to_string(node_count()));
    }
  }

  std::vector<Edge> edges_;
  std::vector<std::vector<Node>> adjacency_;
};

inline std::size_t augmented_degree(const Graph& g, Node v) { return g.augmented_degree(v); }

/// Hop distances from `source`; unreachable nodes get SIZE_MAX.
inline std::vector<std::size_t> bfs_distances(const Graph& g, Node source) {
  constexpr auto unreached = static_cast<std::size_t>(-1);
  std::vector<std::size_t> dist(g.node_count(), unreached);
  std::queue<Node> frontier;
  dist.at(source) = 0;
  frontier.push(source);
  while (!frontier.empty()) {
    const Node v = frontier.front();
    frontier.pop();
    for (Node w : g.neighbors(v)) {
      if (dist[w] == unreached) {
        dist[w] = dist[v] + 1;
        frontier.push(w);
      }
    }
  }
  return dist;
}

inline bool is_connected(const Graph& g) {
  if (g.node_count() == 0) return true;
  const auto dist = bfs_distances(g, 0);
  return std::none_of(dist.begin(), dist.end(),
                      [](std::size_t d) { return d == static_cast<std::size_t>(-1); });
}

/// Edges carrying the given tag, in canonical order.
inline std::vector<Edge> edges_with_tag(const Graph& g, RelationTag tag) {
  std::vector<Edge> out;
  std::copy_if(g.edges().begin(), g.edges().end(), std::back_inserter(out),
               [tag](const Edge& e) { return e.tag == tag; });
  return out;
}

}  // namespace fosr
