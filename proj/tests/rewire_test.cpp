#include <cmath>
#include <iostream>
#include <sstream>
#include <vector>

#include <gtest/gtest.h>

#include "fosr/experiments.hpp"
#include "fosr/generators.hpp"
#include "fosr/io.hpp"
#include "fosr/rewire.hpp"
#include "oracle.hpp"

namespace fosr {
namespace {

ErrorKind KindOf(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorKind::ParseError;
}

struct ExactPair {
  double value;
  std::vector<double> x;
};

// Second-largest eigenpair of A_N from the Jacobi oracle.
ExactPair OracleSecondPair(const Graph& g) {
  const oracle::Eigh eig = oracle::jacobi(oracle::normalized_adjacency(g));
  const std::size_t idx = g.node_count() - 2;
  return {eig.values[idx], eig.vectors[idx]};
}

// Brute-force minimiser of the score over all non-edges, lexicographic ties.
std::pair<Node, Node> BruteForceBest(const Graph& g, const std::vector<double>& x) {
  std::pair<Node, Node> best{0, 0};
  double best_score = 1e300;
  for (Node u = 0; u < g.node_count(); ++u) {
    for (Node v = u + 1; v < g.node_count(); ++v) {
      if (g.has_edge(u, v)) continue;
      const double s = x[u] / std::sqrt(static_cast<double>(g.degree(u) + 1)) *
                       (x[v] / std::sqrt(static_cast<double>(g.degree(v) + 1)));
      if (s < best_score) {
        best_score = s;
        best = {u, v};
      }
    }
  }
  return best;
}

TEST(FosrScoreTest, Examples) {
  const Graph g = path(3);
  EXPECT_EQ(fosr_score(std::vector{0.0, 0.3, -0.7}, g, 0, 2), 0.0);
  const double r = 1.0 / std::sqrt(2.0);
  EXPECT_NEAR(fosr_score(std::vector{r, -r}, path(2), 0, 1), -0.25, 1e-15);
  EXPECT_LT(fosr_score(std::vector{0.2, 0.1, -0.3}, g, 0, 2), 0.0);
  EXPECT_GT(fosr_score(std::vector{-0.2, 0.1, -0.3}, g, 0, 2), 0.0);
  EXPECT_EQ(KindOf([&] { (void)fosr_score(std::vector{0.0, 0.0, 0.0}, g, 1, 1); }), ErrorKind::SelfPair);
}

TEST(FirstOrderChangeTest, VanishesAndReduces) {
  const Graph g = path(4);
  EXPECT_EQ(first_order_gap_change(g, std::vector{0.0, 0.5, 0.5, 0.0}, 0.7, 0, 3), 0.0);
  const std::vector<double> x{0.3, -0.1, 0.4, -0.6};
  EXPECT_DOUBLE_EQ(first_order_gap_change(g, x, 0.0, 0, 2), 2.0 * fosr_score(x, g, 0, 2));
  EXPECT_EQ(KindOf([&] { (void)first_order_gap_change(g, x, 0.1, 0, 1); }), ErrorKind::EdgeExists);
  EXPECT_EQ(KindOf([&] { (void)first_order_gap_change(g, x, 0.1, 2, 2); }), ErrorKind::SelfPair);
}

TEST(FirstOrderChangeTest, EqualsDeltaQuadraticFormOnDumbbell) {
  const Graph g = dumbbell(4, 1);
  const ExactPair pair = OracleSecondPair(g);
  const auto [u, v] = BruteForceBest(g, pair.x);
  EXPECT_NE(u < 4, v < 4);  // the best edge joins the two cliques
  const double eq4 = first_order_gap_change(g, pair.x, pair.value, u, v);
  const double quad = quadratic_form(delta_normalized_adjacency(g, u, v), pair.x);
  EXPECT_NEAR(eq4, quad, 1e-12);
}

TEST(FirstOrderChangeTest, IdentityOverRandomGraphs) {
  for (std::uint64_t seed = 0; seed < 15; ++seed) {
    const Graph g = oracle::random_connected(6 + seed, 0.2, seed);
    const ExactPair pair = OracleSecondPair(g);
    for (Node u = 0; u < g.node_count(); ++u) {
      for (Node v = u + 1; v < g.node_count(); ++v) {
        if (g.has_edge(u, v)) continue;
        const double eq4 = first_order_gap_change(g, pair.x, pair.value, u, v);
        const double quad = quadratic_form(delta_normalized_adjacency(g, u, v), pair.x);
        EXPECT_NEAR(eq4, quad, 1e-10 * std::max(std::abs(quad), 1e-3));
      }
    }
  }
}

TEST(DeltaAdjacencyTest, Examples) {
  EXPECT_EQ(KindOf([] { (void)delta_normalized_adjacency(path(2), 0, 1); }), ErrorKind::EdgeExists);
  const auto entries = delta_normalized_adjacency(path(3), 0, 2);
  bool found = false;
  for (const MatrixEntry& e : entries) {
    EXPECT_TRUE(e.row == 0 || e.row == 2 || e.col == 0 || e.col == 2);
    if (e.row == 0 && e.col == 2) {
      EXPECT_DOUBLE_EQ(e.value, 0.5);
      found = true;
    }
  }
  EXPECT_TRUE(found);
}

TEST(DeltaAdjacencyTest, DenseReconstruction) {
  PortableRng rng(11);
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const Graph g = oracle::random_connected(4 + seed % 9, 0.3, seed);
    if (g.is_complete()) continue;
    Node u = 0;
    Node v = 0;
    do {
      u = rng.below(g.node_count());
      v = rng.below(g.node_count());
    } while (u == v || g.has_edge(u, v));
    oracle::Matrix dense = oracle::normalized_adjacency(g);
    for (const MatrixEntry& e : delta_normalized_adjacency(g, u, v)) dense[e.row][e.col] += e.value;
    Graph h = g;
    h.add_edge(u, v);
    const oracle::Matrix expected = oracle::normalized_adjacency(h);
    for (Node i = 0; i < g.node_count(); ++i) {
      for (Node j = 0; j < g.node_count(); ++j) ASSERT_NEAR(dense[i][j], expected[i][j], 1e-14);
    }
  }
}

TEST(LinearizationTest, ErrorIsSecondOrder) {
  // lambda_2(M + t dM) - lambda_2(M) - t x^T dM x shrinks 4x when t halves.
  PortableRng rng(5);
  const std::size_t n = 8;
  Eigen::MatrixXd m(n, n);
  Eigen::MatrixXd dm(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      m(i, j) = m(j, i) = rng.normal();
      dm(i, j) = dm(j, i) = rng.normal();
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> base(m);
  const Eigen::Index idx = n - 2;
  const double lambda = base.eigenvalues()(idx);
  const Eigen::VectorXd x = base.eigenvectors().col(idx);
  auto error_at = [&](double t) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> s(m + t * dm, Eigen::EigenvaluesOnly);
    return std::abs(s.eigenvalues()(idx) - lambda - t * x.dot(dm * x));
  };
  double t = 1e-2;
  for (int k = 0; k < 4; ++k) {
    EXPECT_GE(error_at(t) / error_at(t / 2), 3.5) << "t = " << t;
    t /= 2;
  }
}

TEST(SelectExhaustiveTest, MatchesBruteForce) {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const Graph g = oracle::random_connected(5 + seed % 20, 0.2, seed);
    PortableRng rng(seed);
    const std::vector<double> x = rng.normal_vector(g.node_count());
    EXPECT_EQ(select_edge_exhaustive(g, x), BruteForceBest(g, x));
  }
}

TEST(SelectExhaustiveTest, DumbbellAndTies) {
  const Graph g = dumbbell(4, 1);
  const auto [u, v] = select_edge_exhaustive(g, OracleSecondPair(g).x);
  EXPECT_NE(u < 4, v < 4);
  // All scores tie at zero: first non-edge in lexicographic order.
  EXPECT_EQ(select_edge_exhaustive(g, std::vector<double>(8, 0.0)), (std::pair<Node, Node>{0, 5}));
  EXPECT_EQ(select_edge_exhaustive(path(4), std::vector<double>(4, 0.0)), (std::pair<Node, Node>{0, 2}));
  EXPECT_EQ(KindOf([] { (void)select_edge_exhaustive(complete(5), std::vector<double>(5, 1.0)); }),
            ErrorKind::GraphComplete);
}

TEST(SelectRelaxedTest, DumbbellAgreesWithExhaustive) {
  const Graph g = dumbbell(4, 1);
  const std::vector<double> x = OracleSecondPair(g).x;
  EXPECT_EQ(select_edge_relaxed(g, x), select_edge_exhaustive(g, x));
}

TEST(SelectRelaxedTest, StarPairsTwoLeaves) {
  const Graph g = star(5);
  const std::vector<double> x{0.8, -0.1, -0.5, -0.2, -0.05, -0.3};
  EXPECT_EQ(select_edge_relaxed(g, x), (std::pair<Node, Node>{2, 4}));
}

TEST(SelectRelaxedTest, AllPositiveTakesTwoSmallest) {
  const Graph g = path(5);
  // y order: node 2 smallest, then 1 (adjacent), then 4.
  const std::vector<double> x{0.9, 0.2, 0.1, 0.8, 0.3};
  EXPECT_EQ(select_edge_relaxed(g, x), (std::pair<Node, Node>{2, 4}));
}

TEST(SelectRelaxedTest, FallsBackWhenMinimiserIsUniversal) {
  Graph g = star(3);
  const std::vector<double> x{-1.0, 0.2, 0.5, -0.4};
  // Hub 0 is adjacent to all; next anchor is node 3; its best partner is 2.
  EXPECT_EQ(select_edge_relaxed(g, x), (std::pair<Node, Node>{2, 3}));
  EXPECT_EQ(KindOf([] { (void)select_edge_relaxed(complete(4), std::vector<double>(4, 1.0)); }),
            ErrorKind::GraphComplete);
}

TEST(SelectRelaxedTest, AgreementRateOnSparseGraphs) {
  int agree = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const Graph g = oracle::random_connected(20, 0.05, seed);
    const std::vector<double> x = OracleSecondPair(g).x;
    const auto relaxed = select_edge_relaxed(g, x);
    EXPECT_FALSE(g.has_edge(relaxed.first, relaxed.second));
    if (relaxed == select_edge_exhaustive(g, x)) ++agree;
  }
  std::cout << "relaxed/exhaustive agreement: " << agree << "/100\n";
  EXPECT_GT(agree, 50);
}

TEST(FosrRewireTest, ZeroIterationsIsIdentity) {
  const Graph g = dumbbell(5, 2);
  RewireConfig cfg;
  const RewireResult result = fosr_rewire(g, cfg);
  EXPECT_EQ(result.graph, g);
  EXPECT_TRUE(result.trajectory.empty());
}

TEST(FosrRewireTest, ImprovesDumbbellGap) {
  const Graph g = dumbbell(10, 3);
  RewireConfig cfg;
  cfg.iterations = 50;
  const RewireResult result = fosr_rewire(g, cfg);
  EXPECT_GT(spectral_gap_exact(result.graph), spectral_gap_exact(g));
  EXPECT_EQ(result.trajectory.size(), 50u);
}

TEST(FosrRewireTest, PathOfCliquesSaturates) {
  RewireConfig cfg;
  cfg.iterations = 150;
  cfg.track_exact_gap = true;
  const RewireResult result = fosr_rewire(path_of_cliques(3, 10), cfg);
  const std::vector<double> gaps = gap_curve(result);
  const double total_gain = gaps.back() - gaps.front();
  const double late_gain = gaps.back() - gaps[gaps.size() - 11];
  EXPECT_GT(total_gain, 0.0);
  EXPECT_LT(late_gain, 0.05 * total_gain);
}

TEST(FosrRewireTest, KeepsOriginalEdgesAndTagsAdditions) {
  for (Selection selection : {Selection::Exhaustive, Selection::Relaxed}) {
    const Graph g = oracle::random_connected(25, 0.1, 3);
    RewireConfig cfg;
    cfg.iterations = 30;
    cfg.selection = selection;
    const RewireResult result = fosr_rewire(g, cfg);
    std::vector<Edge> originals = edges_with_tag(result.graph, RelationTag::Original);
    EXPECT_EQ(originals, g.edges());
    EXPECT_EQ(result.graph.edge_count(), g.edge_count() + result.trajectory.size());
    for (const TrajectoryRecord& r : result.trajectory) {
      EXPECT_EQ(result.graph.relation(r.u, r.v), RelationTag::Added);
      EXPECT_FALSE(g.has_edge(r.u, r.v));
    }
  }
}

TEST(FosrRewireTest, StopsWhenGraphBecomesComplete) {
  RewireConfig cfg;
  cfg.iterations = 10;
  cfg.track_exact_gap = true;
  const RewireResult result = fosr_rewire(path(4), cfg);
  EXPECT_EQ(result.trajectory.size(), 3u);
  EXPECT_TRUE(result.truncated);
  EXPECT_TRUE(result.graph.is_complete());
  for (const TrajectoryRecord& r : result.trajectory) EXPECT_GE(*r.gap, 0.0);
}

TEST(FosrRewireTest, DeterministicSerialization) {
  const Graph g = er_default(60, 2);
  RewireConfig cfg;
  cfg.iterations = 40;
  cfg.seed = 9;
  cfg.track_exact_gap = true;
  auto serialize = [&] {
    const RewireResult r = fosr_rewire(g, cfg);
    std::ostringstream out;
    write_edge_list(out, r.graph);
    write_trajectory_csv(out, r.trajectory);
    return out.str();
  };
  EXPECT_EQ(serialize(), serialize());
}

TEST(FosrRewireTest, RejectsIsolatedNodes) {
  Graph g(4);
  g.add_edge(0, 1);
  g.add_edge(1, 2);
  RewireConfig cfg;
  cfg.iterations = 1;
  EXPECT_EQ(KindOf([&] { (void)fosr_rewire(g, cfg); }), ErrorKind::IsolatedNode);
}

TEST(GreedyRewireTest, ConnectsTwoComponents) {
  Graph g(4);
  g.add_edge(0, 1);
  g.add_edge(2, 3);
  const RewireResult result = greedy_exact_rewire(g, 1);
  ASSERT_EQ(result.trajectory.size(), 1u);
  EXPECT_TRUE(is_connected(result.graph));
  EXPECT_EQ(*result.initial_gap, 0.0);
  EXPECT_GT(*result.trajectory[0].gap, 0.0);
}

TEST(GreedyRewireTest, StepwiseOptimalAgainstOracle) {
  const Graph g = oracle::random_connected(9, 0.2, 1);
  const RewireResult result = greedy_exact_rewire(g, 1);
  double best = -1.0;
  for (Node u = 0; u < 9; ++u) {
    for (Node v = u + 1; v < 9; ++v) {
      if (g.has_edge(u, v)) continue;
      Graph h = g;
      h.add_edge(u, v);
      best = std::max(best, oracle::gap(h));
    }
  }
  EXPECT_NEAR(*result.trajectory[0].gap, best, 1e-12);
}

TEST(GreedyRewireTest, LeadsFosrEarlyOnDumbbell) {
  const Graph g = dumbbell(10, 3);
  RewireConfig cfg;
  cfg.iterations = 25;
  cfg.track_exact_gap = true;
  const auto fosr = gap_curve(fosr_rewire(g, cfg));
  const auto greedy = gap_curve(greedy_exact_rewire(g, 25));
  for (std::size_t i = 0; i < fosr.size(); ++i) EXPECT_GE(greedy[i], fosr[i] - 1e-12) << "iteration " << i;
}

TEST(GreedyRewireTest, ZeroIterationsAndGuard) {
  const Graph g = path(6);
  EXPECT_EQ(greedy_exact_rewire(g, 0).graph, g);
  EXPECT_EQ(KindOf([&] { (void)greedy_exact_rewire(g, 1, 5); }), ErrorKind::GraphTooLarge);
}

TEST(RandomRewireTest, Examples) {
  EXPECT_EQ(random_rewire(path(5), 0, 1).graph, path(5));
  const RewireResult full = random_rewire(complete(4), 1, 0);
  EXPECT_TRUE(full.truncated);
  EXPECT_TRUE(full.trajectory.empty());

  const RewireResult a = random_rewire(path(10), 5, 0);
  const RewireResult b = random_rewire(path(10), 5, 0);
  EXPECT_EQ(a.graph, b.graph);
  EXPECT_EQ(edges_with_tag(a.graph, RelationTag::Added).size(), 5u);
}

TEST(RandomRewireTest, FillsDenseGraphs) {
  const RewireResult r = random_rewire(path(6), 20, 4);
  EXPECT_TRUE(r.graph.is_complete());
  EXPECT_EQ(r.trajectory.size(), 10u);
  EXPECT_TRUE(r.truncated);
}

}  // namespace
}  // namespace fosr
