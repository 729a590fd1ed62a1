#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "fosr/generators.hpp"
#include "fosr/graph.hpp"
#include "fosr/io.hpp"
#include "fosr/rewire.hpp"
#include "fosr/spectral.hpp"

namespace fosr {

inline double pearson(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size() || a.size() < 2) throw Error(ErrorKind::DimensionMismatch, "pearson needs paired samples");
  const double n = static_cast<double>(a.size());
  double ma = 0.0;
  double mb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ma += a[i];
    mb += b[i];
  }
  ma /= n;
  mb /= n;
  double sab = 0.0;
  double saa = 0.0;
  double sbb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  return sab / std::sqrt(saa * sbb);
}

/// Least-squares slope of log(y) against log(x).
inline double loglog_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw Error(ErrorKind::DimensionMismatch, "slope needs paired samples");
  std::vector<double> lx(x.size());
  std::vector<double> ly(y.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    lx[i] = std::log(x[i]);
    ly[i] = std::log(y[i]);
  }
  const double n = static_cast<double>(x.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxy += (lx[i] - mx) * (ly[i] - my);
    sxx += (lx[i] - mx) * (lx[i] - mx);
  }
  return sxy / sxx;
}

/// Exact gaps [initial, after edge 1, ..., after edge k] of a tracked run.
inline std::vector<double> gap_curve(const RewireResult& result) {
  std::vector<double> gaps;
  gaps.push_back(result.initial_gap.value_or(std::numeric_limits<double>::quiet_NaN()));
  for (const TrajectoryRecord& r : result.trajectory) {
    gaps.push_back(r.gap.value_or(std::numeric_limits<double>::quiet_NaN()));
  }
  return gaps;
}

/// Fraction of steps i -> i + 1 with gap[i + 1] >= gap[i] - slack.
inline double nondecreasing_fraction(std::span<const double> gaps, double slack = 1e-12) {
  if (gaps.size() < 2) return 1.0;
  std::size_t ok = 0;
  for (std::size_t i = 1; i < gaps.size(); ++i) {
    if (gaps[i] >= gaps[i - 1] - slack) ++ok;
  }
  return static_cast<double>(ok) / static_cast<double>(gaps.size() - 1);
}

// ---------------------------------------------------------------------------
// expansion-curve: gap against iteration for fosr, greedy and random
// ---------------------------------------------------------------------------

struct CurvePoint {
  std::string method;
  std::size_t iter = 0;
  double gap = 0.0;
  double gap_normalized = 0.0;  // gap / max over this method's curve
};

struct ExpansionOptions {
  std::size_t iterations = 100;
  RewireConfig fosr;               // iterations and track_exact_gap are overridden
  bool include_greedy = true;
  std::size_t random_seeds = 10;   // random curve is the per-iteration mean
  std::uint64_t random_seed_base = 0;
};

inline void append_curve(std::vector<CurvePoint>& out, const std::string& method, std::span<const double> gaps) {
  const double top = *std::max_element(gaps.begin(), gaps.end());
  for (std::size_t i = 0; i < gaps.size(); ++i) {
    out.push_back({method, i, gaps[i], top > 0.0 ? gaps[i] / top : 0.0});
  }
}

inline std::vector<double> mean_random_curve(const Graph& g, std::size_t k, std::size_t seeds, std::uint64_t base,
                                             std::size_t guard) {
  std::vector<double> mean;
  for (std::size_t s = 0; s < seeds; ++s) {
    const std::vector<double> gaps = gap_curve(random_rewire(g, k, base + s, true, guard));
    if (mean.empty()) mean.assign(gaps.size(), 0.0);
    for (std::size_t i = 0; i < std::min(mean.size(), gaps.size()); ++i) mean[i] += gaps[i] / static_cast<double>(seeds);
  }
  return mean;
}

inline std::vector<CurvePoint> expansion_curve(const Graph& g, const ExpansionOptions& opt) {
  std::vector<CurvePoint> out;
  RewireConfig cfg = opt.fosr;
  cfg.iterations = opt.iterations;
  cfg.track_exact_gap = true;
  append_curve(out, "fosr", gap_curve(fosr_rewire(g, cfg)));
  if (opt.include_greedy) append_curve(out, "greedy", gap_curve(greedy_exact_rewire(g, opt.iterations, cfg.dense_guard)));
  if (opt.random_seeds > 0) {
    append_curve(out, "random",
                 mean_random_curve(g, opt.iterations, opt.random_seeds, opt.random_seed_base, cfg.dense_guard));
  }
  return out;
}

inline void write_curve_csv(std::ostream& out, std::span<const CurvePoint> points) {
  out << "method,iter,gap,gap_normalized\n";
  for (const CurvePoint& p : points) {
    out << p.method << ',' << p.iter << ',' << format_double(p.gap) << ',' << format_double(p.gap_normalized) << '\n';
  }
}

// ---------------------------------------------------------------------------
// approx-error: exact change of lambda_2(A_N) against its first-order
// prediction and the FoSR term, for every candidate edge
// ---------------------------------------------------------------------------

struct ApproxRow {
  std::size_t graph = 0;
  Node u = 0;
  Node v = 0;
  double exact_delta = 0.0;  // lambda_2(A_N(g + uv)) - lambda_2(A_N(g))
  double first_order = 0.0;  // full first-order change
  double fosr_term = 0.0;   // 2 x_u x_v / sqrt((1 + d_u)(1 + d_v))
};

struct ApproxSummary {
  std::vector<ApproxRow> rows;
  double corr_exact_first_order = 0.0;
  double corr_first_order_fosr = 0.0;
  double corr_exact_fosr = 0.0;
};

inline ApproxSummary approx_error(std::span<const Graph> graphs, std::size_t guard = default_dense_guard()) {
  ApproxSummary summary;
  for (std::size_t gi = 0; gi < graphs.size(); ++gi) {
    const Graph& g = graphs[gi];
    const Eigenpair pair = second_adjacency_eigenpair(g, guard);
    const std::vector<double> x(pair.vector.data(), pair.vector.data() + pair.vector.size());
    for (Node u = 0; u < g.node_count(); ++u) {
      for (Node v = u + 1; v < g.node_count(); ++v) {
        if (g.has_edge(u, v)) continue;
        Graph h = g;
        h.add_edge(u, v, RelationTag::Added);
        ApproxRow row;
        row.graph = gi;
        row.u = u;
        row.v = v;
        row.exact_delta = second_adjacency_eigenpair(h, guard).value - pair.value;
        row.first_order = first_order_gap_change(g, x, pair.value, u, v);
        row.fosr_term = 2.0 * fosr_score(x, g, u, v);
        summary.rows.push_back(row);
      }
    }
  }
  std::vector<double> exact;
  std::vector<double> first;
  std::vector<double> term;
  for (const ApproxRow& r : summary.rows) {
    exact.push_back(r.exact_delta);
    first.push_back(r.first_order);
    term.push_back(r.fosr_term);
  }
  if (summary.rows.size() >= 2) {
    summary.corr_exact_first_order = pearson(exact, first);
    summary.corr_first_order_fosr = pearson(first, term);
    summary.corr_exact_fosr = pearson(exact, term);
  }
  return summary;
}

/// Connected G(n, p) samples, drawing seeds base, base + 1, ... until
/// `count` connected graphs are found.
inline std::vector<Graph> connected_er_samples(std::size_t count, std::size_t n, double p, std::uint64_t base) {
  std::vector<Graph> out;
  for (std::uint64_t seed = base; out.size() < count; ++seed) {
    Graph g = erdos_renyi(n, p, seed);
    if (is_connected(g)) out.push_back(std::move(g));
  }
  return out;
}

inline void write_approx_csv(std::ostream& out, std::span<const ApproxRow> rows) {
  out << "graph,u,v,exact_delta,first_order,fosr_term\n";
  for (const ApproxRow& r : rows) {
    out << r.graph << ',' << r.u << ',' << r.v << ',' << format_double(r.exact_delta) << ','
        << format_double(r.first_order) << ',' << format_double(r.fosr_term) << '\n';
  }
}

// ---------------------------------------------------------------------------
// greedy-compare: FoSR against the exact greedy baseline
// ---------------------------------------------------------------------------

struct CompareRow {
  std::size_t iter = 0;
  double fosr_gap = 0.0;
  double greedy_gap = 0.0;
  double ratio = 0.0;
};

inline std::vector<CompareRow> greedy_compare(const Graph& g, std::size_t iterations, RewireConfig cfg = {}) {
  cfg.iterations = iterations;
  cfg.track_exact_gap = true;
  const std::vector<double> fosr = gap_curve(fosr_rewire(g, cfg));
  const std::vector<double> greedy = gap_curve(greedy_exact_rewire(g, iterations, cfg.dense_guard));
  std::vector<CompareRow> rows;
  for (std::size_t i = 0; i < std::min(fosr.size(), greedy.size()); ++i) {
    rows.push_back({i, fosr[i], greedy[i], greedy[i] > 0.0 ? fosr[i] / greedy[i] : 1.0});
  }
  return rows;
}

inline void write_compare_csv(std::ostream& out, std::span<const CompareRow> rows) {
  out << "iter,fosr_gap,greedy_gap,ratio\n";
  for (const CompareRow& r : rows) {
    out << r.iter << ',' << format_double(r.fosr_gap) << ',' << format_double(r.greedy_gap) << ','
        << format_double(r.ratio) << '\n';
  }
}

// ---------------------------------------------------------------------------
// timing: FoSR wall time on G(n, 5 ln n / n)
// ---------------------------------------------------------------------------

struct TimingRow {
  std::size_t n = 0;
  std::size_t m = 0;
  std::size_t k = 0;
  Selection selection = Selection::Relaxed;
  double seconds = 0.0;  // best of the repeats, power iteration and edge additions
};

inline std::vector<TimingRow> timing_sweep(std::span<const std::size_t> sizes, std::size_t k, Selection selection,
                                           std::uint64_t seed = 0, std::size_t repeats = 3) {
  std::vector<TimingRow> rows;
  for (const std::size_t n : sizes) {
    const Graph g = er_default(n, seed);
    require_no_isolated(g);
    RewireConfig cfg;
    cfg.iterations = k;
    cfg.selection = selection;
    cfg.seed = seed;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t r = 0; r < std::max<std::size_t>(repeats, 1); ++r) {
      const RewireResult result = fosr_rewire(g, cfg);
      best = std::min(best, result.times.setup_seconds + result.times.rewire_seconds);
    }
    rows.push_back({n, g.edge_count(), k, selection, best});
  }
  return rows;
}

inline double timing_slope(std::span<const TimingRow> rows) {
  std::vector<double> ns;
  std::vector<double> secs;
  for (const TimingRow& r : rows) {
    ns.push_back(static_cast<double>(r.n));
    secs.push_back(r.seconds);
  }
  return loglog_slope(ns, secs);
}

inline void write_timing_csv(std::ostream& out, std::span<const TimingRow> rows) {
  out << "n,m,k,selection,seconds,seconds_per_iter\n";
  for (const TimingRow& r : rows) {
    out << r.n << ',' << r.m << ',' << r.k << ',' << (r.selection == Selection::Exhaustive ? "exhaustive" : "relaxed")
        << ',' << format_double(r.seconds) << ','
        << format_double(r.k > 0 ? r.seconds / static_cast<double>(r.k) : 0.0) << '\n';
  }
}

}  // namespace fosr
