#include <algorithm>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fosr/fosr.hpp"

namespace {

using fosr::Error;
using fosr::ErrorKind;
using fosr::Graph;

fosr::Graph load_graph(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::ParseError, "cannot open " + path);
  return fosr::read_edge_list(in);
}

// Writes to the named file, or to stdout when the name is empty or "-".
template <class Fn>
void write_to(const std::string& path, Fn&& fn) {
  if (path.empty() || path == "-") {
    fn(std::cout);
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::ParseError, "cannot write " + path);
  fn(out);
}

const std::map<std::string, fosr::Selection> kSelections{{"exhaustive", fosr::Selection::Exhaustive},
                                                         {"relaxed", fosr::Selection::Relaxed}};

struct GraphFlags {
  std::string kind = "dumbbell";
  std::size_t n = 0;
  std::size_t clique_size = 10;
  std::size_t path_len = 3;
  std::size_t num_cliques = 3;
  std::optional<double> p;
  bool log10 = false;
  std::uint64_t seed = 0;

  void attach(CLI::App* app) {
    app->add_option("--kind", kind, "dumbbell, path-of-cliques, er, complete, path, ring, star")
        ->check(CLI::IsMember({"dumbbell", "path-of-cliques", "er", "erdos-renyi", "complete", "path", "ring", "star"}));
    app->add_option("--n", n, "node count (leaves for star)");
    app->add_option("--clique-size", clique_size, "clique size for dumbbell and path-of-cliques");
    app->add_option("--path-len", path_len, "edges on the dumbbell bridge path")->check(CLI::PositiveNumber);
    app->add_option("--num-cliques", num_cliques, "cliques in a path-of-cliques");
    app->add_option("--p", p, "edge probability for er (default 5 log n / n)")->check(CLI::Range(0.0, 1.0));
    app->add_flag("--log10", log10, "use log base 10 in the default er probability");
    app->add_option("--seed", seed, "generator seed");
  }

  Graph build() const {
    fosr::GeneratorSpec spec;
    spec.kind = fosr::parse_generator_kind(kind);
    spec.n = n;
    spec.clique_size = clique_size;
    spec.path_len = path_len;
    spec.num_cliques = num_cliques;
    spec.p = p;
    spec.log_base = log10 ? fosr::LogBase::Ten : fosr::LogBase::Natural;
    spec.seed = seed;
    return fosr::generate(spec);
  }
};

void print_field(const char* name, double value) { std::cout << name << " = " << fosr::format_report(value) << '\n'; }

void print_bool(const char* name, bool value) { std::cout << name << " = " << (value ? "true" : "false") << '\n'; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral rewiring of graphs by first-order gap maximisation"};
  app.require_subcommand(1);

  // generate
  GraphFlags gen_flags;
  std::string gen_output;
  CLI::App* generate = app.add_subcommand("generate", "write a synthetic graph as an edge list");
  gen_flags.attach(generate);
  generate->add_option("--output,-o", gen_output, "output file (default stdout)");

  // rewire
  std::string rw_input;
  std::string rw_output;
  std::string rw_trajectory;
  std::string rw_method = "fosr";
  std::string rw_selection = "exhaustive";
  fosr::RewireConfig rw_cfg;
  CLI::App* rewire = app.add_subcommand("rewire", "add edges to a graph");
  rewire->add_option("--input,-i", rw_input, "input edge list")->required()->check(CLI::ExistingFile);
  rewire->add_option("--method", rw_method, "fosr, greedy or random")
      ->check(CLI::IsMember({"fosr", "greedy", "random"}));
  rewire->add_option("--iterations,-k", rw_cfg.iterations, "number of edges to add");
  rewire->add_option("--power-iters,-r", rw_cfg.initial_power_iters, "power iterations before the first edge");
  rewire->add_option("--steps-per-edge", rw_cfg.steps_per_edge, "power iterations after each edge");
  rewire->add_option("--selection", rw_selection, "exhaustive or relaxed")
      ->check(CLI::IsMember({"exhaustive", "relaxed"}));
  rewire->add_option("--seed", rw_cfg.seed, "random seed");
  rewire->add_flag("--track-gap", rw_cfg.track_exact_gap, "record the exact spectral gap after every edge");
  rewire->add_option("--dense-guard", rw_cfg.dense_guard, "largest n allowed for dense eigensolves");
  rewire->add_option("--output,-o", rw_output, "rewired edge list (default stdout)");
  rewire->add_option("--trajectory", rw_trajectory, "trajectory CSV");

  // spectral
  std::string sp_input;
  bool sp_exact = false;
  bool sp_power = false;
  std::size_t sp_iters = 100;
  std::uint64_t sp_seed = 0;
  std::size_t sp_guard = fosr::default_dense_guard();
  CLI::App* spectral = app.add_subcommand("spectral", "report the spectral gap");
  spectral->add_option("--input,-i", sp_input, "input edge list")->required()->check(CLI::ExistingFile);
  auto* exact_flag = spectral->add_flag("--exact", sp_exact, "dense eigensolve (default)");
  spectral->add_flag("--power", sp_power, "deflated power iteration")->excludes(exact_flag);
  spectral->add_option("--iters", sp_iters, "power iterations");
  spectral->add_option("--seed", sp_seed, "power iteration seed");
  spectral->add_option("--dense-guard", sp_guard, "largest n allowed for dense eigensolves");

  // cheeger
  std::string ch_input;
  std::size_t ch_max_nodes = fosr::kDefaultCheegerGuard;
  CLI::App* cheeger = app.add_subcommand("cheeger", "brute-force Cheeger constant and inequality check");
  cheeger->add_option("--input,-i", ch_input, "input edge list")->required()->check(CLI::ExistingFile);
  cheeger->add_option("--max-nodes", ch_max_nodes, "largest n allowed for enumeration");

  // smoothing
  std::string sm_original;
  std::string sm_rewired;
  double sm_alpha = 0.5;
  CLI::App* smoothing = app.add_subcommand("smoothing", "rate of smoothing of the alpha-construction layer");
  smoothing->add_option("--input-original", sm_original, "original graph")->required()->check(CLI::ExistingFile);
  smoothing->add_option("--input-rewired", sm_rewired, "rewired graph")->required()->check(CLI::ExistingFile);
  smoothing->add_option("--alpha", sm_alpha, "layer parameter in [0, 1]")->check(CLI::Range(0.0, 1.0));

  // experiment
  std::string ex_name;
  std::string ex_output;
  std::string ex_input;
  std::string ex_selection = "exhaustive";
  GraphFlags ex_graph;
  std::size_t ex_iterations = 0;
  std::size_t ex_power_iters = 8;
  std::size_t ex_steps_per_edge = 1;
  std::size_t ex_random_seeds = 10;
  bool ex_no_greedy = false;
  std::size_t ex_graphs = 20;
  std::size_t ex_repeats = 3;
  std::vector<std::size_t> ex_sizes{200, 400, 800, 1600};
  CLI::App* experiment = app.add_subcommand("experiment", "run an experiment and write its CSV");
  experiment->add_option("--name", ex_name, "expansion-curve, approx-error, greedy-compare or timing")
      ->required()
      ->check(CLI::IsMember({"expansion-curve", "approx-error", "greedy-compare", "timing"}));
  experiment->add_option("--output,-o", ex_output, "CSV output (default stdout)");
  experiment->add_option("--input,-i", ex_input, "edge list to use instead of a generated graph")
      ->check(CLI::ExistingFile);
  ex_graph.attach(experiment);
  experiment->add_option("--iterations,-k", ex_iterations, "edges to add (default 100, 50 for greedy-compare)");
  experiment->add_option("--power-iters,-r", ex_power_iters, "power iterations before the first edge");
  experiment->add_option("--steps-per-edge", ex_steps_per_edge, "power iterations after each edge");
  experiment->add_option("--selection", ex_selection, "exhaustive or relaxed")
      ->check(CLI::IsMember({"exhaustive", "relaxed"}));
  experiment->add_option("--random-seeds", ex_random_seeds, "seeds averaged for the random baseline");
  experiment->add_flag("--no-greedy", ex_no_greedy, "skip the exact greedy baseline");
  experiment->add_option("--graphs", ex_graphs, "random graphs for approx-error");
  experiment->add_option("--sizes", ex_sizes, "node counts for timing")->delimiter(',');
  experiment->add_option("--repeats", ex_repeats, "timing repeats (minimum is kept)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*generate) {
      const Graph g = gen_flags.build();
      write_to(gen_output, [&](std::ostream& out) { fosr::write_edge_list(out, g); });
    } else if (*rewire) {
      const Graph g = load_graph(rw_input);
      rw_cfg.selection = kSelections.at(rw_selection);
      fosr::RewireResult result;
      if (rw_method == "fosr") {
        if (rw_cfg.track_exact_gap) fosr::require_dense_size(g, rw_cfg.dense_guard);
        result = fosr::fosr_rewire(g, rw_cfg);
      } else if (rw_method == "greedy") {
        result = fosr::greedy_exact_rewire(g, rw_cfg.iterations, rw_cfg.dense_guard);
      } else {
        result = fosr::random_rewire(g, rw_cfg.iterations, rw_cfg.seed, rw_cfg.track_exact_gap, rw_cfg.dense_guard);
      }
      if (result.truncated) {
        std::cerr << "graph became complete after " << result.trajectory.size() << " of " << rw_cfg.iterations
                  << " edges\n";
      }
      write_to(rw_output, [&](std::ostream& out) { fosr::write_edge_list(out, result.graph); });
      if (!rw_trajectory.empty()) {
        write_to(rw_trajectory, [&](std::ostream& out) { fosr::write_trajectory_csv(out, result.trajectory); });
      }
    } else if (*spectral) {
      const Graph g = load_graph(sp_input);
      if (sp_power) {
        const fosr::SpectralEstimate est = fosr::second_eigen_power(g, sp_iters, sp_seed);
        print_field("lambda2", 1.0 - est.rayleigh);
        print_field("rayleigh", est.rayleigh);
        print_field("residual", est.residual);
        std::cout << "iterations = " << est.iterations << '\n';
      } else {
        print_field("lambda2", fosr::spectral_gap_exact(g, sp_guard));
      }
    } else if (*cheeger) {
      const Graph g = load_graph(ch_input);
      const fosr::CheegerReport r = fosr::cheeger_bruteforce(g, ch_max_nodes);
      print_field("h", r.h);
      std::cout << "boundary = " << r.boundary << '\n';
      std::cout << "volume = " << r.volume << '\n';
      std::cout << "cut =";
      for (fosr::Node v : r.cut) std::cout << ' ' << v;
      std::cout << '\n';
      print_field("lambda2", r.lambda2);
      print_field("lower_bound", r.lambda2 / 2.0);
      print_field("upper_bound", std::sqrt(2.0 * r.lambda2));
      print_bool("bounds_ok", r.bounds_ok);
    } else if (*smoothing) {
      const Graph g1 = load_graph(sm_original);
      const Graph g2 = load_graph(sm_rewired);
      if (g1.node_count() != g2.node_count()) {
        throw Error(ErrorKind::DimensionMismatch, "original and rewired graphs have different node counts");
      }
      std::vector<std::pair<fosr::Node, fosr::Node>> added;
      for (const fosr::Edge& e : g1.edges()) {
        if (!g2.has_edge(e.u, e.v)) {
          throw Error(ErrorKind::InvalidParameter,
                      "edge " + std::to_string(e.u) + " " + std::to_string(e.v) + " missing from the rewired graph");
        }
      }
      for (const fosr::Edge& e : g2.edges()) {
        if (!g1.has_edge(e.u, e.v)) added.emplace_back(e.u, e.v);
      }
      const fosr::AlphaSmoothingCheck check = fosr::verify_alpha_smoothing(g1, added, sm_alpha);
      std::cout << "added_edges = " << added.size() << '\n';
      print_field("lambda2", check.report.lambda2);
      print_field("energy_ratio_sup", check.report.energy_ratio_sup);
      print_field("norm_ratio_sup", check.report.norm_ratio_sup);
      print_field("rate", check.report.rate);
      print_field("expected_rate", check.expected_rate);
      print_bool("alpha_rate_pass", check.pass);
    } else if (*experiment) {
      fosr::RewireConfig cfg;
      cfg.initial_power_iters = ex_power_iters;
      cfg.steps_per_edge = ex_steps_per_edge;
      cfg.selection = kSelections.at(ex_selection);
      cfg.seed = ex_graph.seed;
      auto fixture = [&] { return ex_input.empty() ? ex_graph.build() : load_graph(ex_input); };

      if (ex_name == "expansion-curve") {
        fosr::ExpansionOptions opt;
        opt.iterations = ex_iterations == 0 ? 100 : ex_iterations;
        opt.fosr = cfg;
        opt.include_greedy = !ex_no_greedy;
        opt.random_seeds = ex_random_seeds;
        opt.random_seed_base = ex_graph.seed;
        const std::vector<fosr::CurvePoint> points = fosr::expansion_curve(fixture(), opt);
        write_to(ex_output, [&](std::ostream& out) { fosr::write_curve_csv(out, points); });
        for (const char* method : {"fosr", "greedy", "random"}) {
          auto last = std::find_if(points.rbegin(), points.rend(), [&](const auto& p) { return p.method == method; });
          if (last != points.rend()) std::cerr << method << " final gap = " << fosr::format_report(last->gap) << '\n';
        }
      } else if (ex_name == "approx-error") {
        const std::size_t n = ex_graph.n == 0 ? 20 : ex_graph.n;
        const auto base = ex_graph.log10 ? fosr::LogBase::Ten : fosr::LogBase::Natural;
        const double p = ex_graph.p.value_or(fosr::er_default_probability(n, base));
        const std::vector<Graph> graphs = fosr::connected_er_samples(ex_graphs, n, p, ex_graph.seed);
        const fosr::ApproxSummary summary = fosr::approx_error(graphs);
        write_to(ex_output, [&](std::ostream& out) { fosr::write_approx_csv(out, summary.rows); });
        std::cerr << "rows = " << summary.rows.size() << '\n'
                  << "corr(exact, first_order) = " << fosr::format_report(summary.corr_exact_first_order) << '\n'
                  << "corr(first_order, fosr) = " << fosr::format_report(summary.corr_first_order_fosr) << '\n'
                  << "corr(exact, fosr) = " << fosr::format_report(summary.corr_exact_fosr) << '\n';
      } else if (ex_name == "greedy-compare") {
        const std::size_t k = ex_iterations == 0 ? 50 : ex_iterations;
        const std::vector<fosr::CompareRow> rows = fosr::greedy_compare(fixture(), k, cfg);
        write_to(ex_output, [&](std::ostream& out) { fosr::write_compare_csv(out, rows); });
        double worst = 1.0;
        for (const auto& r : rows) worst = std::min(worst, r.ratio);
        std::cerr << "min ratio = " << fosr::format_report(worst) << '\n';
      } else {
        const std::size_t k = ex_iterations == 0 ? 100 : ex_iterations;
        const std::vector<fosr::TimingRow> rows =
            fosr::timing_sweep(ex_sizes, k, cfg.selection, ex_graph.seed, ex_repeats);
        write_to(ex_output, [&](std::ostream& out) { fosr::write_timing_csv(out, rows); });
        std::cerr << "log-log slope = " << fosr::format_report(fosr::timing_slope(rows)) << '\n';
      }
    }
  } catch (const fosr::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
