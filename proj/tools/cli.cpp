#include "cli.hpp"

#include <zlib.h>

#include <CLI11.hpp>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "percolation/baselines.hpp"
#include "percolation/errors.hpp"
#include "percolation/exact.hpp"
#include "percolation/report.hpp"

namespace percolation::cli {

namespace {

struct BudgetExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string graph;
  bool directed = false;
  std::string states = "random:0";
  double epsilon = 0.05;
  double delta = 0.1;
  std::size_t mc_trials = 25;
  double beta = 0.1;
  std::size_t alpha_cap = kDefaultBagCap;
  std::uint64_t seed = 0;
  unsigned threads = 0;
  std::string algorithm = "mcera";
  std::string output;
  std::string format;
  bool no_exact = false;
  std::uint64_t budget = 10'000'000'000ULL;
  std::vector<double> epsilons{0.1, 0.05};
  std::vector<std::string> algorithms{"mcera", "p-rk-fixed", "p-ab-progressive-naive"};
  std::size_t reps = 10;
  std::string aggregate;
};

const std::vector<std::string> kAlgorithms{"mcera", "p-rk-fixed", "p-ab-progressive-naive"};

unsigned default_threads() {
  if (const char* env = std::getenv("PERCOLATOR_THREADS")) {
    try {
      return static_cast<unsigned>(std::stoul(env));
    } catch (const std::exception&) {
    }
  }
  return 0;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

// Writes to --output when given, otherwise to `fallback`.
template <typename Fn>
void emit(const std::string& path, std::ostream& fallback, Fn&& fn) {
  if (path.empty()) {
    fn(fallback);
    return;
  }
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write " + path);
  fn(f);
}

EstimatorConfig make_config(const Options& o, double epsilon) {
  EstimatorConfig c;
  c.epsilon = epsilon;
  c.delta = o.delta;
  c.mc_trials = o.mc_trials;
  c.beta = o.beta;
  c.bag_cap = o.alpha_cap;
  c.threads = o.threads;
  c.validate();
  return c;
}

RunReport run_algorithm(const std::string& algorithm, const Graph& g, const PercolationModel& model,
                        const EstimatorConfig& config, std::size_t vd, std::uint64_t seed) {
  if (algorithm == "mcera") return estimate(g, model, config, seed);
  if (algorithm == "p-rk-fixed") return run_prk_fixed(g, model, config, vd, seed);
  if (algorithm == "p-ab-progressive-naive") return run_pab_naive(g, model, config, vd, seed);
  throw std::invalid_argument("unknown algorithm " + algorithm);
}

bool within_budget(const Graph& g, std::uint64_t budget) {
  return static_cast<double>(g.num_vertices()) * static_cast<double>(g.num_edges()) <=
         static_cast<double>(budget);
}

void cmd_exact(const Options& o, std::ostream& out) {
  Graph g = load_graph_file(o.graph, o.directed);
  if (!within_budget(g, o.budget))
    throw BudgetExceeded("exact computation exceeds --budget (n*m = " +
                         std::to_string(g.num_vertices() * g.num_edges()) + ")");
  PercolationModel model(resolve_states(o.states, g));
  auto start = std::chrono::steady_clock::now();
  ExactResult r = exact_centralities(g, model, o.threads);
  nlohmann::json sidecar = exact_sidecar(g, r, seconds_since(start));

  if (o.format == "json") {
    sidecar["ids"] = std::vector<OriginalId>(g.original_ids().begin(), g.original_ids().end());
    sidecar["p"] = r.p;
    emit(o.output, out, [&](std::ostream& s) { s << sidecar.dump(2) << '\n'; });
    return;
  }
  emit(o.output, out, [&](std::ostream& s) { write_centrality_tsv(g, r.p, s); });
  if (!o.output.empty()) emit(o.output + ".json", out, [&](std::ostream& s) { s << sidecar.dump(2) << '\n'; });
}

void cmd_approx(const Options& o, std::ostream& out, std::ostream& err) {
  Graph g = load_graph_file(o.graph, o.directed);
  PercolationModel model(resolve_states(o.states, g));
  EstimatorConfig config = make_config(o, o.epsilon);
  std::size_t vd = 2;
  if (o.algorithm != "mcera") vd = vertex_diameter(g, o.budget, o.seed, o.threads).value;
  RunReport report = run_algorithm(o.algorithm, g, model, config, vd, o.seed);
  err << o.algorithm << ": samples=" << report.samples << " stop=" << to_string(report.stop)
      << " seed=" << o.seed << '\n';
  if (o.format == "tsv") {
    emit(o.output, out, [&](std::ostream& s) { write_centrality_tsv(g, report.estimates, s); });
    return;
  }
  emit(o.output, out, [&](std::ostream& s) { s << to_json(report, g).dump(2) << '\n'; });
}

void cmd_compare(const Options& o, std::ostream& out, std::ostream& err) {
  if (o.reps < 1) throw ContractViolation("--reps must be at least 1");
  Graph g = load_graph_file(o.graph, o.directed);
  const bool exact_ok = within_budget(g, o.budget);
  if (!exact_ok && !o.no_exact)
    throw BudgetExceeded("exact reference exceeds --budget; pass --no-exact to skip deviations");
  PercolationModel model(resolve_states(o.states, g));
  std::optional<ExactResult> truth;
  if (!o.no_exact) truth = exact_centralities(g, model, o.threads);
  const std::size_t vd = truth ? truth->vertex_diameter : vertex_diameter(g, o.budget, o.seed, o.threads).value;

  std::vector<CompareRow> rows;
  for (std::size_t e = 0; e < o.epsilons.size(); ++e) {
    EstimatorConfig config = make_config(o, o.epsilons[e]);
    for (std::size_t rep = 0; rep < o.reps; ++rep) {
      const std::uint64_t run_seed = derive_seed(o.seed, e, rep);
      for (const auto& alg : o.algorithms) {
        auto start = std::chrono::steady_clock::now();
        RunReport r = run_algorithm(alg, g, model, config, vd, run_seed);
        CompareRow row{alg, config.epsilon, rep, r.samples, seconds_since(start), {}, {}};
        if (truth) std::tie(row.sd, row.mad) = deviation(r.estimates, truth->p);
        err << alg << " eps=" << format_double(config.epsilon) << " rep=" << rep << " seed=" << run_seed
            << " samples=" << r.samples << '\n';
        rows.push_back(std::move(row));
      }
    }
  }
  emit(o.output, out, [&](std::ostream& s) { write_compare_csv(rows, s); });
  std::string agg = o.aggregate;
  if (agg.empty() && !o.output.empty()) agg = o.output + ".aggregate.csv";
  if (!agg.empty()) emit(agg, out, [&](std::ostream& s) { write_aggregate_csv(rows, s); });
}

}  // namespace

Graph load_graph_file(const std::string& path, bool directed) {
  gzFile f = gzopen(path.c_str(), "rb");
  if (!f) throw std::runtime_error("cannot open graph file " + path);
  std::string text;
  char buf[1 << 16];
  int got;
  while ((got = gzread(f, buf, sizeof buf)) > 0) text.append(buf, static_cast<std::size_t>(got));
  const bool failed = got < 0;
  gzclose(f);
  if (failed) throw std::runtime_error("cannot decompress " + path);
  std::istringstream in(text);
  try {
    return load_edge_list(in, directed);
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  o.threads = default_threads();
  CLI::App app{"percolation centrality, exact and approximate"};
  app.option_defaults()->always_capture_default();
  app.require_subcommand(1);

  auto common = [&](CLI::App* sub) {
    sub->add_option("--graph", o.graph, "edge list, optionally gzip-compressed")->required();
    sub->add_flag("--directed", o.directed);
    sub->add_option("--states", o.states, "states file or random:SEED");
    sub->add_option("--threads", o.threads, "worker threads, 0 = hardware (env PERCOLATOR_THREADS)");
    sub->add_option("--output", o.output);
    sub->add_option("--budget", o.budget, "largest n*m for exact computations");
  };
  auto sampling = [&](CLI::App* sub) {
    sub->add_option("--delta", o.delta);
    sub->add_option("--mc-trials", o.mc_trials);
    sub->add_option("--beta", o.beta);
    sub->add_option("--alpha-cap", o.alpha_cap, "largest path bag per pair");
    sub->add_option("--seed", o.seed);
  };

  auto* exact = app.add_subcommand("exact", "exact centralities");
  common(exact);
  o.format = "";
  exact->add_option("--format", o.format)->check(CLI::IsMember({"tsv", "json"}));

  auto* approx = app.add_subcommand("approx", "sampling estimate");
  common(approx);
  sampling(approx);
  approx->add_option("--epsilon", o.epsilon);
  approx->add_option("--algorithm", o.algorithm)->check(CLI::IsMember(kAlgorithms));
  approx->add_option("--format", o.format)->check(CLI::IsMember({"tsv", "json"}));

  auto* compare = app.add_subcommand("compare", "repeated runs against the exact values");
  common(compare);
  sampling(compare);
  compare->add_option("--epsilon", o.epsilons, "epsilon grid")->delimiter(',');
  compare->add_option("--algorithm", o.algorithms)->delimiter(',')->check(CLI::IsMember(kAlgorithms));
  compare->add_option("--reps", o.reps);
  compare->add_flag("--no-exact", o.no_exact);
  compare->add_option("--aggregate", o.aggregate, "aggregate CSV path (default OUTPUT.aggregate.csv)");
  compare->add_option("--format", o.format)->check(CLI::IsMember({"csv"}));

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << '\n';
    return kUsage;
  }

  try {
    if (*exact) cmd_exact(o, out);
    if (*approx) cmd_approx(o, out, err);
    if (*compare) cmd_compare(o, out, err);
  } catch (const BudgetExceeded& e) {
    err << "refused: " << e.what() << '\n';
    return kBudget;
  } catch (const ContractViolation& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kInput;
  }
  return kOk;
}

}  // namespace percolation::cli
