// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "generators.hpp"
#include "oracles.hpp"
#include "percolation/baselines.hpp"
#include "percolation/exact.hpp"
#include "percolation/path_sampler.hpp"
#include "percolation/percolation_model.hpp"
#include "percolation/progressive.hpp"
#include "percolation/rademacher.hpp"
#include "percolation/report.hpp"

using namespace percolation;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

std::string slurp(const std::string& path) {
  std::ifstream f(path);
  std::stringstream s;
  s << f.rdbuf();
  return s.str();
}

// Small-world graph with each lattice edge oriented at random, sometimes both ways.
Graph directed_small_world(std::size_t n, std::uint64_t seed) {
  Graph base = testing::watts_strogatz(n, 2, 0.2, seed);
  std::mt19937_64 rng(seed ^ 0xabcdefULL);
  std::bernoulli_distribution coin(0.5);
  std::vector<std::pair<Vertex, Vertex>> arcs;
  for (auto [u, v] : base.edge_list()) {
    if (coin(rng)) std::swap(u, v);
    arcs.emplace_back(u, v);
    if (coin(rng)) arcs.emplace_back(v, u);
  }
  return Graph::from_edges(n, arcs, true);
}

std::vector<double> random_tied_states(std::size_t n, std::uint64_t seed, bool ties) {
  auto x = random_states(n, seed);
  if (ties)
    for (auto& v : x) v = std::round(v * 10.0) / 10.0;
  return x;
}

// The shared pool of small random instances for the first and third criteria.
struct Instance {
  std::string name;
  Graph g;
  std::vector<double> states;
};

std::vector<Instance> small_instances() {
  std::vector<Instance> out;
  for (std::uint64_t i = 0; i < 210; ++i) {
    const std::size_t n = 8 + (i * 7) % 43;
    Graph g;
    std::string name;
    switch (i % 4) {
      case 0: g = testing::erdos_renyi(n, 3.0 / n, i, false), name = "er"; break;
      case 1: g = testing::erdos_renyi(n, 3.0 / n, i, true), name = "er-dir"; break;
      case 2: g = testing::watts_strogatz(n, 2, 0.2, i), name = "ws"; break;
      default: g = directed_small_world(n, i), name = "ws-dir"; break;
    }
    out.push_back({fmt("%s-%zu-%llu", name.c_str(), n, static_cast<unsigned long long>(i)), std::move(g),
                   random_tied_states(n, 1000 + i, i % 5 == 0)});
  }
  return out;
}

Outcome oracle_equivalence() {
  double worst = 0.0;
  std::size_t graphs = 0, bad = 0;
  for (const auto& inst : small_instances()) {
    PercolationModel m(inst.states);
    auto fast = exact_percolation(inst.g, m);
    auto slow = brute_force_percolation(inst.g, m);
    double d = 0.0;
    for (std::size_t v = 0; v < fast.size(); ++v) d = std::max(d, std::abs(fast[v] - slow[v]));
    worst = std::max(worst, d);
    bad += d > 1e-9;
    ++graphs;
  }
  return {graphs >= 200 && bad == 0, fmt("%zu graphs, worst abs diff %.3g", graphs, worst)};
}

Outcome ramp_sums() {
  std::mt19937_64 rng(77);
  double worst = 0.0;
  std::size_t vectors = 0;
  bool ok = true;
  for (int i = 0; i < 110; ++i) {
    std::size_t n = i < 100 ? 1 + rng() % 300 : 1000 + rng() % 1001;
    std::vector<double> x = random_tied_states(n, rng(), i % 3 == 0);
    if (i % 10 == 7) std::fill(x.begin(), x.end(), 0.42);
    if (i % 10 == 8) x = {0.5, 0.5, 0.5, 0.5};
    auto fast = percolation_differences(x);
    auto slow = testing::brute_ramp_sums(x);
    auto rel = [&](double a, double b) {
      const double scale = std::max(std::abs(b), 1e-300);
      return a == b ? 0.0 : std::abs(a - b) / scale;
    };
    double d = rel(fast.total, slow.total);
    for (std::size_t v = 0; v < x.size(); ++v) d = std::max(d, rel(fast.minus[v], slow.minus[v]));
    worst = std::max(worst, d);
    ok &= d <= 1e-9;
    ++vectors;
  }
  return {ok, fmt("%zu state vectors, worst rel diff %.3g", vectors, worst)};
}

Outcome sum_chain() {
  // Path 0-1-2 with states (1, 1/2, 0), worked by hand.
  Graph path = testing::path_graph(3);
  auto hand = exact_centralities(path, PercolationModel({1.0, 0.5, 0.0}));
  bool ok = std::abs(hand.p[0]) <= 1e-12 && std::abs(hand.p[1] - 1.0 / 6.0) <= 1e-12 &&
            std::abs(hand.p[2]) <= 1e-12 && std::abs(hand.b[1] - 1.0 / 3.0) <= 1e-12 &&
            std::abs(hand.b[0]) <= 1e-12 && std::abs(hand.b[2]) <= 1e-12 &&
            std::abs(hand.rho - 1.0 / 3.0) <= 1e-12;

  std::vector<Instance> all = small_instances();
  all.push_back({"star", testing::star_graph(9), random_states(10, 3)});
  all.push_back({"diamond", testing::diamond_chain(4), random_states(13, 4)});
  all.push_back({"complete", testing::complete_graph(7), random_states(7, 5)});
  all.push_back({"er-1000", testing::erdos_renyi(1000, 0.01, 1), random_states(1000, 1)});
  std::size_t checked = 0, bad = 0;
  double tightest = 1.0;
  for (const auto& inst : all) {
    auto r = exact_centralities(inst.g, PercolationModel(inst.states));
    bad += !(r.sum_p <= r.sum_b + 1e-9 && r.sum_b <= r.rho + 1e-9);
    tightest = std::min(tightest, r.rho - r.sum_b);
    ++checked;
  }
  return {ok && bad == 0, fmt("hand case %s, %zu graphs, min rho - sum_b %.3g", ok ? "ok" : "WRONG", checked, tightest)};
}

Outcome sampler_correctness() {
  std::size_t pairs = 0, mismatches = 0;
  for (std::uint64_t i = 0; i < 50; ++i) {
    const std::size_t n = 15 + i % 20;
    Graph g = i % 3 == 0 ? testing::watts_strogatz(n, 2, 0.3, i)
                         : testing::erdos_renyi(n, 2.5 / n, i, i % 2 == 1);
    BidirectionalBfs bfs(g);
    for (Vertex s = 0; s < n; ++s) {
      auto truth = testing::single_source(g, s);
      for (Vertex z = 0; z < n; ++z) {
        if (s == z) continue;
        const auto& meet = bfs.run(s, z);
        const bool reach = truth.dist[z] >= 0;
        mismatches += meet.connected != reach || (reach && meet.sigma_sz != truth.sigma[z]);
        ++pairs;
      }
    }
  }

  // Two shortest paths 0-1-2 and 0-3-2; one degree of freedom, |z| <= 3.
  Graph c4 = testing::cycle_graph(4);
  auto meet = balanced_bidirectional_bfs(c4, 0, 2);
  Rng rng(4242);
  const int draws = 10000;
  int via_one = 0;
  for (int i = 0; i < draws; ++i) via_one += sample_path(c4, meet, rng)[1] == 1;
  const double expect = draws / 2.0;
  const double chi2 = 2.0 * (via_one - expect) * (via_one - expect) / expect;

  const double alpha = alpha_from_beta(0.1);
  Graph chain = testing::diamond_chain(7);
  auto big = balanced_bidirectional_bfs(chain, 0, 21);
  double missed = 0.0;
  const int bags = 400;
  for (int b = 0; b < bags; ++b) {
    std::set<std::vector<Vertex>> seen;
    for (auto& p : sample_paths(chain, big, alpha, rng).paths) seen.insert(std::move(p));
    missed += 1.0 - static_cast<double>(seen.size()) / big.sigma_sz;
  }
  missed /= bags;
  const bool ok = mismatches == 0 && chi2 <= 9.0 && big.sigma_sz >= 100 && std::abs(missed - std::exp(-alpha)) <= 0.02;
  return {ok, fmt("%zu pairs, %zu sigma mismatches; 4-cycle chi2 %.3f; unsampled %.4f vs %.4f (sigma %.0f)", pairs,
                  mismatches, chi2, missed, std::exp(-alpha), big.sigma_sz)};
}

Outcome unbiasedness() {
  struct Case {
    Graph g;
    std::vector<double> x;
  };
  std::vector<Case> cases;
  cases.push_back({testing::diamond_chain(3), random_states(10, 21)});
  cases.push_back({testing::watts_strogatz(12, 2, 0.3, 4), random_states(12, 22)});
  cases.push_back({testing::erdos_renyi(12, 0.3, 5, true), random_states(12, 23)});
  const std::size_t samples = 2'000'000;
  double worst_z = 0.0;
  bool ok = true;
  for (std::size_t c = 0; c < cases.size(); ++c) {
    const Graph& g = cases[c].g;
    PercolationModel m(cases[c].x);
    auto exact = exact_percolation(g, m);
    BagSampler bag(g, m, alpha_from_beta(0.1));
    const std::size_t n = g.num_vertices();
    std::vector<double> sum(n, 0.0), sq(n, 0.0);
    for (std::size_t i = 0; i < samples; ++i) {
      Rng rng = sample_rng(900 + c, 0, i);
      for (auto [v, f] : bag.draw(rng).contribution) {
        sum[v] += f;
        sq[v] += f * f;
      }
    }
    for (std::size_t v = 0; v < n; ++v) {
      const double mean = sum[v] / samples;
      const double var = std::max(0.0, sq[v] / samples - mean * mean);
      const double se = std::sqrt(var / samples);
      const double gap = std::abs(mean - exact[v]);
      if (se == 0.0) {
        ok &= gap <= 1e-15;
        continue;
      }
      worst_z = std::max(worst_z, gap / se);
      ok &= gap <= 3.0 * se;
    }
  }
  return {ok, fmt("3 graphs, %zu samples each, worst |mean - p| = %.2f standard errors", samples, worst_z)};
}

Outcome variance_ordering() {
  std::vector<std::pair<Graph, std::vector<double>>> cases;
  cases.emplace_back(testing::cycle_graph(6), random_states(6, 31));
  cases.emplace_back(testing::diamond_chain(3), random_states(10, 32));
  cases.emplace_back(testing::watts_strogatz(12, 2, 0.3, 4), random_states(12, 33));
  cases.emplace_back(testing::erdos_renyi(12, 0.3, 5, true), random_states(12, 34));
  bool ordered = true;
  std::size_t strict = 0, vertices = 0;
  for (const auto& [g, x] : cases) {
    PercolationModel m(x);
    const std::size_t n = g.num_vertices();
    const double pairs = static_cast<double>(n * (n - 1));
    std::vector<double> mean_rk(n, 0.0), sq_rk(n, 0.0), mean_ab(n, 0.0), sq_ab(n, 0.0);
    PairSampler pab(g, m);
    for (Vertex s = 0; s < n; ++s)
      for (Vertex z = 0; z < n; ++z) {
        if (s == z) continue;
        auto paths = testing::all_shortest_paths(g, s, z);
        for (const auto& p : paths)
          for (std::size_t i = 1; i + 1 < p.size(); ++i) {
            const double k = m.kappa(s, z, p[i]);
            const double w = 1.0 / (pairs * static_cast<double>(paths.size()));
            mean_rk[p[i]] += w * k;
            sq_rk[p[i]] += w * k * k;
          }
        for (auto [v, f] : pab.contribution(s, z).contribution) {
          mean_ab[v] += f / pairs;
          sq_ab[v] += f * f / pairs;
        }
      }
    for (std::size_t v = 0; v < n; ++v) {
      const double var_rk = sq_rk[v] - mean_rk[v] * mean_rk[v];
      const double var_ab = sq_ab[v] - mean_ab[v] * mean_ab[v];
      ordered &= std::abs(mean_rk[v] - mean_ab[v]) <= 1e-12 && var_ab <= var_rk + 1e-15;
      strict += var_rk - var_ab > 1e-9 * std::max(var_rk, 1e-300);
      ++vertices;
    }
  }
  return {ordered && strict > 0, fmt("%zu vertices on %zu graphs, strictly smaller on %zu", vertices, cases.size(), strict)};
}

Outcome guarantee() {
  Graph g = testing::erdos_renyi(1000, 0.01, 1);
  PercolationModel m(random_states(1000, 1));
  auto exact = exact_percolation(g, m, 0);
  EstimatorConfig c;
  c.epsilon = 0.05;
  c.delta = 0.1;
  c.threads = 0;
  int within = 0;
  double worst = 0.0;
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    auto r = estimate(g, m, c, seed);
    const double d = deviation(r.estimates, exact).first;
    worst = std::max(worst, d);
    within += d <= c.epsilon;
  }
  return {within >= 42, fmt("%d/50 runs within 0.05, largest deviation %.3g", within, worst)};
}

Outcome fewer_samples() {
  struct Named {
    const char* name;
    Graph g;
  };
  std::vector<Named> graphs;
  graphs.push_back({"er-1000", testing::erdos_renyi(1000, 0.01, 1)});
  graphs.push_back({"ws-5000", testing::watts_strogatz(5000, 3, 0.1, 2)});
  bool ok = true;
  std::string detail;
  for (const auto& [name, g] : graphs) {
    const std::size_t n = g.num_vertices();
    PercolationModel m(random_states(n, 7));
    const std::size_t vd = vertex_diameter(g, ~0ULL, 1, 0).value;
    for (double eps : {0.05, 0.01}) {
      EstimatorConfig c;
      c.epsilon = eps;
      c.threads = 0;
      const std::size_t baseline = vd_baseline_sample_size(vd, eps, c.delta);
      std::size_t largest = 0;
      for (std::uint64_t seed = 1; seed <= 3; ++seed) {
        const std::size_t r = estimate(g, m, c, seed).samples;
        largest = std::max(largest, r);
        ok &= r < baseline;
      }
      detail += fmt("%s eps=%g: %zu < %zu; ", name, eps, largest, baseline);
    }
  }
  detail.resize(detail.size() - 2);
  return {ok, "VD from exact BFS; largest r over 3 seeds vs fixed size: " + detail};
}

// Independent evaluation of the bound for one class with inputs (Rc, W, v, t, c, r, delta).
double xi_oracle(double rc, double w, double v, double t, double c, double r, double delta) {
  const double l = std::log(4.0 * t / delta);
  const double rt = std::max(0.0, rc + std::sqrt(4.0 * w * l / (c * r)));
  const double ri = rt + l / r + std::sqrt((l / r) * (l / r) + 2.0 * l * rt / r);
  return 2.0 * ri + std::sqrt(2.0 * (l / r) * (v + 4.0 * ri)) + l / (3.0 * r);
}

// Grid search for the numeric sample size; coarse but independent of the bisection.
double numeric_size_oracle(double v, double psi, double eps, double delta) {
  auto g = [](double x) { return x * (1.0 - x); };
  auto h = [](double x) { return (1.0 + x) * std::log1p(x) - x; };
  auto lhs = [&](double x) { return g(x) * h(eps / g(x)); };
  const int steps = 2'000'000;
  double x1 = 0.5;
  for (int i = steps; i >= 1; --i) {
    const double x = 0.5 * i / steps;
    if (lhs(x) > 2.0 * eps * eps) break;
    x1 = x;
  }
  const double xh = std::min(x1, 0.5 - std::sqrt(std::max(0.0, 0.25 - v)));
  double best = 0.0;
  for (int i = 1; i < steps; ++i) {
    const double x = xh * i / steps;
    best = std::max(best, std::max(0.0, std::log(2.0 * psi * xh / (x * delta))) / lhs(x));
  }
  return best;
}

Outcome bound_formulas() {
  const double xi = eps_bound(0.0, 0.0, 0.25, 1, 25, 100, 0.1);
  const double xi_ref = xi_oracle(0.0, 0.0, 0.25, 1, 25, 100, 0.1);
  bool ok = std::abs(xi - xi_ref) <= 1e-6 && std::abs(xi - 0.36039) <= 1e-5;
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    const double rc = 0.05 * u(rng) - 0.01, w = 0.25 * u(rng), v = 0.25 * u(rng);
    const std::size_t t = 1 + rng() % 8, r = 10 + rng() % 100000;
    const double d = 0.01 + 0.3 * u(rng);
    ok &= std::abs(eps_bound(rc, w, v, t, 25, r, d) - xi_oracle(rc, w, v, t, 25, r, d)) <= 1e-6;
  }
  const double closed = sample_size_closed_form(0.25, 3.97, 0.05, 0.1);
  const double closed_ref = (2.0 * 0.25 + 2.0 * 0.05 / 3.0) / (0.05 * 0.05) * (std::log(2.0 * 3.97 / 0.25) + std::log(10.0));
  const double numeric = sample_size_numeric(0.25, 3.97, 0.05, 0.1);
  const double numeric_ref = numeric_size_oracle(0.25, 3.97, 0.05, 0.1);
  const std::size_t size = sufficient_sample_size(0.25, 3.97, 0.05, 0.1);
  ok &= std::abs(closed - closed_ref) <= 1e-6 && std::abs(numeric - numeric_ref) <= 1e-3 * numeric_ref &&
        size == static_cast<std::size_t>(std::ceil(std::max(closed_ref, numeric_ref))) && size == 1229;
  return {ok, fmt("xi %.9f (oracle %.9f); closed form %.6f, numeric %.3f (grid %.3f), r = %zu", xi, xi_ref, closed,
                  numeric, numeric_ref, size)};
}

Outcome determinism() {
  bool ok = true;
  std::string detail;
  Graph g = testing::erdos_renyi(300, 0.02, 9);
  PercolationModel m(random_states(300, 9));
  EstimatorConfig c;
  c.epsilon = 0.05;
  auto a = estimate(g, m, c, 123), b = estimate(g, m, c, 123);
  ok &= a.estimates == b.estimates && a.samples == b.samples;
  const std::size_t vd = vertex_diameter(g, ~0ULL, 1).value;
  ok &= run_prk_fixed(g, m, c, vd, 5).estimates == run_prk_fixed(g, m, c, vd, 5).estimates;
  ok &= run_pab_naive(g, m, c, vd, 5).estimates == run_pab_naive(g, m, c, vd, 5).estimates;
  detail += ok ? "same-seed runs identical" : "same-seed runs DIFFER";

  auto run = [](std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = cli::run_cli(args, out, err);
    return code == 0 ? out.str() : std::string("exit ") + std::to_string(code);
  };
  const std::string graph = GOLDEN_DIR "/small.txt", states = GOLDEN_DIR "/small_states.txt";
  const bool tsv = run({"exact", "--graph", graph, "--states", states, "--threads", "1"}) ==
                   slurp(GOLDEN_DIR "/small_exact.tsv");
  bool json = false;
  try {
    auto got = nlohmann::json::parse(run({"approx", "--graph", graph, "--states", states, "--seed", "11",
                                          "--threads", "1", "--epsilon", "0.1"}));
    got.erase("seconds_bootstrap");
    got.erase("seconds_estimation");
    json = got == nlohmann::json::parse(slurp(GOLDEN_DIR "/small_approx.json"));
  } catch (const std::exception&) {
  }
  std::vector<CompareRow> rows{
      {"mcera", 0.05, 0, 420, 0.25, 1e-10, 2.5e-11},
      {"p-rk-fixed", 0.05, 0, 1061, 0.5, 3e-10, 5e-11},
      {"mcera", 0.05, 1, 418, 0.75, 2e-10, 3.5e-11},
      {"p-rk-fixed", 0.05, 1, 1061, 0.5, std::nullopt, std::nullopt},
  };
  std::stringstream raw, agg;
  write_compare_csv(rows, raw);
  write_aggregate_csv(rows, agg);
  const bool csv = raw.str() == slurp(GOLDEN_DIR "/compare.csv") && agg.str() == slurp(GOLDEN_DIR "/aggregate.csv");
  ok &= tsv && json && csv;
  detail += fmt("; golden tsv %s, json %s, csv %s", tsv ? "ok" : "DIFF", json ? "ok" : "DIFF", csv ? "ok" : "DIFF");
  return {ok, detail};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"exact engine matches path enumeration", oracle_equivalence},
      {"ramp sums match the quadratic oracle", ramp_sums},
      {"sum p <= sum b <= rho", sum_chain},
      {"sampler correctness", sampler_correctness},
      {"bag estimator is unbiased", unbiasedness},
      {"pair sampler variance <= path sampler variance", variance_ordering},
      {"(epsilon, delta) guarantee on ER-1000", guarantee},
      {"fewer samples than the fixed-size baseline", fewer_samples},
      {"bound formulas", bound_formulas},
      {"determinism and golden files", determinism},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s %2zu %s: %s (%.1fs)\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.c_str(), secs);
    std::fflush(stdout);
    failures += !o.pass;
  }
  return failures == 0 ? 0 : 1;
}
