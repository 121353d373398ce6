#include "percolation/baselines.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <queue>

#include "percolation/errors.hpp"
#include "percolation/exact.hpp"
#include "percolation/rademacher.hpp"
#include "sampling_pool.hpp"

namespace percolation {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// Forward BFS from `src`; returns the eccentricity and marks reached vertices.
std::size_t eccentricity(const Graph& g, Vertex src, std::vector<std::int32_t>& dist,
                         std::vector<Vertex>& queue) {
  queue.clear();
  queue.push_back(src);
  dist[src] = 0;
  std::size_t ecc = 0;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    Vertex u = queue[head];
    for (Vertex w : g.out_neighbors(u)) {
      if (dist[w] >= 0) continue;
      dist[w] = dist[u] + 1;
      ecc = std::max(ecc, static_cast<std::size_t>(dist[w]));
      queue.push_back(w);
    }
  }
  return ecc;
}

void check_common(const Graph& g, const PercolationModel& model, const EstimatorConfig& config) {
  config.validate();
  require(g.num_vertices() >= 3, "estimation needs at least three vertices");
  require(model.size() == g.num_vertices(), "model and graph sizes differ");
}

}  // namespace

VertexDiameter vertex_diameter(const Graph& g, std::uint64_t budget, std::uint64_t seed,
                               unsigned threads) {
  const std::size_t n = g.num_vertices();
  VertexDiameter out;
  if (n == 0) return out;
  const double work = static_cast<double>(n) * static_cast<double>(std::max<std::size_t>(1, g.num_edges()));
  if (work <= static_cast<double>(budget)) {
    out.value = std::max<std::size_t>(2, exact_rho_and_diameter(g, threads).diameter + 1);
    out.exact = true;
    return out;
  }

  std::vector<std::int32_t> dist(n, -1);
  std::vector<Vertex> queue;
  std::size_t best = 0;
  if (!g.directed()) {
    for (Vertex v = 0; v < n; ++v) {
      if (dist[v] >= 0) continue;
      best = std::max(best, 2 * eccentricity(g, v, dist, queue) + 1);
    }
  } else {
    Rng rng = sample_rng(seed, 0x7664, 0);
    std::uniform_int_distribution<Vertex> pick(0, static_cast<Vertex>(n - 1));
    for (int i = 0; i < 16; ++i) {
      std::fill(dist.begin(), dist.end(), -1);
      best = std::max(best, eccentricity(g, pick(rng), dist, queue) + 1);
    }
  }
  out.value = std::max<std::size_t>(2, best);
  return out;
}

RunReport run_prk_fixed(const Graph& g, const PercolationModel& model,
                        const EstimatorConfig& config, std::size_t vd, std::uint64_t seed) {
  check_common(g, model, config);
  const std::size_t n = g.num_vertices();
  RunReport report;
  report.algorithm = "p-rk-fixed";
  report.seed = seed;
  report.config = config;
  report.degenerate_states = model.degenerate();

  const auto start = Clock::now();
  const std::size_t r = vd_baseline_sample_size(vd, config.epsilon, config.delta);
  detail::SamplingPool<PathSampler> pool(
      config.threads, [&] { return std::make_unique<PathSampler>(g, model); });
  std::vector<double> sum(n, 0.0);
  double internal = 0.0;
  for (auto& s : pool.draw(seed, static_cast<std::uint64_t>(SampleStream::kMain), 0, r)) {
    for (const auto& [v, f] : s.contribution) sum[v] += f;
    if (s.connected) internal += static_cast<double>(s.distance) - 1.0;
    if (config.keep_sample_log) report.sample_log.push_back(std::move(s.contribution));
  }
  report.estimates.resize(n);
  for (std::size_t v = 0; v < n; ++v) report.estimates[v] = sum[v] / static_cast<double>(r);
  report.samples = r;
  report.ceiling = r;
  report.iterations = 1;
  report.rho_estimate = internal / static_cast<double>(r);
  report.stop = StopReason::kCeilingHit;
  report.seconds_estimation = seconds_since(start);
  return report;
}

RunReport run_pab_naive(const Graph& g, const PercolationModel& model,
                        const EstimatorConfig& config, std::size_t vd, std::uint64_t seed) {
  check_common(g, model, config);
  const std::size_t n = g.num_vertices();
  RunReport report;
  report.algorithm = "p-ab-progressive-naive";
  report.seed = seed;
  report.config = config;
  report.degenerate_states = model.degenerate();

  const auto start = Clock::now();
  const std::size_t ceiling = vd_baseline_sample_size(vd, config.epsilon, config.delta);
  detail::SamplingPool<PairSampler> pool(
      config.threads, [&] { return std::make_unique<PairSampler>(g, model); });

  Partition single;
  single.t = 1;
  single.class_of.assign(n, 0);
  single.class_size.assign(1, n);
  single.var_bound.assign(1, 0.25);
  McEraState state(n, config.mc_trials, derive_seed(seed, static_cast<std::uint64_t>(SampleStream::kLambda), 0));

  double internal = 0.0;
  std::size_t drawn = 0;
  std::size_t target = std::min(config.bootstrap_samples(), ceiling);
  double xi = 1.0;
  ClassReport cls;
  cls.size = n;
  cls.var_bound = 0.25;
  while (true) {
    ++report.iterations;
    for (auto& s : pool.draw(seed, static_cast<std::uint64_t>(SampleStream::kMain), drawn, target - drawn)) {
      state.add_sample(s.contribution);
      if (s.connected) internal += static_cast<double>(s.distance) - 1.0;
      if (config.keep_sample_log) report.sample_log.push_back(std::move(s.contribution));
    }
    drawn = target;
    const double delta_i = config.delta / std::ldexp(1.0, static_cast<int>(report.iterations));
    const auto stats = class_statistics(state, single);
    const double r = static_cast<double>(drawn);
    xi = 2.0 * era_upper_bound(stats[0].mcera, stats[0].wimpy, config.mc_trials, drawn, delta_i / 2.0) +
         3.0 * std::sqrt(std::log(4.0 / delta_i) / (2.0 * r));
    cls.wimpy = stats[0].wimpy;
    cls.mcera = stats[0].mcera;
    cls.xi = xi;
    if (xi <= config.epsilon || drawn >= ceiling) break;
    target = std::min(2 * drawn, ceiling);
  }

  report.classes = {cls};
  report.max_xi = xi;
  report.samples = drawn;
  report.ceiling = ceiling;
  report.rho_estimate = internal / static_cast<double>(drawn);
  report.stop = xi <= config.epsilon ? StopReason::kEpsilonMet : StopReason::kCeilingHit;
  report.estimates.resize(n);
  for (std::size_t v = 0; v < n; ++v)
    report.estimates[v] = state.sum(static_cast<Vertex>(v)) / static_cast<double>(drawn);
  report.seconds_estimation = seconds_since(start);
  return report;
}

}  // namespace percolation
