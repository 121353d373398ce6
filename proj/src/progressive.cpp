#include "percolation/progressive.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "percolation/errors.hpp"
#include "sampling_pool.hpp"

namespace percolation {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

}  // namespace

void EstimatorConfig::validate() const {
  require(epsilon > 0.0 && epsilon < 1.0, "epsilon must lie in (0,1)");
  require(delta > 0.0 && delta < 1.0, "delta must lie in (0,1)");
  require(mc_trials >= 1, "at least one Monte-Carlo trial is required");
  require(ratio > 1.0, "schedule ratio must exceed 1");
  require(beta > 0.0 && beta < 1.0, "beta must lie in (0,1)");
  require(bag_cap >= 1, "bag cap must be positive");
}

std::size_t EstimatorConfig::bootstrap_samples() const {
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(std::log(1.0 / delta) / epsilon)));
}

double EstimatorConfig::iteration_delta(std::size_t i) const {
  return delta / std::ldexp(1.0, static_cast<int>(i + 1));
}

std::size_t Schedule::next(std::size_t current) const {
  auto grown = static_cast<std::size_t>(std::ceil(ratio * static_cast<double>(current)));
  grown = std::max(grown, current + 1);
  return std::min(grown, ceiling);
}

std::vector<std::size_t> Schedule::points() const {
  std::vector<std::size_t> out{first};
  while (out.back() < ceiling) out.push_back(next(out.back()));
  return out;
}

Schedule make_schedule(const EstimatorConfig& config, std::size_t ceiling) {
  require(ceiling >= 1, "sample ceiling must be positive");
  Schedule s;
  s.ratio = config.ratio;
  s.ceiling = ceiling;
  s.first = std::min(2 * config.bootstrap_samples(), ceiling);
  return s;
}

const char* to_string(StopReason reason) {
  return reason == StopReason::kEpsilonMet ? "eps-met" : "ceiling-hit";
}

bool stopping_condition(double epsilon, std::span<const double> xi, std::size_t ceiling,
                        std::size_t current) {
  if (current >= ceiling) return true;
  return std::all_of(xi.begin(), xi.end(), [&](double x) { return x <= epsilon; });
}

std::vector<SampleOutcome> draw_bag_samples(const Graph& g, const PercolationModel& model,
                                            double alpha, std::size_t cap, std::uint64_t seed,
                                            SampleStream stream, std::size_t first,
                                            std::size_t count, unsigned threads) {
  detail::SamplingPool<BagSampler> pool(
      threads, [&] { return std::make_unique<BagSampler>(g, model, alpha, cap); });
  return pool.draw(seed, static_cast<std::uint64_t>(stream), first, count);
}

std::vector<double> replay_estimates(std::size_t n, std::span<const Contribution> log) {
  std::vector<double> sum(n, 0.0);
  for (const auto& f : log)
    for (const auto& [v, value] : f) sum[v] += value;
  if (!log.empty())
    for (auto& s : sum) s /= static_cast<double>(log.size());
  return sum;
}

RunReport estimate(const Graph& g, const PercolationModel& model, const EstimatorConfig& config,
                   std::uint64_t seed) {
  config.validate();
  const std::size_t n = g.num_vertices();
  require(n >= 3, "estimation needs at least three vertices");
  require(model.size() == n, "model and graph sizes differ");

  RunReport report;
  report.seed = seed;
  report.config = config;
  report.degenerate_states = model.degenerate();

  const auto start = Clock::now();
  const double eps = config.epsilon;
  detail::SamplingPool<BagSampler> pool(config.threads, [&] {
    return std::make_unique<BagSampler>(g, model, config.alpha(), config.bag_cap);
  });

  // Bootstrap: second moments for peeling and the internal-length estimate.
  const std::size_t boot = config.bootstrap_samples();
  report.bootstrap_samples = boot;
  std::vector<double> boot_sq(n, 0.0);
  double internal = 0.0;
  for (const auto& s : pool.draw(seed, static_cast<std::uint64_t>(SampleStream::kBootstrap), 0, boot)) {
    for (const auto& [v, f] : s.contribution) boot_sq[v] += f * f;
    if (s.connected) internal += static_cast<double>(s.distance) - 1.0;
    report.capped_bags += s.capped ? 1 : 0;
  }
  const Partition partition = empirical_peeling(boot_sq, boot, config.delta, model.kappa_maxes());

  const double pairs = static_cast<double>(n) * static_cast<double>(n - 1);
  auto rho_estimate = [&](std::size_t drawn) {
    double rho = internal / static_cast<double>(boot + drawn);
    report.rho_substituted = rho <= 0.0;
    return rho > 0.0 ? rho : 1.0 / pairs;
  };

  const double var_max = std::min(
      0.25, std::max(eps, *std::max_element(partition.var_bound.begin(), partition.var_bound.end())));
  const double ceiling_delta = config.delta / 2.0;
  report.rho_estimate = rho_estimate(0);
  std::size_t ceiling = sufficient_sample_size(var_max, report.rho_estimate, eps, ceiling_delta);
  Schedule schedule = make_schedule(config, ceiling);
  report.seconds_bootstrap = seconds_since(start);

  // Per-class range caps from kappa_max, used alongside the per-iteration
  // variance estimate.
  std::vector<double> class_range(partition.t, 0.0);
  for (std::size_t v = 0; v < n; ++v) {
    const std::size_t j = partition.class_of[v];
    class_range[j] = std::max(class_range[j], model.kappa_max(static_cast<Vertex>(v)));
  }
  std::size_t active = 0;
  for (auto size : partition.class_size) active += size > 0 ? 1 : 0;

  McEraState state(n, config.mc_trials, derive_seed(seed, static_cast<std::uint64_t>(SampleStream::kLambda), 0));
  report.classes.resize(partition.t);
  for (std::size_t j = 0; j < partition.t; ++j) {
    report.classes[j].size = partition.class_size[j];
    report.classes[j].var_bound = partition.var_bound[j];
    report.classes[j].xi = 1.0;
  }

  const auto loop_start = Clock::now();
  std::size_t drawn = 0;
  std::size_t target = schedule.first;
  std::vector<double> xi;
  while (true) {
    ++report.iterations;
    auto batch = pool.draw(seed, static_cast<std::uint64_t>(SampleStream::kMain), drawn, target - drawn);
    for (auto& s : batch) {
      state.add_sample(s.contribution);
      if (s.connected) internal += static_cast<double>(s.distance) - 1.0;
      report.capped_bags += s.capped ? 1 : 0;
      if (config.keep_sample_log) report.sample_log.push_back(std::move(s.contribution));
    }
    drawn = target;

    // Refresh the internal-length estimate; the ceiling only ever grows.
    report.rho_estimate = rho_estimate(drawn);
    ceiling = std::max(ceiling, sufficient_sample_size(var_max, report.rho_estimate, eps, ceiling_delta));
    schedule.ceiling = ceiling;

    const double delta_i = config.iteration_delta(report.iterations);
    const auto stats = class_statistics(state, partition);
    xi.clear();
    for (std::size_t j = 0; j < partition.t; ++j) {
      auto& cr = report.classes[j];
      cr.wimpy = stats[j].wimpy;
      cr.mcera = stats[j].mcera;
      if (stats[j].size == 0) {
        cr.xi = 0.0;
        continue;
      }
      const double var_hat =
          std::min({0.25, bernstein_upper(stats[j].wimpy, drawn, delta_i / (5.0 * static_cast<double>(active))),
                    class_range[j] * class_range[j] / 4.0});
      // Passing 4 delta_i / 5 turns every ln(4t / delta) into ln(5t / delta_i).
      cr.xi = eps_bound(stats[j].mcera, stats[j].wimpy, var_hat, active, config.mc_trials, drawn,
                        0.8 * delta_i);
      xi.push_back(cr.xi);
    }

    if (stopping_condition(eps, xi, ceiling, drawn)) break;
    target = schedule.next(drawn);
  }

  report.samples = drawn;
  report.ceiling = ceiling;
  report.max_xi = xi.empty() ? 0.0 : *std::max_element(xi.begin(), xi.end());
  report.stop = std::all_of(xi.begin(), xi.end(), [&](double x) { return x <= eps; })
                    ? StopReason::kEpsilonMet
                    : StopReason::kCeilingHit;
  report.estimates.resize(n);
  for (std::size_t v = 0; v < n; ++v)
    report.estimates[v] = state.sum(static_cast<Vertex>(v)) / static_cast<double>(drawn);
  report.seconds_estimation = seconds_since(loop_start);
  return report;
}

}  // namespace percolation
