#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "percolation/graph.hpp"
#include "percolation/path_sampler.hpp"
#include "percolation/percolation_model.hpp"
#include "percolation/rademacher.hpp"

namespace percolation {

struct EstimatorConfig {
  double epsilon = 0.05;
  double delta = 0.1;
  std::size_t mc_trials = 25;
  double ratio = 1.2;  ///< geometric growth of the sample schedule
  double beta = 0.1;   ///< bag oversampling uses alpha = ln(1/beta)
  std::size_t bag_cap = kDefaultBagCap;
  unsigned threads = 1;
  bool keep_sample_log = false;

  /// Throws ContractViolation describing the first invalid field.
  void validate() const;

  double alpha() const { return alpha_from_beta(beta); }
  /// ceil(ln(1/delta) / epsilon)
  std::size_t bootstrap_samples() const;
  /// Confidence spent on the check after iteration i (1-based): delta / 2^(i+1).
  double iteration_delta(std::size_t i) const;
};

/// Geometric schedule r_1 < r_2 < ... capped at `ceiling`.
struct Schedule {
  std::size_t first = 0;
  std::size_t ceiling = 0;
  double ratio = 1.2;

  /// ceil(ratio * current), at least current + 1, never above the ceiling.
  std::size_t next(std::size_t current) const;
  std::vector<std::size_t> points() const;
};

Schedule make_schedule(const EstimatorConfig& config, std::size_t ceiling);

enum class StopReason { kEpsilonMet, kCeilingHit };
const char* to_string(StopReason reason);

/// true iff every class bound is at most epsilon, or the ceiling is reached.
bool stopping_condition(double epsilon, std::span<const double> xi, std::size_t ceiling,
                        std::size_t current);

struct ClassReport {
  std::size_t size = 0;
  double var_bound = 0.0;  ///< from peeling
  double wimpy = 0.0;
  double mcera = 0.0;
  double xi = 0.0;         ///< bound at the final check
};

struct RunReport {
  std::string algorithm = "mcera";
  std::vector<double> estimates;
  std::size_t samples = 0;            ///< samples averaged into the estimates
  std::size_t bootstrap_samples = 0;
  std::size_t iterations = 0;
  std::size_t ceiling = 0;
  std::vector<ClassReport> classes;
  double max_xi = 0.0;
  double rho_estimate = 0.0;
  bool rho_substituted = false;       ///< no sampled pair had internal vertices
  bool degenerate_states = false;     ///< all states equal; every estimate is 0
  std::size_t capped_bags = 0;
  StopReason stop = StopReason::kCeilingHit;
  double seconds_bootstrap = 0.0;
  double seconds_estimation = 0.0;
  std::uint64_t seed = 0;
  EstimatorConfig config;
  /// Per-sample contributions in draw order, when config.keep_sample_log is set.
  std::vector<Contribution> sample_log;
};

/// Progressive-sampling estimate of every vertex's percolation centrality,
/// within epsilon of the exact value with probability at least 1 - delta.
RunReport estimate(const Graph& g, const PercolationModel& model, const EstimatorConfig& config,
                   std::uint64_t seed);

/// Recomputes the estimates as the mean of a persisted sample log.
std::vector<double> replay_estimates(std::size_t n, std::span<const Contribution> log);

/// Sample streams; sample i of a stream is reproducible from (seed, stream, i).
enum class SampleStream : std::uint64_t { kBootstrap = 1, kMain = 2, kLambda = 3 };

/// Draws `count` bag samples with indices [first, first + count) in
/// parallel. The result is ordered by index and independent of `threads`.
std::vector<SampleOutcome> draw_bag_samples(const Graph& g, const PercolationModel& model,
                                            double alpha, std::size_t cap, std::uint64_t seed,
                                            SampleStream stream, std::size_t first,
                                            std::size_t count, unsigned threads);

}  // namespace percolation
