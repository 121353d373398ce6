#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "percolation/graph.hpp"
#include "percolation/percolation_model.hpp"
#include "percolation/rng.hpp"

namespace percolation {

/// Sparse per-vertex values produced by one sample.
using Contribution = std::vector<std::pair<Vertex, double>>;

/// Arc (u, v) joining the two search trees; u is on the s side.
struct CandidateEdge {
  Vertex u;
  Vertex v;
  double weight;  ///< sigma_su * sigma_vz
};

/// Outcome of one balanced bidirectional BFS. Per-vertex arrays are dense
/// (size n); -1 marks vertices the corresponding side never reached.
struct MeetResult {
  Vertex s = 0;
  Vertex z = 0;
  bool connected = false;
  std::uint32_t distance = 0;  ///< d(s, z) when connected
  double sigma_sz = 0.0;
  bool saturated = false;      ///< a path count overflowed to infinity
  std::vector<CandidateEdge> candidates;
  std::vector<double> candidate_prefix;  ///< inclusive prefix sums of weights

  std::vector<std::int32_t> dist_s, dist_z;
  std::vector<double> sigma_s, sigma_z;
};

/// Reusable workspace for repeated searches on one graph.
/// Expands whichever frontier has the smaller degree sum (s side on ties);
/// the z side follows reverse arcs on directed graphs.
class BidirectionalBfs {
 public:
  explicit BidirectionalBfs(const Graph& g);

  const MeetResult& run(Vertex s, Vertex z);
  const MeetResult& result() const noexcept { return meet_; }
  const Graph& graph() const noexcept { return g_; }

 private:
  void reset();
  bool expand_s(std::uint32_t ls, std::uint32_t lz);
  bool expand_z(std::uint32_t ls, std::uint32_t lz);

  const Graph& g_;
  MeetResult meet_;
  std::vector<Vertex> touched_;
  std::vector<Vertex> frontier_s_, frontier_z_, next_;
  std::size_t degsum_s_ = 0, degsum_z_ = 0;
};

/// Convenience wrapper allocating a fresh workspace.
MeetResult balanced_bidirectional_bfs(const Graph& g, Vertex s, Vertex z);

/// Draws one shortest s-z path uniformly from those implied by `meet`.
std::vector<Vertex> sample_path(const Graph& g, const MeetResult& meet, Rng& rng);

/// Bag of shortest paths for one (s, z) pair.
struct PathBag {
  Vertex s = 0;
  Vertex z = 0;
  std::vector<std::vector<Vertex>> paths;
  double requested = 0.0;  ///< ceil(alpha * sigma_sz) before capping
  bool capped = false;
};

inline constexpr std::size_t kDefaultBagCap = std::size_t{1} << 16;

/// Oversampling factor ln(1/beta): a bag of ceil(alpha * sigma) uniform draws
/// misses about e^-alpha of the shortest paths.
inline double alpha_from_beta(double beta) { return std::log(1.0 / beta); }

/// Number of paths drawn for a pair: ceil(alpha * sigma_sz), at least 1, at most `cap`.
std::size_t bag_size(double sigma_sz, double alpha, std::size_t cap, bool* capped = nullptr);

PathBag sample_paths(const Graph& g, const MeetResult& meet, double alpha, Rng& rng,
                     std::size_t cap = kDefaultBagCap);

/// Bag estimator: (occurrences of v as internal vertex / |bag|) * kappa(s, z, v).
/// An empty bag gives an empty contribution.
Contribution bag_estimate(const PathBag& bag, const PercolationModel& model);

/// Ordered pair (s, z), s != z, uniform over all n(n-1) choices.
std::pair<Vertex, Vertex> sample_pair(std::size_t n, Rng& rng);

/// Summary of one drawn sample, independent of which estimator produced it.
struct SampleOutcome {
  Contribution contribution;
  bool connected = false;
  std::uint32_t distance = 0;
  std::size_t bag = 0;
  bool capped = false;
};

/// Draws a uniform pair and produces its bag-of-paths contribution. The bag
/// is skipped when the pair carries no weight (x_s <= x_z), since every
/// term would be zero.
class BagSampler {
 public:
  BagSampler(const Graph& g, const PercolationModel& model, double alpha,
             std::size_t cap = kDefaultBagCap);

  SampleOutcome draw(Rng& rng);
  SampleOutcome draw_pair(Vertex s, Vertex z, Rng& rng);

 private:
  const Graph& g_;
  const PercolationModel& model_;
  double alpha_;
  std::size_t cap_;
  BidirectionalBfs bfs_;
  std::vector<std::uint32_t> counts_;
  std::vector<Vertex> seen_;
};

/// Single-path sampler over all shortest paths (each with mass
/// 1/(n(n-1) sigma_sz)); each internal vertex receives kappa(s, z, v).
class PathSampler {
 public:
  PathSampler(const Graph& g, const PercolationModel& model);
  SampleOutcome draw(Rng& rng);

 private:
  const Graph& g_;
  const PercolationModel& model_;
  BidirectionalBfs bfs_;
};

/// Pair sampler: a BFS from s truncated after z's level, then exact
/// sigma_sz(v)/sigma_sz * kappa(s, z, v) for every v on the s-z DAG.
class PairSampler {
 public:
  PairSampler(const Graph& g, const PercolationModel& model);
  SampleOutcome draw(Rng& rng);
  SampleOutcome contribution(Vertex s, Vertex z);

 private:
  const Graph& g_;
  const PercolationModel& model_;
  std::vector<std::int32_t> dist_;
  std::vector<double> sigma_, sigma_to_z_;
  std::vector<Vertex> order_;
};

}  // namespace percolation
