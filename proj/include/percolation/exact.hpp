#pragma once

#include <cstddef>
#include <vector>

#include "percolation/graph.hpp"
#include "percolation/percolation_model.hpp"

namespace percolation {

/// Ground truth for one (graph, states) instance. Centralities carry the
/// 1/(n(n-1)) prefactor so that sum_p <= sum_b <= rho is directly comparable.
struct ExactResult {
  std::vector<double> p;       ///< percolation centrality
  std::vector<double> b;       ///< betweenness
  double rho = 0.0;            ///< mean number of internal vertices over ordered pairs
  std::size_t diameter = 0;    ///< largest finite distance
  std::size_t vertex_diameter = 1;
  double sum_p = 0.0;
  double sum_b = 0.0;
};

/// One BFS per source with weighted dependency accumulation; O(nm) total.
/// Sources are split into a fixed number of blocks reduced in order, so the
/// result does not depend on `threads`. 0 means hardware parallelism.
ExactResult exact_centralities(const Graph& g, const PercolationModel& model, unsigned threads = 1);

std::vector<double> exact_percolation(const Graph& g, const PercolationModel& model,
                                      unsigned threads = 1);
std::vector<double> exact_betweenness(const Graph& g, unsigned threads = 1);

struct DistanceSummary {
  double rho = 0.0;
  std::size_t diameter = 0;
};
DistanceSummary exact_rho_and_diameter(const Graph& g, unsigned threads = 1);

/// Independent oracle: enumerates every shortest path explicitly and sums
/// kappa per internal vertex. Throws OracleAbort once more than `path_cap`
/// paths have been enumerated. Meant for graphs with a few dozen vertices.
std::vector<double> brute_force_percolation(const Graph& g, const PercolationModel& model,
                                            std::size_t path_cap = 5'000'000);

}  // namespace percolation
