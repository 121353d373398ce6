#pragma once

#include <cstddef>
#include <cstdint>

#include "percolation/graph.hpp"
#include "percolation/percolation_model.hpp"
#include "percolation/progressive.hpp"

namespace percolation {

/// Number of vertices on a longest shortest path, or an upper estimate.
struct VertexDiameter {
  std::size_t value = 2;
  bool exact = false;
};

/// Exact when n*m <= budget. Otherwise, for undirected graphs, 2*ecc(u)+1
/// from one BFS per component (an upper bound); for directed graphs, the
/// largest forward eccentricity over a few sampled sources, plus one.
/// Never less than 2.
VertexDiameter vertex_diameter(const Graph& g, std::uint64_t budget, std::uint64_t seed,
                               unsigned threads = 1);

/// Fixed-size single-path estimator: vd_baseline_sample_size(vd, eps, delta)
/// uniform shortest paths, each internal vertex credited kappa(s, z, v).
RunReport run_prk_fixed(const Graph& g, const PercolationModel& model,
                        const EstimatorConfig& config, std::size_t vd, std::uint64_t seed);

/// Pair estimator on a doubling schedule, stopped by a single-class bound
/// 2 * ERA(delta_i / 2) + 3 sqrt(ln(4 / delta_i) / 2r) with delta_i = delta / 2^i,
/// and capped at the fixed-size baseline.
RunReport run_pab_naive(const Graph& g, const PercolationModel& model,
                        const EstimatorConfig& config, std::size_t vd, std::uint64_t seed);

}  // namespace percolation
