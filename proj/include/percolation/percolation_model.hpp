#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "percolation/graph.hpp"

namespace percolation {

inline double ramp(double x) noexcept { return x > 0.0 ? x : 0.0; }

struct PercolationSums {
  double total = 0.0;          ///< sum over all ordered pairs of R(x_u - x_w)
  std::vector<double> minus;   ///< same sum restricted to pairs avoiding v
};

/// Ramp sums over all ordered pairs, in O(n log n): one sort plus prefix
/// sums. `minus[v]` is indexed by the caller's vertex order.
PercolationSums percolation_differences(std::span<const double> states);

/// Percolation states plus the per-vertex normalisers they induce.
/// Immutable after construction.
class PercolationModel {
 public:
  PercolationModel() = default;
  explicit PercolationModel(std::vector<double> states);

  std::size_t size() const noexcept { return states_.size(); }
  double state(Vertex v) const { return states_[v]; }
  std::span<const double> states() const noexcept { return states_; }
  double total() const noexcept { return total_; }
  double minus_sum(Vertex v) const { return minus_[v]; }
  std::span<const double> minus_sums() const noexcept { return minus_; }

  /// True when every state is equal, so every weight is zero.
  bool degenerate() const noexcept { return total_ == 0.0; }

  /// R(x_s - x_z) / minus_s[v]; 0 when minus_s[v] is 0.
  double kappa(Vertex s, Vertex z, Vertex v) const;

  /// Same as kappa() without the distinctness check; for inner loops.
  double kappa_unchecked(Vertex s, Vertex z, Vertex v) const noexcept {
    double num = ramp(states_[s] - states_[z]);
    return (num == 0.0 || minus_[v] == 0.0) ? 0.0 : num / minus_[v];
  }

  /// Largest kappa(s, z, v) over all admissible (s, z); every sampled
  /// contribution to v lies in [0, kappa_max(v)].
  double kappa_max(Vertex v) const { return kappa_max_[v]; }
  std::span<const double> kappa_maxes() const noexcept { return kappa_max_; }

 private:
  std::vector<double> states_;
  std::vector<double> minus_;
  std::vector<double> kappa_max_;
  double total_ = 0.0;
};

/// i.i.d. uniform [0,1] states from a seeded generator.
std::vector<double> random_states(std::size_t n, std::uint64_t seed);

}  // namespace percolation
