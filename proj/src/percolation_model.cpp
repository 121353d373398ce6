#include "percolation/percolation_model.hpp"

#include <algorithm>
#include <numeric>
#include <random>

#include "percolation/errors.hpp"

namespace percolation {

namespace {

void check_states(std::span<const double> states) {
  for (double x : states)
    if (!(x >= 0.0 && x <= 1.0)) throw ContractViolation("percolation state outside [0,1]");
}

}  // namespace

PercolationSums percolation_differences(std::span<const double> states) {
  check_states(states);
  const std::size_t n = states.size();
  PercolationSums out;
  out.minus.assign(n, 0.0);
  if (n < 2) return out;

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return states[a] < states[b]; });

  // Shift by the minimum so an all-equal vector sums to exactly zero.
  const double base = states[order.front()];
  std::vector<double> sorted(n);
  for (std::size_t i = 0; i < n; ++i) sorted[i] = states[order[i]] - base;

  // prefix[i] = sorted[0] + ... + sorted[i-1]
  std::vector<double> prefix(n + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) prefix[i + 1] = prefix[i] + sorted[i];

  // below[i] = sum_j R(a_i - a_j), above[i] = sum_j R(a_j - a_i)
  std::vector<double> below(n), above(n);
  for (std::size_t i = 0; i < n; ++i) {
    below[i] = static_cast<double>(i) * sorted[i] - prefix[i];
    above[i] = (prefix[n] - prefix[i + 1]) - static_cast<double>(n - 1 - i) * sorted[i];
    out.total += below[i];
  }

  const double lo = sorted.front(), hi = sorted.back();
  for (std::size_t i = 0; i < n; ++i) {
    // Excluding position i, the rest is constant iff its own extremes meet.
    const double rest_lo = i == 0 ? sorted[1] : lo;
    const double rest_hi = i == n - 1 ? sorted[n - 2] : hi;
    double m = rest_lo == rest_hi ? 0.0 : out.total - below[i] - above[i];
    out.minus[order[i]] = std::max(0.0, m);
  }
  return out;
}

PercolationModel::PercolationModel(std::vector<double> states) : states_(std::move(states)) {
  auto sums = percolation_differences(states_);
  total_ = sums.total;
  minus_ = std::move(sums.minus);

  const std::size_t n = states_.size();
  kappa_max_.assign(n, 0.0);
  if (n < 3) return;
  // Two smallest and two largest states give the range with any one vertex removed.
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return states_[a] < states_[b]; });
  for (std::size_t v = 0; v < n; ++v) {
    if (minus_[v] == 0.0) continue;
    double lo = states_[order[0] == v ? order[1] : order[0]];
    double hi = states_[order[n - 1] == v ? order[n - 2] : order[n - 1]];
    kappa_max_[v] = std::min(1.0, ramp(hi - lo) / minus_[v]);
  }
}

double PercolationModel::kappa(Vertex s, Vertex z, Vertex v) const {
  require(s < size() && z < size() && v < size(), "vertex out of range");
  require(s != v && z != v && s != z, "kappa requires distinct s, z, v");
  return kappa_unchecked(s, z, v);
}

std::vector<double> random_states(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  std::vector<double> x(n);
  for (auto& v : x) v = uniform(rng);
  return x;
}

}  // namespace percolation
