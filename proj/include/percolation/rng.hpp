#pragma once

#include <cstdint>
#include <random>

namespace percolation {

using Rng = std::mt19937_64;

// SplitMix64 finalizer; used to derive independent seeds from counters.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream,
                                    std::uint64_t index) noexcept {
  return mix64(mix64(master ^ mix64(stream)) ^ mix64(index + 0x632be59bd9b4e019ULL));
}

/// Private generator for one sample; identical for a given (master, stream, index)
/// regardless of which worker draws it.
inline Rng sample_rng(std::uint64_t master, std::uint64_t stream, std::uint64_t index) {
  return Rng(derive_seed(master, stream, index));
}

/// Counter-based Rademacher variable: +1 or -1 keyed by (seed, trial, sample).
/// Growing the sample appends entries without touching earlier ones.
constexpr int rademacher(std::uint64_t seed, std::uint64_t trial, std::uint64_t sample) noexcept {
  return (derive_seed(seed, trial + 0x5bd1e995ULL, sample) >> 63) ? 1 : -1;
}

}  // namespace percolation
