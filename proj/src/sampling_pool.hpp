#pragma once

#include <memory>
#include <vector>

#include "percolation/parallel.hpp"
#include "percolation/path_sampler.hpp"
#include "percolation/rng.hpp"

namespace percolation::detail {

// One sampler per worker, reused across batches. Sample i always uses the
// generator derived from (seed, stream, i), so output does not depend on
// which worker drew it.
template <typename Sampler>
class SamplingPool {
 public:
  template <typename Factory>
  SamplingPool(unsigned threads, Factory&& make) : threads_(resolve_threads(threads)) {
    for (unsigned t = 0; t < threads_; ++t) samplers_.push_back(make());
  }

  std::vector<SampleOutcome> draw(std::uint64_t seed, std::uint64_t stream, std::size_t first,
                                  std::size_t count) {
    std::vector<SampleOutcome> out(count);
    for_each_block(count, threads_, threads_, [&](std::size_t block, std::size_t b, std::size_t e) {
      Sampler& sampler = *samplers_[block];
      for (std::size_t i = b; i < e; ++i) {
        Rng rng = sample_rng(seed, stream, first + i);
        out[i] = sampler.draw(rng);
      }
    });
    return out;
  }

 private:
  unsigned threads_;
  std::vector<std::unique_ptr<Sampler>> samplers_;
};

}  // namespace percolation::detail
