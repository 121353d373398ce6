#include "percolation/exact.hpp"

#include <algorithm>

#include "percolation/errors.hpp"
#include "percolation/parallel.hpp"

namespace percolation {

namespace {

constexpr std::size_t kReductionBlocks = 32;

struct Accumulator {
  std::vector<double> p, b;
  double internal = 0.0;
  std::size_t diameter = 0;

  explicit Accumulator(std::size_t n) : p(n, 0.0), b(n, 0.0) {}
};

// Single-source shortest-path DAG plus backward accumulation of both the
// percolation-weighted and unweighted dependencies.
class SourceSweep {
 public:
  SourceSweep(const Graph& g, const PercolationModel* model)
      : g_(g), model_(model), dist_(g.num_vertices(), -1), sigma_(g.num_vertices(), 0.0),
        dep_p_(g.num_vertices(), 0.0), dep_b_(g.num_vertices(), 0.0) {
    order_.reserve(g.num_vertices());
  }

  void run(Vertex s, Accumulator& acc) {
    order_.clear();
    dist_[s] = 0;
    sigma_[s] = 1.0;
    order_.push_back(s);
    for (std::size_t head = 0; head < order_.size(); ++head) {
      Vertex u = order_[head];
      for (Vertex w : g_.out_neighbors(u)) {
        if (dist_[w] < 0) {
          dist_[w] = dist_[u] + 1;
          order_.push_back(w);
        }
        if (dist_[w] == dist_[u] + 1) sigma_[w] += sigma_[u];
      }
    }

    const double xs = model_ ? model_->state(s) : 0.0;
    for (std::size_t i = order_.size(); i-- > 1;) {
      Vertex w = order_[i];
      const double weight = model_ ? ramp(xs - model_->state(w)) : 0.0;
      const double up_p = weight + dep_p_[w];
      const double up_b = 1.0 + dep_b_[w];
      for (Vertex v : g_.in_neighbors(w)) {
        if (dist_[v] != dist_[w] - 1) continue;
        const double share = sigma_[v] / sigma_[w];
        dep_p_[v] += share * up_p;
        dep_b_[v] += share * up_b;
      }
      acc.p[w] += dep_p_[w];
      acc.b[w] += dep_b_[w];
      acc.internal += static_cast<double>(dist_[w] - 1);
      acc.diameter = std::max(acc.diameter, static_cast<std::size_t>(dist_[w]));
    }

    for (Vertex v : order_) {
      dist_[v] = -1;
      sigma_[v] = 0.0;
      dep_p_[v] = 0.0;
      dep_b_[v] = 0.0;
    }
  }

 private:
  const Graph& g_;
  const PercolationModel* model_;
  std::vector<int> dist_;
  std::vector<double> sigma_;
  std::vector<double> dep_p_, dep_b_;
  std::vector<Vertex> order_;
};

ExactResult run_exact(const Graph& g, const PercolationModel* model, unsigned threads) {
  const std::size_t n = g.num_vertices();
  if (model) require(model->size() == n, "model and graph sizes differ");

  ExactResult out;
  out.p.assign(n, 0.0);
  out.b.assign(n, 0.0);
  if (n < 2) return out;

  const std::size_t blocks = std::min(kReductionBlocks, n);
  std::vector<Accumulator> partial(blocks, Accumulator(0));
  for_each_block(n, blocks, resolve_threads(threads),
                 [&](std::size_t block, std::size_t begin, std::size_t end) {
                   Accumulator acc(n);
                   SourceSweep sweep(g, model);
                   for (std::size_t s = begin; s < end; ++s) sweep.run(static_cast<Vertex>(s), acc);
                   partial[block] = std::move(acc);
                 });

  const double pairs = static_cast<double>(n) * static_cast<double>(n - 1);
  double internal = 0.0;
  for (const auto& acc : partial) {
    for (std::size_t v = 0; v < n; ++v) {
      out.p[v] += acc.p[v];
      out.b[v] += acc.b[v];
    }
    internal += acc.internal;
    out.diameter = std::max(out.diameter, acc.diameter);
  }
  for (std::size_t v = 0; v < n; ++v) {
    const double denom = model ? model->minus_sum(static_cast<Vertex>(v)) : 0.0;
    out.p[v] = denom == 0.0 ? 0.0 : out.p[v] / (pairs * denom);
    out.b[v] /= pairs;
    out.sum_p += out.p[v];
    out.sum_b += out.b[v];
  }
  out.rho = internal / pairs;
  out.vertex_diameter = out.diameter + 1;
  return out;
}

}  // namespace

ExactResult exact_centralities(const Graph& g, const PercolationModel& model, unsigned threads) {
  return run_exact(g, &model, threads);
}

std::vector<double> exact_percolation(const Graph& g, const PercolationModel& model,
                                      unsigned threads) {
  return run_exact(g, &model, threads).p;
}

std::vector<double> exact_betweenness(const Graph& g, unsigned threads) {
  return run_exact(g, nullptr, threads).b;
}

DistanceSummary exact_rho_and_diameter(const Graph& g, unsigned threads) {
  auto r = run_exact(g, nullptr, threads);
  return {r.rho, r.diameter};
}

std::vector<double> brute_force_percolation(const Graph& g, const PercolationModel& model,
                                            std::size_t path_cap) {
  const std::size_t n = g.num_vertices();
  require(model.size() == n, "model and graph sizes differ");
  std::vector<double> acc(n, 0.0);
  if (n < 3) return acc;

  std::size_t enumerated = 0;
  std::vector<int> dist(n);
  std::vector<Vertex> queue;
  std::vector<Vertex> stack;
  std::vector<std::vector<Vertex>> paths;

  // Every shortest s-z path, built backwards from z through predecessors.
  auto enumerate = [&](auto&& self, Vertex cur, Vertex s) -> void {
    stack.push_back(cur);
    if (cur == s) {
      if (++enumerated > path_cap) throw OracleAbort("shortest-path enumeration exceeded cap");
      paths.emplace_back(stack.rbegin(), stack.rend());
    } else {
      for (Vertex pred : g.in_neighbors(cur))
        if (dist[pred] == dist[cur] - 1) self(self, pred, s);
    }
    stack.pop_back();
  };

  for (Vertex s = 0; s < n; ++s) {
    std::fill(dist.begin(), dist.end(), -1);
    queue.assign(1, s);
    dist[s] = 0;
    for (std::size_t head = 0; head < queue.size(); ++head)
      for (Vertex w : g.out_neighbors(queue[head]))
        if (dist[w] < 0) {
          dist[w] = dist[queue[head]] + 1;
          queue.push_back(w);
        }

    for (Vertex z = 0; z < n; ++z) {
      if (z == s || dist[z] < 0) continue;
      paths.clear();
      enumerate(enumerate, z, s);
      const double count = static_cast<double>(paths.size());
      for (const auto& path : paths)
        for (std::size_t i = 1; i + 1 < path.size(); ++i)
          acc[path[i]] += model.kappa(s, z, path[i]) / count;
    }
  }

  const double pairs = static_cast<double>(n) * static_cast<double>(n - 1);
  for (auto& a : acc) a /= pairs;
  return acc;
}

}  // namespace percolation
