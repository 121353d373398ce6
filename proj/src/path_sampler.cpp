#include "percolation/path_sampler.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "percolation/errors.hpp"

namespace percolation {

namespace {

// Picks a neighbour w of `cur` with dist[w] == level, with probability
// sigma[w] / total.
template <typename Range>
Vertex weighted_step(const Range& neighbours, const std::vector<std::int32_t>& dist,
                     const std::vector<double>& sigma, std::int32_t level, double total,
                     Rng& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double target = unit(rng) * total;
  double acc = 0.0;
  Vertex last = std::numeric_limits<Vertex>::max();
  for (Vertex w : neighbours) {
    if (dist[w] != level) continue;
    acc += sigma[w];
    last = w;
    if (target < acc) return w;
  }
  // Rounding can leave target just above the final partial sum.
  if (last == std::numeric_limits<Vertex>::max()) throw std::logic_error("broken BFS DAG");
  return last;
}

}  // namespace

BidirectionalBfs::BidirectionalBfs(const Graph& g) : g_(g) {
  const std::size_t n = g.num_vertices();
  meet_.dist_s.assign(n, -1);
  meet_.dist_z.assign(n, -1);
  meet_.sigma_s.assign(n, 0.0);
  meet_.sigma_z.assign(n, 0.0);
}

void BidirectionalBfs::reset() {
  for (Vertex v : touched_) {
    meet_.dist_s[v] = -1;
    meet_.dist_z[v] = -1;
    meet_.sigma_s[v] = 0.0;
    meet_.sigma_z[v] = 0.0;
  }
  touched_.clear();
  meet_.candidates.clear();
  meet_.candidate_prefix.clear();
  meet_.connected = false;
  meet_.saturated = false;
  meet_.distance = 0;
  meet_.sigma_sz = 0.0;
}

bool BidirectionalBfs::expand_s(std::uint32_t ls, std::uint32_t lz) {
  auto& m = meet_;
  const auto next_level = static_cast<std::int32_t>(ls + 1);
  next_.clear();
  std::size_t next_sum = 0;
  for (Vertex u : frontier_s_) {
    for (Vertex w : g_.out_neighbors(u)) {
      if (m.dist_z[w] >= 0) {
        m.candidates.push_back({u, w, m.sigma_s[u] * m.sigma_z[w]});
      } else if (m.dist_s[w] < 0) {
        m.dist_s[w] = next_level;
        m.sigma_s[w] = m.sigma_s[u];
        touched_.push_back(w);
        next_.push_back(w);
        next_sum += g_.degree_forward(w);
      } else if (m.dist_s[w] == next_level) {
        m.sigma_s[w] += m.sigma_s[u];
      }
    }
  }
  if (!m.candidates.empty()) {
    m.distance = ls + 1 + lz;
    return true;
  }
  frontier_s_.swap(next_);
  degsum_s_ = next_sum;
  return false;
}

bool BidirectionalBfs::expand_z(std::uint32_t ls, std::uint32_t lz) {
  auto& m = meet_;
  const auto next_level = static_cast<std::int32_t>(lz + 1);
  next_.clear();
  std::size_t next_sum = 0;
  for (Vertex u : frontier_z_) {
    for (Vertex w : g_.in_neighbors(u)) {
      if (m.dist_s[w] >= 0) {
        m.candidates.push_back({w, u, m.sigma_s[w] * m.sigma_z[u]});
      } else if (m.dist_z[w] < 0) {
        m.dist_z[w] = next_level;
        m.sigma_z[w] = m.sigma_z[u];
        touched_.push_back(w);
        next_.push_back(w);
        next_sum += g_.degree_backward(w);
      } else if (m.dist_z[w] == next_level) {
        m.sigma_z[w] += m.sigma_z[u];
      }
    }
  }
  if (!m.candidates.empty()) {
    m.distance = ls + lz + 1;
    return true;
  }
  frontier_z_.swap(next_);
  degsum_z_ = next_sum;
  return false;
}

const MeetResult& BidirectionalBfs::run(Vertex s, Vertex z) {
  const std::size_t n = g_.num_vertices();
  require(s < n && z < n, "vertex out of range");
  require(s != z, "bidirectional search needs distinct endpoints");
  reset();

  auto& m = meet_;
  m.s = s;
  m.z = z;
  m.dist_s[s] = 0;
  m.sigma_s[s] = 1.0;
  m.dist_z[z] = 0;
  m.sigma_z[z] = 1.0;
  touched_.push_back(s);
  touched_.push_back(z);
  frontier_s_.assign(1, s);
  frontier_z_.assign(1, z);
  degsum_s_ = g_.degree_forward(s);
  degsum_z_ = g_.degree_backward(z);

  std::uint32_t ls = 0, lz = 0;
  bool met = false;
  while (!met && !frontier_s_.empty() && !frontier_z_.empty()) {
    if (degsum_s_ <= degsum_z_) {
      met = expand_s(ls, lz);
      if (!met) ++ls;
    } else {
      met = expand_z(ls, lz);
      if (!met) ++lz;
    }
  }

  if (met) {
    m.connected = true;
    m.candidate_prefix.reserve(m.candidates.size());
    double acc = 0.0;
    for (const auto& c : m.candidates) {
      acc += c.weight;
      m.candidate_prefix.push_back(acc);
    }
    m.sigma_sz = acc;
    m.saturated = !std::isfinite(acc);
  }
  return m;
}

MeetResult balanced_bidirectional_bfs(const Graph& g, Vertex s, Vertex z) {
  BidirectionalBfs bfs(g);
  return bfs.run(s, z);
}

std::vector<Vertex> sample_path(const Graph& g, const MeetResult& meet, Rng& rng) {
  require(meet.connected, "cannot sample a path between disconnected vertices");
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double target = unit(rng) * meet.sigma_sz;
  auto it = std::upper_bound(meet.candidate_prefix.begin(), meet.candidate_prefix.end(), target);
  if (it == meet.candidate_prefix.end()) --it;
  const CandidateEdge& edge = meet.candidates[static_cast<std::size_t>(it - meet.candidate_prefix.begin())];

  std::vector<Vertex> path;
  path.reserve(meet.distance + 1);
  for (Vertex cur = edge.u;;) {
    path.push_back(cur);
    if (cur == meet.s) break;
    cur = weighted_step(g.in_neighbors(cur), meet.dist_s, meet.sigma_s, meet.dist_s[cur] - 1,
                        meet.sigma_s[cur], rng);
  }
  std::reverse(path.begin(), path.end());
  for (Vertex cur = edge.v;;) {
    path.push_back(cur);
    if (cur == meet.z) break;
    cur = weighted_step(g.out_neighbors(cur), meet.dist_z, meet.sigma_z, meet.dist_z[cur] - 1,
                        meet.sigma_z[cur], rng);
  }
  return path;
}

std::size_t bag_size(double sigma_sz, double alpha, std::size_t cap, bool* capped) {
  const double requested = std::ceil(alpha * sigma_sz);
  const bool over = !(requested <= static_cast<double>(cap));
  if (capped) *capped = over;
  if (over) return cap;
  return std::max<std::size_t>(1, static_cast<std::size_t>(requested));
}

PathBag sample_paths(const Graph& g, const MeetResult& meet, double alpha, Rng& rng,
                     std::size_t cap) {
  require(meet.connected, "cannot sample paths between disconnected vertices");
  require(alpha > 0.0 && cap >= 1, "alpha and cap must be positive");
  PathBag bag;
  bag.s = meet.s;
  bag.z = meet.z;
  bag.requested = std::ceil(alpha * meet.sigma_sz);
  const std::size_t k = bag_size(meet.sigma_sz, alpha, cap, &bag.capped);
  bag.paths.reserve(k);
  for (std::size_t i = 0; i < k; ++i) bag.paths.push_back(sample_path(g, meet, rng));
  return bag;
}

Contribution bag_estimate(const PathBag& bag, const PercolationModel& model) {
  Contribution out;
  if (bag.paths.empty()) return out;
  std::vector<std::pair<Vertex, std::size_t>> counts;
  for (const auto& path : bag.paths)
    for (std::size_t i = 1; i + 1 < path.size(); ++i) counts.emplace_back(path[i], 1);
  std::sort(counts.begin(), counts.end());
  const double size = static_cast<double>(bag.paths.size());
  for (std::size_t i = 0; i < counts.size();) {
    std::size_t j = i;
    while (j < counts.size() && counts[j].first == counts[i].first) ++j;
    const Vertex v = counts[i].first;
    const double k = model.kappa(bag.s, bag.z, v);
    if (k > 0.0) out.emplace_back(v, static_cast<double>(j - i) / size * k);
    i = j;
  }
  return out;
}

std::pair<Vertex, Vertex> sample_pair(std::size_t n, Rng& rng) {
  require(n >= 2, "need at least two vertices to sample a pair");
  std::uniform_int_distribution<std::size_t> first(0, n - 1), second(0, n - 2);
  auto s = static_cast<Vertex>(first(rng));
  auto z = static_cast<Vertex>(second(rng));
  if (z >= s) ++z;
  return {s, z};
}

BagSampler::BagSampler(const Graph& g, const PercolationModel& model, double alpha, std::size_t cap)
    : g_(g), model_(model), alpha_(alpha), cap_(cap), bfs_(g), counts_(g.num_vertices(), 0) {
  require(model.size() == g.num_vertices(), "model and graph sizes differ");
  require(alpha > 0.0 && cap >= 1, "alpha and cap must be positive");
}

SampleOutcome BagSampler::draw(Rng& rng) {
  auto [s, z] = sample_pair(g_.num_vertices(), rng);
  return draw_pair(s, z, rng);
}

SampleOutcome BagSampler::draw_pair(Vertex s, Vertex z, Rng& rng) {
  SampleOutcome out;
  const MeetResult& meet = bfs_.run(s, z);
  if (!meet.connected) return out;
  out.connected = true;
  out.distance = meet.distance;
  if (meet.distance < 2 || ramp(model_.state(s) - model_.state(z)) == 0.0) return out;

  out.bag = bag_size(meet.sigma_sz, alpha_, cap_, &out.capped);
  for (std::size_t i = 0; i < out.bag; ++i) {
    auto path = sample_path(g_, meet, rng);
    for (std::size_t k = 1; k + 1 < path.size(); ++k) {
      Vertex v = path[k];
      if (counts_[v]++ == 0) seen_.push_back(v);
    }
  }
  std::sort(seen_.begin(), seen_.end());
  const double size = static_cast<double>(out.bag);
  out.contribution.reserve(seen_.size());
  for (Vertex v : seen_) {
    const double k = model_.kappa_unchecked(s, z, v);
    if (k > 0.0) out.contribution.emplace_back(v, static_cast<double>(counts_[v]) / size * k);
    counts_[v] = 0;
  }
  seen_.clear();
  return out;
}

PathSampler::PathSampler(const Graph& g, const PercolationModel& model)
    : g_(g), model_(model), bfs_(g) {
  require(model.size() == g.num_vertices(), "model and graph sizes differ");
}

SampleOutcome PathSampler::draw(Rng& rng) {
  SampleOutcome out;
  auto [s, z] = sample_pair(g_.num_vertices(), rng);
  const MeetResult& meet = bfs_.run(s, z);
  if (!meet.connected) return out;
  out.connected = true;
  out.distance = meet.distance;
  out.bag = 1;
  auto path = sample_path(g_, meet, rng);
  if (ramp(model_.state(s) - model_.state(z)) == 0.0) return out;
  for (std::size_t k = 1; k + 1 < path.size(); ++k) {
    const double w = model_.kappa_unchecked(s, z, path[k]);
    if (w > 0.0) out.contribution.emplace_back(path[k], w);
  }
  std::sort(out.contribution.begin(), out.contribution.end());
  return out;
}

PairSampler::PairSampler(const Graph& g, const PercolationModel& model)
    : g_(g), model_(model), dist_(g.num_vertices(), -1), sigma_(g.num_vertices(), 0.0),
      sigma_to_z_(g.num_vertices(), 0.0) {
  require(model.size() == g.num_vertices(), "model and graph sizes differ");
}

SampleOutcome PairSampler::draw(Rng& rng) {
  auto [s, z] = sample_pair(g_.num_vertices(), rng);
  return contribution(s, z);
}

SampleOutcome PairSampler::contribution(Vertex s, Vertex z) {
  require(s < g_.num_vertices() && z < g_.num_vertices() && s != z, "invalid pair");
  SampleOutcome out;
  order_.clear();
  dist_[s] = 0;
  sigma_[s] = 1.0;
  order_.push_back(s);
  for (std::size_t head = 0; head < order_.size(); ++head) {
    Vertex u = order_[head];
    // Levels past z's cannot lie on an s-z shortest path.
    if (dist_[z] >= 0 && dist_[u] >= dist_[z]) break;
    for (Vertex w : g_.out_neighbors(u)) {
      if (dist_[w] < 0) {
        dist_[w] = dist_[u] + 1;
        order_.push_back(w);
      }
      if (dist_[w] == dist_[u] + 1) sigma_[w] += sigma_[u];
    }
  }

  if (dist_[z] >= 0) {
    out.connected = true;
    out.distance = static_cast<std::uint32_t>(dist_[z]);
    const double weight = ramp(model_.state(s) - model_.state(z));
    if (weight > 0.0 && dist_[z] >= 2) {
      sigma_to_z_[z] = 1.0;
      for (std::size_t i = order_.size(); i-- > 0;) {
        Vertex v = order_[i];
        if (dist_[v] >= dist_[z]) continue;
        double acc = 0.0;
        for (Vertex w : g_.out_neighbors(v))
          if (dist_[w] == dist_[v] + 1) acc += sigma_to_z_[w];
        sigma_to_z_[v] = acc;
      }
      const double total = sigma_[z];
      for (Vertex v : order_) {
        if (v == s || v == z || sigma_to_z_[v] == 0.0) continue;
        const double w = sigma_[v] * sigma_to_z_[v] / total * model_.kappa_unchecked(s, z, v);
        if (w > 0.0) out.contribution.emplace_back(v, w);
      }
      std::sort(out.contribution.begin(), out.contribution.end());
      out.bag = 1;
    }
  }

  for (Vertex v : order_) {
    dist_[v] = -1;
    sigma_[v] = 0.0;
    sigma_to_z_[v] = 0.0;
  }
  return out;
}

}  // namespace percolation
