#include "percolation/graph.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <string>
#include <string_view>
#include <unordered_map>

#include "percolation/errors.hpp"

namespace percolation {

namespace {

void build_csr(std::size_t n, const std::vector<std::pair<Vertex, Vertex>>& arcs,
               std::vector<std::size_t>& offsets, std::vector<Vertex>& targets) {
  offsets.assign(n + 1, 0);
  for (const auto& [u, v] : arcs) ++offsets[u + 1];
  for (std::size_t i = 0; i < n; ++i) offsets[i + 1] += offsets[i];
  targets.resize(arcs.size());
  std::vector<std::size_t> cursor(offsets.begin(), offsets.end() - 1);
  for (const auto& [u, v] : arcs) targets[cursor[u]++] = v;
  for (std::size_t i = 0; i < n; ++i)
    std::sort(targets.begin() + static_cast<std::ptrdiff_t>(offsets[i]),
              targets.begin() + static_cast<std::ptrdiff_t>(offsets[i + 1]));
}

bool is_blank(std::string_view s) {
  return std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); });
}

}  // namespace

Graph Graph::from_edges(std::size_t n, std::span<const std::pair<Vertex, Vertex>> edges,
                        bool directed, std::vector<OriginalId> original_ids, LoadStats* stats) {
  require(original_ids.empty() || original_ids.size() == n, "original id map size mismatch");

  std::vector<std::pair<Vertex, Vertex>> arcs;
  arcs.reserve(edges.size());
  std::size_t self_loops = 0;
  for (auto [u, v] : edges) {
    require(u < n && v < n, "edge endpoint out of range");
    if (u == v) {
      ++self_loops;
      continue;
    }
    if (!directed && u > v) std::swap(u, v);
    arcs.emplace_back(u, v);
  }
  std::sort(arcs.begin(), arcs.end());
  auto last = std::unique(arcs.begin(), arcs.end());
  std::size_t duplicates = static_cast<std::size_t>(arcs.end() - last);
  arcs.erase(last, arcs.end());

  Graph g;
  g.directed_ = directed;
  g.edges_ = arcs.size();
  if (original_ids.empty()) {
    original_ids.resize(n);
    for (std::size_t i = 0; i < n; ++i) original_ids[i] = static_cast<OriginalId>(i);
  }
  g.original_ids_ = std::move(original_ids);

  if (directed) {
    build_csr(n, arcs, g.offsets_, g.targets_);
    for (auto& a : arcs) std::swap(a.first, a.second);
    build_csr(n, arcs, g.back_offsets_, g.back_targets_);
  } else {
    std::size_t m = arcs.size();
    arcs.reserve(2 * m);
    for (std::size_t i = 0; i < m; ++i) arcs.emplace_back(arcs[i].second, arcs[i].first);
    build_csr(n, arcs, g.offsets_, g.targets_);
  }

  if (stats) {
    stats->self_loops += self_loops;
    stats->duplicates += duplicates;
  }
  return g;
}

std::span<const Vertex> Graph::out_neighbors(Vertex v) const {
  require(v < num_vertices(), "vertex out of range");
  return {targets_.data() + offsets_[v], offsets_[v + 1] - offsets_[v]};
}

std::span<const Vertex> Graph::in_neighbors(Vertex v) const {
  if (!directed_) return out_neighbors(v);
  require(v < num_vertices(), "vertex out of range");
  return {back_targets_.data() + back_offsets_[v], back_offsets_[v + 1] - back_offsets_[v]};
}

OriginalId Graph::original_id(Vertex v) const {
  require(v < num_vertices(), "vertex out of range");
  return original_ids_[v];
}

Graph Graph::reversed() const {
  if (!directed_) return *this;
  Graph g = *this;
  std::swap(g.offsets_, g.back_offsets_);
  std::swap(g.targets_, g.back_targets_);
  return g;
}

std::vector<std::pair<Vertex, Vertex>> Graph::edge_list() const {
  std::vector<std::pair<Vertex, Vertex>> out;
  out.reserve(edges_);
  for (Vertex u = 0; u < num_vertices(); ++u)
    for (Vertex v : out_neighbors(u))
      if (directed_ || u < v) out.emplace_back(u, v);
  return out;
}

Graph load_edge_list(std::istream& in, bool directed, LoadStats* stats) {
  LoadStats local;
  std::unordered_map<OriginalId, Vertex> dense;
  std::vector<OriginalId> ids;
  std::vector<std::pair<Vertex, Vertex>> edges;

  auto intern = [&](OriginalId id) {
    auto [it, inserted] = dense.try_emplace(id, static_cast<Vertex>(ids.size()));
    if (inserted) ids.push_back(id);
    return it->second;
  };

  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    ++local.lines;
    std::string_view rest(line);
    std::size_t first = rest.find_first_not_of(" \t\r");
    if (first == std::string_view::npos || is_blank(rest)) continue;
    if (rest[first] == '#' || rest[first] == '%') {
      ++local.comments;
      continue;
    }

    OriginalId tok[2];
    int count = 0;
    std::size_t pos = first;
    while (pos < rest.size()) {
      std::size_t end = rest.find_first_of(" \t\r", pos);
      if (end == std::string_view::npos) end = rest.size();
      if (count == 2) throw ParseError("expected two vertex ids, found more", lineno);
      OriginalId value = 0;
      auto [ptr, ec] = std::from_chars(rest.data() + pos, rest.data() + end, value);
      if (ec != std::errc() || ptr != rest.data() + end)
        throw ParseError("invalid vertex id '" + std::string(rest.substr(pos, end - pos)) + "'",
                         lineno);
      tok[count++] = value;
      pos = rest.find_first_not_of(" \t\r", end);
      if (pos == std::string_view::npos) break;
    }
    if (count != 2) throw ParseError("expected two vertex ids", lineno);
    Vertex u = intern(tok[0]);
    Vertex v = intern(tok[1]);
    edges.emplace_back(u, v);
  }
  if (in.bad()) throw ParseError("read error");
  if (ids.empty()) throw ParseError("empty graph");

  const std::size_t n = ids.size();
  Graph g = Graph::from_edges(n, edges, directed, std::move(ids), &local);
  if (stats) *stats = local;
  return g;
}

void write_edge_list(const Graph& g, std::ostream& out) {
  for (auto [u, v] : g.edge_list()) out << g.original_id(u) << ' ' << g.original_id(v) << '\n';
}

}  // namespace percolation
