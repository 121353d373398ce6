#pragma once

#include <cstddef>
#include <cstdint>
#include <istream>
#include <ostream>
#include <span>
#include <utility>
#include <vector>

namespace percolation {

using Vertex = std::uint32_t;
using OriginalId = std::int64_t;

struct LoadStats {
  std::size_t lines = 0;
  std::size_t comments = 0;
  std::size_t self_loops = 0;
  std::size_t duplicates = 0;
};

/// Immutable unweighted graph in compressed adjacency form. Vertices are
/// dense ids in [0, n). Undirected graphs store each edge as two arcs and
/// share the forward arrays for in-neighbours.
class Graph {
 public:
  Graph() = default;

  /// Builds from dense-id edges. Self-loops and duplicates are dropped
  /// (orientation-insensitive when undirected). `original_ids`, if given,
  /// must have `n` entries.
  static Graph from_edges(std::size_t n, std::span<const std::pair<Vertex, Vertex>> edges,
                          bool directed, std::vector<OriginalId> original_ids = {},
                          LoadStats* stats = nullptr);

  std::size_t num_vertices() const noexcept { return offsets_.empty() ? 0 : offsets_.size() - 1; }
  std::size_t num_edges() const noexcept { return edges_; }
  std::size_t num_arcs() const noexcept { return targets_.size(); }
  bool directed() const noexcept { return directed_; }

  std::span<const Vertex> out_neighbors(Vertex v) const;
  std::span<const Vertex> in_neighbors(Vertex v) const;
  std::size_t degree_forward(Vertex v) const { return out_neighbors(v).size(); }
  std::size_t degree_backward(Vertex v) const { return in_neighbors(v).size(); }

  std::span<const std::size_t> offsets() const noexcept { return offsets_; }

  OriginalId original_id(Vertex v) const;
  std::span<const OriginalId> original_ids() const noexcept { return original_ids_; }

  /// Same vertex set with every arc flipped. Undirected graphs return a copy.
  Graph reversed() const;

  /// Each edge once: u<v for undirected graphs, every arc for directed ones.
  std::vector<std::pair<Vertex, Vertex>> edge_list() const;

 private:
  bool directed_ = false;
  std::size_t edges_ = 0;
  std::vector<std::size_t> offsets_;
  std::vector<Vertex> targets_;
  std::vector<std::size_t> back_offsets_;
  std::vector<Vertex> back_targets_;
  std::vector<OriginalId> original_ids_;
};

/// Parses a whitespace-separated edge list. Lines starting with '#' or '%'
/// are comments. Vertex ids are renumbered densely by first appearance.
/// Throws ParseError naming the offending line.
Graph load_edge_list(std::istream& in, bool directed, LoadStats* stats = nullptr);

/// Writes `original_u original_v` per edge, loadable by load_edge_list.
void write_edge_list(const Graph& g, std::ostream& out);

}  // namespace percolation
