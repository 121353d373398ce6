#include <doctest.h>

#include <algorithm>
#include <set>
#include <sstream>

#include "generators.hpp"
#include "percolation/errors.hpp"
#include "percolation/graph.hpp"

using namespace percolation;

namespace {

Graph load(const std::string& text, bool directed, LoadStats* stats = nullptr) {
  std::istringstream in(text);
  return load_edge_list(in, directed, stats);
}

std::vector<Vertex> to_vec(std::span<const Vertex> s) { return {s.begin(), s.end()}; }

std::set<std::pair<OriginalId, OriginalId>> original_edges(const Graph& g) {
  std::set<std::pair<OriginalId, OriginalId>> out;
  for (auto [u, v] : g.edge_list()) {
    OriginalId a = g.original_id(u), b = g.original_id(v);
    if (!g.directed() && a > b) std::swap(a, b);
    out.emplace(a, b);
  }
  return out;
}

}  // namespace

TEST_CASE("path edge list") {
  Graph g = load("0 1\n1 2\n", false);
  CHECK(g.num_vertices() == 3);
  CHECK(g.num_edges() == 2);
  CHECK(g.degree_forward(1) == 2);
  CHECK(to_vec(g.out_neighbors(1)) == std::vector<Vertex>{0, 2});
}

TEST_CASE("undirected duplicates ignore orientation") {
  LoadStats stats;
  Graph g = load("0 1\n0 1\n1 0\n", false, &stats);
  CHECK(g.num_edges() == 1);
  CHECK(stats.duplicates == 2);
}

TEST_CASE("directed keeps both orientations") {
  LoadStats stats;
  Graph g = load("# c\n5 7\n7 5\n", true, &stats);
  CHECK(g.num_vertices() == 2);
  CHECK(g.num_edges() == 2);
  CHECK(stats.comments == 1);
  CHECK(g.original_id(0) == 5);
  CHECK(g.original_id(1) == 7);
}

TEST_CASE("directed neighbour slices") {
  Graph g = testing::make_graph(2, {{0, 1}}, true);
  CHECK(to_vec(g.in_neighbors(1)) == std::vector<Vertex>{0});
  CHECK(g.out_neighbors(1).empty());
  CHECK(g.degree_backward(1) == 1);
}

TEST_CASE("4-cycle degrees") {
  Graph g = testing::cycle_graph(4);
  for (Vertex v = 0; v < 4; ++v) CHECK(g.degree_forward(v) == 2);
}

TEST_CASE("undirected in-neighbours equal out-neighbours") {
  Graph g = testing::erdos_renyi(30, 0.2, 3);
  for (Vertex v = 0; v < 30; ++v) CHECK(to_vec(g.in_neighbors(v)) == to_vec(g.out_neighbors(v)));
}

TEST_CASE("out of range vertex is a contract violation") {
  Graph g = testing::path_graph(3);
  CHECK_THROWS_AS(g.out_neighbors(3), ContractViolation);
  CHECK_THROWS_AS(g.in_neighbors(7), ContractViolation);
}

TEST_CASE("offsets and arc counts") {
  for (bool directed : {false, true}) {
    Graph g = testing::erdos_renyi(40, 0.1, 9, directed);
    auto off = g.offsets();
    CHECK(std::is_sorted(off.begin(), off.end()));
    std::size_t deg = 0;
    for (Vertex v = 0; v < g.num_vertices(); ++v) deg += g.degree_forward(v);
    CHECK(deg == off.back());
    CHECK(off.back() == (directed ? g.num_edges() : 2 * g.num_edges()));
  }
}

TEST_CASE("directed forward and backward arcs mirror each other") {
  Graph g = testing::erdos_renyi(40, 0.1, 5, true);
  std::set<std::pair<Vertex, Vertex>> fwd, bwd;
  for (Vertex u = 0; u < g.num_vertices(); ++u) {
    for (Vertex v : g.out_neighbors(u)) fwd.emplace(u, v);
    for (Vertex v : g.in_neighbors(u)) bwd.emplace(v, u);
  }
  CHECK(fwd == bwd);
}

TEST_CASE("self-loops are dropped and counted") {
  LoadStats stats;
  Graph g = load("1 1\n1 2\n2 2\n", false, &stats);
  CHECK(g.num_edges() == 1);
  CHECK(stats.self_loops == 2);
  for (Vertex v = 0; v < g.num_vertices(); ++v)
    for (Vertex w : g.out_neighbors(v)) CHECK(w != v);
}

TEST_CASE("sparse ids are renumbered by first appearance") {
  Graph g = load("100 7\n7 42\n", false);
  CHECK(g.original_id(0) == 100);
  CHECK(g.original_id(1) == 7);
  CHECK(g.original_id(2) == 42);
}

TEST_CASE("parse errors name the line") {
  auto line_of = [](const std::string& text) {
    try {
      load(text, false);
    } catch (const ParseError& e) {
      return e.line();
    }
    return std::size_t{0};
  };
  CHECK(line_of("0 1\n1 x\n") == 2);
  CHECK(line_of("0 1\n# ok\n1\n") == 3);
  CHECK(line_of("0 1 2\n") == 1);
  CHECK_THROWS_AS(load("# only comments\n", false), ParseError);
  CHECK_THROWS_AS(load("", true), ParseError);
}

TEST_CASE("reloading a written graph gives the same edge set") {
  for (bool directed : {false, true}) {
    Graph g = testing::erdos_renyi(50, 0.08, 21, directed);
    std::stringstream buf;
    write_edge_list(g, buf);
    Graph h = load_edge_list(buf, directed);
    CHECK(h.num_edges() == g.num_edges());
    CHECK(original_edges(h) == original_edges(g));
  }
}

TEST_CASE("reversed flips directed arcs") {
  Graph g = testing::make_graph(3, {{0, 1}, {1, 2}}, true);
  Graph r = g.reversed();
  CHECK(to_vec(r.out_neighbors(1)) == std::vector<Vertex>{0});
  CHECK(to_vec(r.in_neighbors(1)) == std::vector<Vertex>{2});
}
