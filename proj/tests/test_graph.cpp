#include <doctest.h>

#include <algorithm>
#include <bit>
#include <numeric>
#include <sstream>

#include "qaoa/error.hpp"
#include "qaoa/graph.hpp"
#include "test_support.hpp"

using namespace qaoa;
using namespace qaoa::testing;

namespace {

// Isomorphism by direct search over relabelings; independent of canonical_form.
bool isomorphic_brute(const Graph& a, const Graph& b) {
  if (a.n_vertices() != b.n_vertices() || a.n_edges() != b.n_edges()) return false;
  std::vector<int> perm(static_cast<std::size_t>(a.n_vertices()));
  std::iota(perm.begin(), perm.end(), 0);
  do {
    if (a.permuted(perm) == b) return true;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return false;
}

std::size_t brute_connected_classes(int n) {
  std::vector<Edge> all;
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) all.emplace_back(u, v);
  std::vector<Graph> reps;
  for (std::uint32_t mask = 0; mask < (1U << all.size()); ++mask) {
    std::vector<Edge> edges;
    for (std::size_t i = 0; i < all.size(); ++i)
      if ((mask >> i) & 1U) edges.push_back(all[i]);
    Graph g(n, edges);
    if (!g.is_connected()) continue;
    if (std::none_of(reps.begin(), reps.end(), [&](const Graph& r) { return isomorphic_brute(r, g); })) reps.push_back(g);
  }
  return reps.size();
}

}  // namespace

TEST_CASE("graph normalizes edges and rejects invalid input") {
  Graph g(4, {{2, 1}, {0, 3}, {1, 2}});
  CHECK(g.edges() == std::vector<Edge>{{0, 3}, {1, 2}});
  CHECK_THROWS_AS(Graph(3, {{1, 1}}), ContractViolation);
  CHECK_THROWS_AS(Graph(3, {{0, 3}}), ContractViolation);
  CHECK_THROWS_AS(Graph(0, {}), ContractViolation);
}

TEST_CASE("is_vertex_cover") {
  CHECK(is_vertex_cover(triangle(), "110"));
  CHECK_FALSE(is_vertex_cover(triangle(), "100"));
  CHECK(is_vertex_cover(star5(), "10000"));
  CHECK_THROWS_AS(is_vertex_cover(triangle(), "1100"), ContractViolation);
}

TEST_CASE("vertex cover monotonicity") {
  for (const auto& g : enumerate_connected_graphs(5)) {
    for (BitString s = 0; s < 32; ++s) {
      if (!is_vertex_cover(g, s, 5)) continue;
      for (int v = 0; v < 5; ++v) CHECK(is_vertex_cover(g, s | (1U << v), 5));
    }
  }
}

TEST_CASE("min_vertex_covers") {
  SUBCASE("triangle") {
    const auto sol = min_vertex_covers(triangle());
    CHECK(sol.size == 2);
    std::vector<std::string> covers;
    for (auto c : sol.covers) covers.push_back(to_bits(c, 3));
    std::sort(covers.begin(), covers.end());
    CHECK(covers == std::vector<std::string>{"011", "101", "110"});
  }
  SUBCASE("star") {
    const auto sol = min_vertex_covers(star5());
    CHECK(sol.size == 1);
    REQUIRE(sol.covers.size() == 1);
    CHECK(to_bits(sol.covers[0], 5) == "10000");
  }
  SUBCASE("path") {
    const auto sol = min_vertex_covers(path5());
    CHECK(sol.size == 2);
    REQUIRE(sol.covers.size() == 1);
    CHECK(to_bits(sol.covers[0], 5) == "01010");
  }
  SUBCASE("solution invariants on every 5-vertex graph") {
    for (const auto& g : enumerate_connected_graphs(5)) {
      const auto sol = min_vertex_covers(g);
      CHECK(sol.size <= 4);
      for (auto c : sol.covers) {
        CHECK(is_vertex_cover(g, c, 5));
        CHECK(std::popcount(c) == sol.size);
      }
      for (BitString s = 0; s < 32; ++s) {
        if (std::popcount(s) < sol.size) CHECK_FALSE(is_vertex_cover(g, s, 5));
      }
    }
  }
  SUBCASE("complete graph needs n-1") {
    std::vector<Edge> e;
    for (int u = 0; u < 5; ++u)
      for (int v = u + 1; v < 5; ++v) e.emplace_back(u, v);
    CHECK(min_vertex_covers(Graph(5, e)).size == 4);
  }
  CHECK_THROWS_AS(min_vertex_covers(Graph(21, {})), ContractViolation);
}

TEST_CASE("enumerate_connected_graphs counts") {
  const std::size_t expected[] = {1, 1, 2, 6, 21};
  for (int n = 1; n <= 5; ++n) {
    const auto graphs = enumerate_connected_graphs(n);
    CHECK(graphs.size() == expected[n - 1]);
    CHECK(graphs.size() == brute_connected_classes(n));
    for (std::size_t i = 0; i < graphs.size(); ++i) {
      CHECK(graphs[i].is_connected());
      for (std::size_t j = 0; j < i; ++j) CHECK_FALSE(isomorphic_brute(graphs[i], graphs[j]));
    }
  }
  CHECK(enumerate_connected_graphs(2)[0].edges() == std::vector<Edge>{{0, 1}});
  CHECK(enumerate_connected_graphs(6).size() == 112);
  CHECK_THROWS_AS(enumerate_connected_graphs(0), ContractViolation);
  CHECK_THROWS_AS(enumerate_connected_graphs(8), ContractViolation);
}

TEST_CASE("enumeration order is by edge count then label") {
  const auto graphs = enumerate_connected_graphs(5);
  for (std::size_t i = 1; i < graphs.size(); ++i) {
    const bool ordered = graphs[i - 1].n_edges() < graphs[i].n_edges() ||
                         (graphs[i - 1].n_edges() == graphs[i].n_edges() &&
                          canonical_form(graphs[i - 1]) < canonical_form(graphs[i]));
    CHECK(ordered);
  }
  std::size_t five_edge = std::count_if(graphs.begin(), graphs.end(), [](const Graph& g) { return g.n_edges() == 5; });
  CHECK(five_edge == 5);
}

TEST_CASE("canonical_form") {
  const Graph p1(3, {{0, 1}, {1, 2}});
  const Graph p2(3, {{1, 0}, {0, 2}});
  CHECK(canonical_form(p1) == canonical_form(p2));
  CHECK(canonical_form(triangle()) != canonical_form(p1));

  std::mt19937_64 rng(2024);
  for (int n = 4; n <= 6; ++n) {
    for (const auto& g : enumerate_connected_graphs(n)) {
      const auto label = canonical_form(g);
      for (int trial = 0; trial < 100; ++trial) CHECK(canonical_form(g.permuted(random_permutation(n, rng))) == label);
    }
  }
}

TEST_CASE("graph text format") {
  std::stringstream ss;
  write_graph(ss, cycle5());
  CHECK(ss.str() == "5 5\n0 1\n0 4\n1 2\n2 3\n3 4\n");
  CHECK(parse_graph(ss) == cycle5());

  auto fails_at = [](const std::string& text, std::size_t line) {
    std::istringstream in(text);
    try {
      parse_graph(in);
    } catch (const ParseError& e) {
      return e.line() == line;
    }
    return false;
  };
  CHECK(fails_at("", 1));
  CHECK(fails_at("3 x\n", 1));
  CHECK(fails_at("3 2\n0 1\n", 3));
  CHECK(fails_at("3 2\n0 1\n2 1\n", 3));
  CHECK(fails_at("3 2\n0 1\n0 5\n", 3));
  CHECK(fails_at("3 2\n0 1\n0 1\n", 3));
  CHECK(fails_at("3 1\n0 1\n1 2\n", 3));
}
