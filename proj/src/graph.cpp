#include "qaoa/graph.hpp"

#include <algorithm>
#include <bit>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <set>
#include <sstream>

#include "qaoa/error.hpp"

namespace qaoa {

Graph::Graph(int n_vertices, std::vector<Edge> edges) : n_(n_vertices) {
  require(n_vertices >= 1, "graph needs at least one vertex");
  for (auto& [u, v] : edges) {
    require(u != v, "self-loop on vertex " + std::to_string(u));
    require(u >= 0 && v >= 0 && u < n_vertices && v < n_vertices,
            "edge (" + std::to_string(u) + ", " + std::to_string(v) + ") out of range");
    if (u > v) std::swap(u, v);
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  edges_ = std::move(edges);
}

std::vector<int> Graph::degrees() const {
  std::vector<int> deg(static_cast<std::size_t>(n_), 0);
  for (auto [u, v] : edges_) {
    ++deg[static_cast<std::size_t>(u)];
    ++deg[static_cast<std::size_t>(v)];
  }
  return deg;
}

bool Graph::is_connected() const {
  std::vector<int> parent(static_cast<std::size_t>(n_));
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[static_cast<std::size_t>(x)] != x) {
      x = parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
    }
    return x;
  };
  int components = n_;
  for (auto [u, v] : edges_) {
    int a = find(u), b = find(v);
    if (a != b) {
      parent[static_cast<std::size_t>(a)] = b;
      --components;
    }
  }
  return components == 1;
}

Graph Graph::permuted(const std::vector<int>& perm) const {
  require(perm.size() == static_cast<std::size_t>(n_), "permutation size mismatch");
  std::vector<Edge> out;
  out.reserve(edges_.size());
  for (auto [u, v] : edges_) out.emplace_back(perm[static_cast<std::size_t>(u)], perm[static_cast<std::size_t>(v)]);
  return Graph(n_, std::move(out));
}

std::string to_bits(BitString bits, int n) {
  std::string s(static_cast<std::size_t>(n), '0');
  for (int i = 0; i < n; ++i) {
    if ((bits >> i) & 1U) s[static_cast<std::size_t>(i)] = '1';
  }
  return s;
}

BitString from_bits(const std::string& text) {
  require(text.size() <= 32, "bit string longer than 32");
  BitString bits = 0;
  for (std::size_t i = 0; i < text.size(); ++i) {
    require(text[i] == '0' || text[i] == '1', "bit string contains '" + std::string(1, text[i]) + "'");
    if (text[i] == '1') bits |= BitString{1} << i;
  }
  return bits;
}

namespace {

bool covers_all(const Graph& g, BitString subset) {
  for (auto [u, v] : g.edges()) {
    if (!((subset >> u) & 1U) && !((subset >> v) & 1U)) return false;
  }
  return true;
}

}  // namespace

bool is_vertex_cover(const Graph& g, BitString subset, int subset_length) {
  require(subset_length == g.n_vertices(), "subset length " + std::to_string(subset_length) +
                                               " does not match " + std::to_string(g.n_vertices()) + " vertices");
  return covers_all(g, subset);
}

bool is_vertex_cover(const Graph& g, const std::string& subset) {
  return is_vertex_cover(g, from_bits(subset), static_cast<int>(subset.size()));
}

CoverSolution min_vertex_covers(const Graph& g) {
  const int n = g.n_vertices();
  require(n <= 20, "min_vertex_covers is exhaustive; n = " + std::to_string(n) + " exceeds 20");
  CoverSolution best{n + 1, {}};
  const BitString count = BitString{1} << n;
  for (BitString s = 0; s < count; ++s) {
    const int size = std::popcount(s);
    if (size > best.size || !covers_all(g, s)) continue;
    if (size < best.size) {
      best.size = size;
      best.covers.clear();
    }
    best.covers.push_back(s);
  }
  return best;
}

namespace {

// Bit position of pair (i, j), i < j, in the packed upper triangle; pair (0,1) is the most
// significant so that lexicographic comparison of labels matches integer comparison.
int pair_rank(int i, int j, int n) {
  int index = 0;
  for (int a = 0; a < i; ++a) index += n - 1 - a;
  index += j - i - 1;
  const int total = n * (n - 1) / 2;
  return total - 1 - index;
}

std::uint32_t minimal_code(const Graph& g, std::vector<int>* best_perm) {
  const int n = g.n_vertices();
  std::vector<int> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  std::uint32_t best = ~std::uint32_t{0};
  // Minimizing the code (over the reversed bit order) maximizes edges early; any fixed total
  // order works as long as it is applied consistently.
  do {
    std::uint32_t code = 0;
    for (auto [u, v] : g.edges()) {
      int a = perm[static_cast<std::size_t>(u)], b = perm[static_cast<std::size_t>(v)];
      if (a > b) std::swap(a, b);
      code |= std::uint32_t{1} << pair_rank(a, b, n);
    }
    if (code < best) {
      best = code;
      if (best_perm) *best_perm = perm;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

std::vector<std::uint8_t> encode_label(int n, std::uint32_t code) {
  return {static_cast<std::uint8_t>(n), static_cast<std::uint8_t>(code >> 16), static_cast<std::uint8_t>(code >> 8),
          static_cast<std::uint8_t>(code)};
}

}  // namespace

std::vector<std::uint8_t> canonical_form(const Graph& g) {
  require(g.n_vertices() <= 7, "canonical_form supports at most 7 vertices");
  return encode_label(g.n_vertices(), minimal_code(g, nullptr));
}

std::vector<Graph> enumerate_connected_graphs(int n) {
  require(n >= 1 && n <= 7, "enumerate_connected_graphs needs 1 <= n <= 7, got " + std::to_string(n));
  // Edge-by-edge augmentation over all isomorphism classes (connected or not), deduplicated by
  // canonical code at each edge count.
  std::vector<std::pair<std::uint32_t, Graph>> level{{0U, Graph(n, {})}};
  std::vector<Graph> connected;
  const int max_edges = n * (n - 1) / 2;
  for (int m = 0; m <= max_edges; ++m) {
    for (const auto& [code, g] : level) {
      if (g.is_connected()) connected.push_back(g);
    }
    if (m == max_edges) break;
    std::set<std::uint32_t> seen;
    std::vector<std::pair<std::uint32_t, Graph>> next;
    for (const auto& [code, g] : level) {
      for (int u = 0; u < n; ++u) {
        for (int v = u + 1; v < n; ++v) {
          if (std::binary_search(g.edges().begin(), g.edges().end(), Edge{u, v})) continue;
          auto edges = g.edges();
          edges.emplace_back(u, v);
          Graph candidate(n, std::move(edges));
          std::vector<int> perm;
          const std::uint32_t c = minimal_code(candidate, &perm);
          if (seen.insert(c).second) next.emplace_back(c, candidate.permuted(perm));
        }
      }
    }
    std::sort(next.begin(), next.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    level = std::move(next);
  }
  return connected;
}

Graph parse_graph(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  auto next_content_line = [&](std::string& out) {
    while (std::getline(in, out)) {
      ++line_no;
      if (!out.empty() && out.back() == '\r') out.pop_back();
      if (out.find_first_not_of(" \t") != std::string::npos) return true;
    }
    return false;
  };
  if (!next_content_line(line)) throw ParseError(1, "missing header '<n_vertices> <n_edges>'");
  long n = 0, m = 0;
  {
    std::istringstream ss(line);
    std::string extra;
    if (!(ss >> n >> m) || (ss >> extra)) throw ParseError(line_no, "header must be '<n_vertices> <n_edges>'");
    if (n < 1 || n > 32) throw ParseError(line_no, "n_vertices must be in [1, 32]");
    if (m < 0 || m > n * (n - 1) / 2) throw ParseError(line_no, "n_edges out of range");
  }
  std::vector<Edge> edges;
  for (long i = 0; i < m; ++i) {
    if (!next_content_line(line)) throw ParseError(line_no + 1, "expected " + std::to_string(m) + " edges, found " + std::to_string(i));
    std::istringstream ss(line);
    long u = 0, v = 0;
    std::string extra;
    if (!(ss >> u >> v) || (ss >> extra)) throw ParseError(line_no, "edge line must be '<u> <v>'");
    if (u < 0 || v < 0 || u >= n || v >= n) throw ParseError(line_no, "vertex index out of range");
    if (u >= v) throw ParseError(line_no, "edge must satisfy u < v");
    Edge e{static_cast<int>(u), static_cast<int>(v)};
    if (std::find(edges.begin(), edges.end(), e) != edges.end()) throw ParseError(line_no, "duplicate edge");
    edges.push_back(e);
  }
  if (next_content_line(line)) throw ParseError(line_no, "unexpected content after edge list");
  return Graph(static_cast<int>(n), std::move(edges));
}

Graph load_graph(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(0, "cannot open graph file " + path.string());
  try {
    return parse_graph(in);
  } catch (const ParseError& e) {
    throw ParseError(e.line(), e.detail(), path.string());
  }
}

void write_graph(std::ostream& out, const Graph& g) {
  out << g.n_vertices() << ' ' << g.n_edges() << '\n';
  for (auto [u, v] : g.edges()) out << u << ' ' << v << '\n';
}

void save_graph(const std::filesystem::path& path, const Graph& g) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write graph file " + path.string());
  write_graph(out, g);
}

}  // namespace qaoa
