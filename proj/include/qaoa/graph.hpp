#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace qaoa {

using Edge = std::pair<int, int>;

/// Bit string over graph vertices; bit i (LSB = vertex 0) set means vertex i is selected.
/// Matches the simulator's basis-state indexing (qubit 0 is the least significant bit).
using BitString = std::uint32_t;

/// Undirected simple graph with a normalized, sorted, deduplicated edge list.
class Graph {
 public:
  Graph() = default;

  /// Normalizes (u < v), sorts and deduplicates. Rejects self-loops and out-of-range endpoints.
  Graph(int n_vertices, std::vector<Edge> edges);

  int n_vertices() const noexcept { return n_; }
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  std::size_t n_edges() const noexcept { return edges_.size(); }
  std::vector<int> degrees() const;
  bool is_connected() const;

  /// Relabels vertex v as perm[v].
  Graph permuted(const std::vector<int>& perm) const;

  friend bool operator==(const Graph&, const Graph&) = default;

 private:
  int n_ = 0;
  std::vector<Edge> edges_;
};

struct CoverSolution {
  int size = 0;
  std::vector<BitString> covers;  // ascending numeric order
};

/// Renders the first `n` bits with vertex 0 first, e.g. vertices {0,1} of 3 -> "110".
std::string to_bits(BitString bits, int n);
/// Inverse of to_bits. Throws ContractViolation on characters other than '0'/'1'.
BitString from_bits(const std::string& text);

bool is_vertex_cover(const Graph& g, BitString subset, int subset_length);
bool is_vertex_cover(const Graph& g, const std::string& subset);

/// Exhaustive scan of all 2^n subsets; n is capped at 20.
CoverSolution min_vertex_covers(const Graph& g);

/// Label equal for two graphs iff they are isomorphic. Minimizes the packed upper-triangle
/// adjacency bits over all n! relabelings, so n is capped at 7.
std::vector<std::uint8_t> canonical_form(const Graph& g);

/// One representative per isomorphism class of connected graphs on n vertices (1 <= n <= 7),
/// ordered by edge count then canonical label. Each representative is the canonical relabeling.
std::vector<Graph> enumerate_connected_graphs(int n);

// Text format: "n m" header then m lines of "u v".
Graph parse_graph(std::istream& in);
Graph load_graph(const std::filesystem::path& path);
void write_graph(std::ostream& out, const Graph& g);
void save_graph(const std::filesystem::path& path, const Graph& g);

}  // namespace qaoa
