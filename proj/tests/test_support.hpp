#pragma once

#include <algorithm>
#include <numeric>
#include <random>
#include <vector>

#include "qaoa/graph.hpp"

namespace qaoa::testing {

inline Graph triangle() { return Graph(3, {{0, 1}, {0, 2}, {1, 2}}); }
inline Graph star5() { return Graph(5, {{0, 1}, {0, 2}, {0, 3}, {0, 4}}); }
inline Graph path5() { return Graph(5, {{0, 1}, {1, 2}, {2, 3}, {3, 4}}); }
inline Graph cycle5() { return Graph(5, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {0, 4}}); }
inline Graph single_edge() { return Graph(2, {{0, 1}}); }

inline std::vector<int> random_permutation(int n, std::mt19937_64& rng) {
  std::vector<int> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  return perm;
}

inline std::vector<double> uniform_params(std::size_t dim, std::mt19937_64& rng, double hi = 6.283185307179586) {
  std::uniform_real_distribution<double> u(0.0, hi);
  std::vector<double> x(dim);
  for (auto& v : x) v = u(rng);
  return x;
}

}  // namespace qaoa::testing
