#pragma once

#include <algorithm>
#include <array>
#include <cstddef>

namespace qaoa::kernels::detail {

/// Inserts a zero at bit position `bit`, shifting higher bits up.
inline std::size_t insert_zero(std::size_t k, int bit) {
  const std::size_t low = k & ((std::size_t{1} << bit) - 1);
  return ((k >> bit) << (bit + 1)) | low;
}

/// Maps k in [0, 2^(total - N)) to the k-th index whose `bits` are all zero.
template <std::size_t N>
std::size_t insert_zeros(std::size_t k, std::array<int, N> bits) {
  std::sort(bits.begin(), bits.end());
  for (int b : bits) k = insert_zero(k, b);
  return k;
}

}  // namespace qaoa::kernels::detail
