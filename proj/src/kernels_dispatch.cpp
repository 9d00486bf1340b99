#include <atomic>
#include <cstdlib>
#include <string_view>

#include "qaoa/kernels.hpp"

namespace qaoa::kernels {

namespace detail {
const KernelTable& avx2_table_unchecked();
bool avx2_compiled();
}  // namespace detail

namespace {

bool cpu_has_avx2() {
#if defined(__x86_64__) || defined(_M_X64)
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const KernelTable* initial_table() {
  const KernelTable* avx2 = avx2_table();
  if (const char* forced = std::getenv("QAOA_KERNELS")) {
    const std::string_view name(forced);
    if (name == "scalar") return &scalar_table();
    if (name == "avx2" && avx2) return avx2;
  }
  return avx2 ? avx2 : &scalar_table();
}

std::atomic<const KernelTable*>& current() {
  static std::atomic<const KernelTable*> table{initial_table()};
  return table;
}

}  // namespace

const KernelTable* avx2_table() {
  static const bool supported = detail::avx2_compiled() && cpu_has_avx2();
  return supported ? &detail::avx2_table_unchecked() : nullptr;
}

const KernelTable& active() { return *current().load(std::memory_order_relaxed); }

void set_active(const KernelTable& table) { current().store(&table, std::memory_order_relaxed); }

}  // namespace qaoa::kernels
