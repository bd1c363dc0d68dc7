#include <atomic>
#include <cstdlib>
#include <string_view>

#include "kernels/tables.hpp"

namespace wavelab::kernels {
namespace {

bool cpu_has_avx2() noexcept {
#if defined(WAVELAB_HAS_AVX2) && (defined(__GNUC__) || defined(__clang__))
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

const KernelTable* initial_table() noexcept {
  const char* env = std::getenv("WAVELAB_SIMD");
  const std::string_view choice = env ? env : "auto";
  if (choice == "scalar") return &scalar_table();
  if (const KernelTable* t = avx2_table()) return t;
  return &scalar_table();
}

std::atomic<const KernelTable*>& current() noexcept {
  static std::atomic<const KernelTable*> table{initial_table()};
  return table;
}

}  // namespace

const KernelTable* avx2_table() noexcept {
#ifdef WAVELAB_HAS_AVX2
  if (cpu_has_avx2()) return &avx2_table_unchecked();
#endif
  return nullptr;
}

const KernelTable& active() noexcept { return *current().load(std::memory_order_relaxed); }

bool select(Variant v) noexcept {
  const KernelTable* t = v == Variant::scalar ? &scalar_table() : avx2_table();
  if (t == nullptr) return false;
  current().store(t, std::memory_order_relaxed);
  return true;
}

}  // namespace wavelab::kernels
