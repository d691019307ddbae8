#include <atomic>
#include <cstdlib>
#include <string_view>

#include "kernels_impl.hpp"

namespace gradcons::kernels {
namespace {

const KernelTable* pick_default() {
  const char* env = std::getenv("GRADCONS_SIMD");
  const std::string_view choice = env ? env : "auto";
  if (choice == "scalar") return &scalar_table();
  if (const KernelTable* simd = table_for(Variant::Avx2)) return simd;
  return &scalar_table();
}

std::atomic<const KernelTable*>& slot() {
  static std::atomic<const KernelTable*> current{pick_default()};
  return current;
}

}  // namespace

const KernelTable* table_for(Variant v) {
  switch (v) {
    case Variant::Scalar:
      return &scalar_table();
    case Variant::Avx2:
#if defined(GRADCONS_HAVE_AVX2)
      if (detail::cpu_has_avx2()) return &detail::avx2_table();
#endif
      return nullptr;
  }
  return nullptr;
}

const KernelTable& active() { return *slot().load(std::memory_order_relaxed); }

bool select(Variant v) {
  const KernelTable* table = table_for(v);
  if (!table) return false;
  slot().store(table, std::memory_order_relaxed);
  return true;
}

}  // namespace gradcons::kernels
