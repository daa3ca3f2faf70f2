#include "simfuse/kernels.hpp"

#include <atomic>
#include <cstdlib>

#include "kernels_impl.hpp"

namespace simfuse::kernels {
namespace {

const KernelSet kScalar{"scalar", detail::dot_scalar, detail::axpy_scalar, detail::scale_scalar};

#ifdef SIMFUSE_HAVE_AVX2
const KernelSet kAvx2{"avx2", detail::dot_avx2, detail::axpy_avx2, detail::scale_avx2};

bool cpu_has_avx2() {
  static const bool supported = [] {
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  }();
  return supported;
}
#endif

const KernelSet& pick_default() {
  if (const char* env = std::getenv("SIMFUSE_KERNELS")) {
    if (const KernelSet* set = find(env)) return *set;
  }
  if (const KernelSet* set = avx2()) return *set;
  return kScalar;
}

std::atomic<const KernelSet*>& slot() {
  static std::atomic<const KernelSet*> current{&pick_default()};
  return current;
}

}  // namespace

const KernelSet& scalar() { return kScalar; }

const KernelSet* avx2() {
#ifdef SIMFUSE_HAVE_AVX2
  if (cpu_has_avx2()) return &kAvx2;
#endif
  return nullptr;
}

const KernelSet* find(std::string_view name) {
  if (name == kScalar.name) return &kScalar;
  if (name == "avx2") return avx2();
  return nullptr;
}

const KernelSet& active() { return *slot().load(std::memory_order_acquire); }

void set_active(const KernelSet& set) { slot().store(&set, std::memory_order_release); }

}  // namespace simfuse::kernels
