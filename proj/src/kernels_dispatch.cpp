#include "grw/kernels.hpp"

#include <cstdlib>
#include <cstring>

namespace grw {
namespace {

const KernelSet* select() {
  const char* mode = std::getenv("GRWFLOW_SIMD");
  if (mode != nullptr) {
    if (std::strcmp(mode, "scalar") == 0) return &kernels_scalar();
    if (std::strcmp(mode, "avx2") == 0) {
      const KernelSet* k = kernels_avx2();
      return k != nullptr ? k : &kernels_scalar();
    }
  }
  const KernelSet* k = kernels_avx2();
  return k != nullptr ? k : &kernels_scalar();
}

}  // namespace

const KernelSet& kernels() {
  static const KernelSet* active = select();
  return *active;
}

}  // namespace grw
