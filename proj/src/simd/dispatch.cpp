#include <cstdlib>
#include <cstring>

#include "iiclab/simd/kernels.hpp"

namespace iiclab::simd {

#if !defined(IICLAB_HAVE_AVX2)
const KernelTable* avx2_kernels() noexcept { return nullptr; }
#endif

const KernelTable& active_kernels() noexcept {
  static const KernelTable& table = []() -> const KernelTable& {
    const char* forced = std::getenv("IIC_LAB_SIMD");
    if (forced && std::strcmp(forced, "scalar") == 0) return scalar_kernels();
    if (const KernelTable* t = avx2_kernels()) return *t;
    return scalar_kernels();
  }();
  return table;
}

void affine_map(std::span<const double> base, const double* q_colmajor, std::size_t rows,
                std::span<const double> w, std::span<double> out) {
  const KernelTable& k = active_kernels();
  for (std::size_t i = 0; i < rows; ++i) out[i] = base[i];
  for (std::size_t c = 0; c < w.size(); ++c) {
    k.axpy(w[c], q_colmajor + c * rows, out.data(), rows);
  }
}

}  // namespace iiclab::simd
