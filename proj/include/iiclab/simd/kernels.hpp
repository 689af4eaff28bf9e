#pragma once
// Data-parallel inner loops shared by the solvers, the oracle integrands and
// the Monte Carlo volume estimator. Each kernel has a scalar reference
// implementation and, on x86-64, an AVX2+FMA variant chosen at runtime.

#include <cstddef>
#include <span>
#include <string_view>

namespace iiclab::simd {

struct KernelTable {
  std::string_view name;

  /// sum_i a[i] * b[i]
  double (*dot)(const double* a, const double* b, std::size_t n);

  /// y[i] += alpha * x[i]
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);

  /// sum_i |x[i]|^p. Integer p in {1,2,3,4} take exact multiply paths.
  double (*sum_abs_pow)(const double* x, std::size_t n, double p);

  /// sum_i ( w_abs[i] * |z[i]| + w_lin[i] * z[i] )
  double (*weighted_abs_linear)(const double* z, const double* w_abs,
                                const double* w_lin, std::size_t n);

  /// grad[i] = |x|^(p-1) sgn(x),  curv[i] = |x|^(p-2)  (curv unused when null)
  void (*lp_derivatives)(const double* x, std::size_t n, double p,
                         double* grad, double* curv);
};

const KernelTable& scalar_kernels() noexcept;

/// nullptr when the AVX2 variant is not compiled in or the CPU lacks AVX2/FMA.
const KernelTable* avx2_kernels() noexcept;

/// Best available table. Setting IIC_LAB_SIMD=scalar forces the reference path.
const KernelTable& active_kernels() noexcept;

// Convenience wrappers over the active table.
inline double dot(std::span<const double> a, std::span<const double> b) {
  return active_kernels().dot(a.data(), b.data(), a.size());
}

inline double sum_abs_pow(std::span<const double> x, double p) {
  return active_kernels().sum_abs_pow(x.data(), x.size(), p);
}

/// out = base + Q * w with Q stored column-major (rows x cols).
void affine_map(std::span<const double> base, const double* q_colmajor,
                std::size_t rows, std::span<const double> w, std::span<double> out);

}  // namespace iiclab::simd
