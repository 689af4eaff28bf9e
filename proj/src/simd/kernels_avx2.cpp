// Compiled with -mavx2 -mfma; only reached after a runtime CPU check.
#include <immintrin.h>

#include <cmath>

#include "iiclab/simd/kernels.hpp"

namespace iiclab::simd {
namespace {

inline __m256d abs_pd(__m256d v) {
  return _mm256_andnot_pd(_mm256_set1_pd(-0.0), v);
}

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

double dot_avx2(const double* a, const double* b, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), acc1);
  }
  for (; i + 4 <= n; i += 4) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
  }
  double s = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

void axpy_avx2(double alpha, const double* x, double* y, std::size_t n) {
  const __m256d va = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(y + i, _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
  }
  for (; i < n; ++i) y[i] += alpha * x[i];
}

template <int P>
double sum_abs_pow_int(const double* x, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d v = _mm256_loadu_pd(x + i);
    if constexpr (P == 1) {
      acc = _mm256_add_pd(acc, abs_pd(v));
    } else if constexpr (P == 2) {
      acc = _mm256_fmadd_pd(v, v, acc);
    } else if constexpr (P == 3) {
      const __m256d a = abs_pd(v);
      acc = _mm256_fmadd_pd(_mm256_mul_pd(a, a), a, acc);
    } else {
      const __m256d q = _mm256_mul_pd(v, v);
      acc = _mm256_fmadd_pd(q, q, acc);
    }
  }
  double s = hsum(acc);
  for (; i < n; ++i) {
    const double a = std::fabs(x[i]);
    if constexpr (P == 1) {
      s += a;
    } else if constexpr (P == 2) {
      s += a * a;
    } else if constexpr (P == 3) {
      s += a * a * a;
    } else {
      s += (a * a) * (a * a);
    }
  }
  return s;
}

double sum_abs_pow_avx2(const double* x, std::size_t n, double p) {
  if (p == 1.0) return sum_abs_pow_int<1>(x, n);
  if (p == 2.0) return sum_abs_pow_int<2>(x, n);
  if (p == 3.0) return sum_abs_pow_int<3>(x, n);
  if (p == 4.0) return sum_abs_pow_int<4>(x, n);
  // No vector pow; fall back to the reference loop.
  return scalar_kernels().sum_abs_pow(x, n, p);
}

double weighted_abs_linear_avx2(const double* z, const double* w_abs, const double* w_lin,
                                std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d v = _mm256_loadu_pd(z + i);
    acc = _mm256_fmadd_pd(_mm256_loadu_pd(w_abs + i), abs_pd(v), acc);
    acc = _mm256_fmadd_pd(_mm256_loadu_pd(w_lin + i), v, acc);
  }
  double s = hsum(acc);
  for (; i < n; ++i) s += w_abs[i] * std::fabs(z[i]) + w_lin[i] * z[i];
  return s;
}

void lp_derivatives_avx2(const double* x, std::size_t n, double p, double* grad,
                         double* curv) {
  if (p != 2.0 && p != 3.0 && p != 4.0) {
    scalar_kernels().lp_derivatives(x, n, p, grad, curv);
    return;
  }
  const __m256d sign_mask = _mm256_set1_pd(-0.0);
  const __m256d one = _mm256_set1_pd(1.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d v = _mm256_loadu_pd(x + i);
    const __m256d a = abs_pd(v);
    __m256d c;
    if (p == 2.0) {
      c = one;
    } else if (p == 3.0) {
      c = a;
    } else {
      c = _mm256_mul_pd(a, a);
    }
    // |x| * c carries the sign of x; zero stays zero.
    const __m256d mag = _mm256_mul_pd(a, c);
    const __m256d g = _mm256_or_pd(mag, _mm256_and_pd(v, sign_mask));
    _mm256_storeu_pd(grad + i, g);
    if (curv) _mm256_storeu_pd(curv + i, c);
  }
  if (i < n) scalar_kernels().lp_derivatives(x + i, n - i, p, grad + i, curv ? curv + i : nullptr);
}

}  // namespace

const KernelTable* avx2_kernels() noexcept {
  static const KernelTable table{"avx2",
                                 &dot_avx2,
                                 &axpy_avx2,
                                 &sum_abs_pow_avx2,
                                 &weighted_abs_linear_avx2,
                                 &lp_derivatives_avx2};
  static const bool supported = [] {
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  }();
  return supported ? &table : nullptr;
}

}  // namespace iiclab::simd
