#include <cmath>

#include "iiclab/simd/kernels.hpp"

namespace iiclab::simd {
namespace {

double dot_scalar(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

void axpy_scalar(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

double sum_abs_pow_scalar(const double* x, std::size_t n, double p) {
  double s = 0.0;
  if (p == 1.0) {
    for (std::size_t i = 0; i < n; ++i) s += std::fabs(x[i]);
  } else if (p == 2.0) {
    for (std::size_t i = 0; i < n; ++i) s += x[i] * x[i];
  } else if (p == 3.0) {
    for (std::size_t i = 0; i < n; ++i) {
      const double a = std::fabs(x[i]);
      s += a * a * a;
    }
  } else if (p == 4.0) {
    for (std::size_t i = 0; i < n; ++i) {
      const double q = x[i] * x[i];
      s += q * q;
    }
  } else {
    for (std::size_t i = 0; i < n; ++i) s += std::pow(std::fabs(x[i]), p);
  }
  return s;
}

double weighted_abs_linear_scalar(const double* z, const double* w_abs,
                                  const double* w_lin, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += w_abs[i] * std::fabs(z[i]) + w_lin[i] * z[i];
  return s;
}

void lp_derivatives_scalar(const double* x, std::size_t n, double p, double* grad,
                           double* curv) {
  for (std::size_t i = 0; i < n; ++i) {
    const double a = std::fabs(x[i]);
    const double sgn = x[i] > 0.0 ? 1.0 : (x[i] < 0.0 ? -1.0 : 0.0);
    double c;
    if (p == 2.0) {
      c = 1.0;
    } else if (p == 3.0) {
      c = a;
    } else if (p == 4.0) {
      c = a * a;
    } else {
      c = std::pow(a, p - 2.0);
    }
    grad[i] = sgn * a * c;
    if (curv) curv[i] = c;
  }
}

}  // namespace

const KernelTable& scalar_kernels() noexcept {
  static const KernelTable table{"scalar",
                                 &dot_scalar,
                                 &axpy_scalar,
                                 &sum_abs_pow_scalar,
                                 &weighted_abs_linear_scalar,
                                 &lp_derivatives_scalar};
  return table;
}

}  // namespace iiclab::simd
