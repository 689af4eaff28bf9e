#pragma once
// Interpolating Information Criterion for minimum l_p-norm interpolators,
// split into a regularization term (a function of the interpolator's norm)
// and a sharpness term (data geometry, local curvature, kernel volume).
//
//   p = 2 : reg = log ||theta||_2^2,
//           sharp = (1/n) log det(XX^T) - log n
//   p >= 2: reg = (2d - p(d-n))/(np) log ||theta||_p^p,
//           sharp = (1/n) log det(XX^T) + (p-2)/n sum_j log|theta_j| + K1(p,d,n)
//   p = 1 : reg = 2 log ||theta||_1,
//           sharp = (1/n) log det(XX^T) - (2/n) log V0 + K2(d,n)
//
// All constants are kept, so totals are comparable across (n, d).

#include <cstdint>
#include <optional>
#include <string_view>

#include "iiclab/interpolate.hpp"

namespace iiclab {

enum class V0Method { ClosedForm, MonteCarlo, N1Residue };

std::string_view to_string(V0Method m) noexcept;

struct V0Result {
  double value = 0.0;
  double log_value = 0.0;
  V0Method method = V0Method::ClosedForm;
  double mc_std_error = 0.0;
  Vector psi;  // closed form only
};

struct IICBreakdown {
  double p = 2.0;
  double total = 0.0;
  double reg_term = 0.0;
  double sharpness_term = 0.0;
  double ambient_constant = 0.0;  // K1, K2 or -log n
  double tau_star = 0.0;
  double log_det_gram = 0.0;
  std::optional<double> sum_log_abs_theta;  // p >= 2
  std::optional<double> log_v0;             // p = 1
  std::optional<V0Method> v0_method;        // p = 1
};

/// Ambient constant for p >= 2; requires 2d - p(d-n) > 0.
double k1(double p, Index d, Index n);

/// Ambient constant for p = 1: -2 log n - (2/n) log(2^{-d} (d-n)!).
double k2(Index d, Index n);

IICBreakdown iic_ridge(const DesignMatrix& D, const Interpolator& interp);

IICBreakdown iic_smooth(const DesignMatrix& D, const Interpolator& interp, double p);

/// V0 = 2^{d-n} sqrt(det(I + Psi^T Psi)) / (d-n)! * prod_k 1/(1 - psi_k^2)
/// with Psi = X_S^{-1} X_C and psi = Psi^T s. Needs |S| = n.
V0Result v0_closed(const DesignMatrix& D, const SupportSigns& ss);

inline constexpr Index kDefaultMcDimLimit = 6;

/// Rejection estimate of Vol{w : ||(Qw)_C||_1 + s . (Qw)_S <= 1} inside the
/// bounding box found by 2(d-n) linear programs.
V0Result v0_monte_carlo(const DesignMatrix& D, const SupportSigns& ss, std::int64_t samples,
                        std::uint64_t seed, Index mc_dim_limit = kDefaultMcDimLimit);

IICBreakdown iic_sparse(const DesignMatrix& D, const Interpolator& interp, const V0Result& v0);

/// Closed form for a single observation: x is the one row of X.
IICBreakdown iic_sparse_n1(const Vector& x, double Y);

/// Optimal prior scale; norm_p_to_p is ||theta||_p^p (||theta||_1 for p = 1).
double tau_star(double p, Index d, Index n, double norm_p_to_p);

/// (free_energy - log delta + s2 / 2) / sqrt(n)
double pac_bayes_bound(double free_energy, double delta, double s2, std::int64_t n);

}  // namespace iiclab
