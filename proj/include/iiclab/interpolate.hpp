#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "iiclab/linalg.hpp"

namespace iiclab {

struct SolverOptions {
  int max_iter = 10000;
  /// Newton acceptance: ||Q^T grad||_inf <= lp_grad_tol * max(1, ||theta||_p^p).
  double lp_grad_tol = 1e-10;
  /// l1 acceptance: duality gap <= l1_gap_tol * max(1, ||theta||_1).
  double l1_gap_tol = 1e-8;
  /// Uniqueness needs ||X_C^T mu||_inf < 1 - cert_margin_tol.
  double cert_margin_tol = 1e-6;
  /// Support threshold relative to ||theta||_inf.
  double support_rel_tol = 1e-8;
  /// Seed for the randomized l1 starting point.
  std::uint64_t seed = 0;
};

struct SupportSigns {
  std::vector<Index> support;  // ascending, 0-based
  std::vector<int> signs;      // +1 / -1, aligned with support
};

struct CertificateReport {
  Vector mu;
  double max_abs_offsupport = 0.0;
  bool unique = false;
  double margin = 0.0;
};

struct Interpolator {
  Vector theta;
  double p = 2.0;
  std::vector<Index> support;
  std::vector<int> signs;
  double residual = 0.0;      // ||X theta - Y||_2
  double stationarity = 0.0;  // ||Q^T grad||_inf (p >= 2) or duality gap (p = 1)
  int iterations = 0;
  std::optional<CertificateReport> certificate;  // p = 1 only

  /// ||theta||_p^p
  double norm_p_to_p() const;
};

Interpolator min_norm_l2(const DesignMatrix& D, const Vector& Y);

/// Minimum l_p norm interpolator for p >= 2 via damped Newton in ker X.
Interpolator min_norm_lp(const DesignMatrix& D, const Vector& Y, double p,
                         const SolverOptions& opts = {});

/// Basis pursuit. Throws NotUnique if the certificate margin is too thin.
Interpolator min_norm_l1(const DesignMatrix& D, const Vector& Y, const SolverOptions& opts = {});

/// Same as min_norm_l1 but reports non-unique minimizers instead of
/// throwing; the returned theta is an optimal vertex either way.
Interpolator solve_basis_pursuit(const DesignMatrix& D, const Vector& Y,
                                 const SolverOptions& opts = {});

/// Dispatch on p: 1 -> basis pursuit, 2 -> pseudoinverse, > 2 -> Newton.
Interpolator min_norm_interpolator(const DesignMatrix& D, const Vector& Y, double p,
                                   const SolverOptions& opts = {});

/// Negative tol_support selects the default 1e-8 * ||theta||_inf.
SupportSigns detect_support(const Vector& theta, double tol_support = -1.0);

CertificateReport uniqueness_certificate(const DesignMatrix& D, const SupportSigns& ss,
                                         double cert_margin_tol = 1e-6);

}  // namespace iiclab
