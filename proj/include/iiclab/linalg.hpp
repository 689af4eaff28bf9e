#pragma once

#include <Eigen/Dense>

namespace iiclab {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Relative singular-value threshold used by the rank test; the absolute
/// cutoff is kRankTolerance * sigma_max * max(n, d).
inline constexpr double kRankTolerance = 1e-10;

/// An n x d design with d >= n and full row rank. Only constructible
/// through validate_design().
class DesignMatrix {
 public:
  const Matrix& X() const noexcept { return x_; }
  Eigen::Index n() const noexcept { return x_.rows(); }
  Eigen::Index d() const noexcept { return x_.cols(); }
  Eigen::Index kernel_dim() const noexcept { return x_.cols() - x_.rows(); }

  /// X X^T, cached at validation.
  const Matrix& gram() const noexcept { return gram_; }

 private:
  friend DesignMatrix validate_design(Matrix X);
  DesignMatrix(Matrix x, Matrix gram) : x_(std::move(x)), gram_(std::move(gram)) {}

  Matrix x_;
  Matrix gram_;
};

/// Orthonormal basis of ker X, one column per kernel direction.
struct KernelBasis {
  Matrix Q;  // d x (d - n)
};

DesignMatrix validate_design(Matrix X);

/// log det(X X^T) from the Cholesky factor of the Gram matrix.
double log_det_gram(const DesignMatrix& D);

/// X^T (X X^T)^{-1} Y, the minimum l2-norm solution of X theta = Y.
Vector pinv_apply(const DesignMatrix& D, const Vector& Y);

/// Deterministic orthonormal kernel basis: Householder QR of X^T, trailing
/// columns of the full Q factor, each column signed so its first entry with
/// magnitude above 1e-12 is positive.
KernelBasis kernel_basis(const DesignMatrix& D);

/// log det of a symmetric positive definite matrix via LLT. Throws
/// NotPositiveDefinite when the factorization breaks down.
double log_det_spd(const Matrix& A);

}  // namespace iiclab
