#include "iiclab/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "iiclab/errors.hpp"

namespace iiclab {

DesignMatrix validate_design(Matrix X) {
  const Eigen::Index n = X.rows();
  const Eigen::Index d = X.cols();
  if (n == 0 || d == 0) fail(ErrorKind::BadShape, "design matrix is empty");
  if (d < n) {
    fail(ErrorKind::BadShape,
         "d=" + std::to_string(d) + " < n=" + std::to_string(n) + " (need d >= n)");
  }
  if (!X.allFinite()) fail(ErrorKind::NonFinite, "design matrix has non-finite entries");

  // Singular values of an n x d matrix with n <= d: O(n^2 d).
  const Eigen::BDCSVD<Matrix> svd(X);
  const Vector& sv = svd.singularValues();
  const double cutoff = kRankTolerance * sv(0) * static_cast<double>(std::max(n, d));
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > cutoff) ++rank;
  }
  if (rank < n) {
    fail(ErrorKind::RankDeficient,
         "numerical rank " + std::to_string(rank) + " < n=" + std::to_string(n));
  }
  Matrix gram = X * X.transpose();
  return DesignMatrix(std::move(X), std::move(gram));
}

double log_det_spd(const Matrix& A) {
  const Eigen::LLT<Matrix> llt(A);
  if (llt.info() != Eigen::Success) {
    fail(ErrorKind::NotPositiveDefinite, "Cholesky factorization failed");
  }
  double s = 0.0;
  for (Eigen::Index i = 0; i < A.rows(); ++i) {
    const double lii = llt.matrixLLT()(i, i);
    if (!(lii > 0.0)) fail(ErrorKind::NotPositiveDefinite, "non-positive Cholesky pivot");
    s += std::log(lii);
  }
  return 2.0 * s;
}

double log_det_gram(const DesignMatrix& D) { return log_det_spd(D.gram()); }

Vector pinv_apply(const DesignMatrix& D, const Vector& Y) {
  if (Y.size() != D.n()) fail(ErrorKind::BadShape, "Y length does not match n");
  if (!Y.allFinite()) fail(ErrorKind::NonFinite, "Y has non-finite entries");
  const Eigen::LLT<Matrix> llt(D.gram());
  if (llt.info() != Eigen::Success) {
    fail(ErrorKind::NotPositiveDefinite, "Gram matrix is not positive definite");
  }
  Vector alpha = llt.solve(Y);
  // One step of iterative refinement keeps X theta = Y tight on
  // moderately conditioned Gram matrices.
  const Vector r = Y - D.gram() * alpha;
  alpha += llt.solve(r);
  return D.X().transpose() * alpha;
}

KernelBasis kernel_basis(const DesignMatrix& D) {
  const Eigen::Index n = D.n();
  const Eigen::Index d = D.d();
  KernelBasis out;
  if (d == n) {
    out.Q.resize(d, 0);
    return out;
  }
  const Eigen::HouseholderQR<Matrix> qr(D.X().transpose());
  Matrix full = qr.householderQ() * Matrix::Identity(d, d);
  out.Q = full.rightCols(d - n);
  for (Eigen::Index c = 0; c < out.Q.cols(); ++c) {
    for (Eigen::Index r = 0; r < d; ++r) {
      const double v = out.Q(r, c);
      if (std::fabs(v) > 1e-12) {
        if (v < 0.0) out.Q.col(c) *= -1.0;
        break;
      }
    }
  }
  return out;
}

}  // namespace iiclab
