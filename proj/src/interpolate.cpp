#include "iiclab/interpolate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "iiclab/errors.hpp"
#include "iiclab/lp.hpp"
#include "iiclab/rng.hpp"
#include "iiclab/simd/kernels.hpp"

namespace iiclab {
namespace {

std::span<const double> as_span(const Vector& v) {
  return {v.data(), static_cast<std::size_t>(v.size())};
}

double inf_norm(const Vector& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }

Matrix gather_columns(const Matrix& X, const std::vector<Index>& cols) {
  Matrix out(X.rows(), static_cast<Index>(cols.size()));
  for (std::size_t k = 0; k < cols.size(); ++k) out.col(static_cast<Index>(k)) = X.col(cols[k]);
  return out;
}

std::vector<Index> complement(Index d, const std::vector<Index>& support) {
  std::vector<Index> out;
  std::size_t k = 0;
  for (Index j = 0; j < d; ++j) {
    if (k < support.size() && support[k] == j) {
      ++k;
    } else {
      out.push_back(j);
    }
  }
  return out;
}

bool full_column_rank(const Matrix& A) {
  if (A.cols() == 0) return true;
  if (A.cols() > A.rows()) return false;
  Eigen::ColPivHouseholderQR<Matrix> qr(A);
  qr.setThreshold(1e-10);
  return qr.rank() == A.cols();
}

void finish(const DesignMatrix& D, const Vector& Y, Interpolator& out, double support_rel_tol) {
  out.residual = (D.X() * out.theta - Y).norm();
  const double tol = support_rel_tol * inf_norm(out.theta);
  SupportSigns ss = detect_support(out.theta, tol);
  out.support = std::move(ss.support);
  out.signs = std::move(ss.signs);
}

}  // namespace

double Interpolator::norm_p_to_p() const { return simd::sum_abs_pow(as_span(theta), p); }

SupportSigns detect_support(const Vector& theta, double tol_support) {
  const double tol = tol_support < 0.0 ? 1e-8 * inf_norm(theta) : tol_support;
  SupportSigns out;
  for (Index j = 0; j < theta.size(); ++j) {
    if (std::fabs(theta(j)) > tol) {
      out.support.push_back(j);
      out.signs.push_back(theta(j) > 0.0 ? 1 : -1);
    }
  }
  return out;
}

Interpolator min_norm_l2(const DesignMatrix& D, const Vector& Y) {
  Interpolator out;
  out.p = 2.0;
  out.theta = pinv_apply(D, Y);
  finish(D, Y, out, 1e-8);
  return out;
}

Interpolator min_norm_lp(const DesignMatrix& D, const Vector& Y, double p,
                         const SolverOptions& opts) {
  if (!(p >= 2.0) || !std::isfinite(p)) {
    fail(ErrorKind::Usage, "min_norm_lp needs finite p >= 2, got " + std::to_string(p));
  }
  const simd::KernelTable& kt = simd::active_kernels();
  const Vector theta0 = pinv_apply(D, Y);
  const Matrix Q = kernel_basis(D).Q;
  const Index d = D.d();
  const Index k = Q.cols();

  Interpolator out;
  out.p = p;
  if (k == 0) {
    out.theta = theta0;
    finish(D, Y, out, opts.support_rel_tol);
    return out;
  }

  const auto objective = [&](const Vector& th) { return kt.sum_abs_pow(th.data(), d, p); };

  Vector w = Vector::Zero(k);
  Vector theta = theta0;
  Vector gtheta(d), curv(d), trial(d), dir_theta(d);
  double f = objective(theta);

  for (int iter = 0; iter < opts.max_iter; ++iter) {
    kt.lp_derivatives(theta.data(), d, p, gtheta.data(), curv.data());
    const Vector g = p * (Q.transpose() * gtheta);
    const double gnorm = inf_norm(g);
    if (gnorm <= opts.lp_grad_tol * std::max(1.0, f)) {
      out.theta = theta;
      out.stationarity = gnorm;
      out.iterations = iter;
      finish(D, Y, out, opts.support_rel_tol);
      return out;
    }

    // Armijo backtracking along dir (a step in w); true if f decreased.
    const auto line_search = [&](const Vector& dir) {
      dir_theta = Q * dir;
      const double slope = g.dot(dir);
      if (!(slope < 0.0)) return false;
      double t = 1.0;
      for (int bt = 0; bt < 80; ++bt) {
        trial = theta + t * dir_theta;
        const double ft = objective(trial);
        if (ft <= f + 1e-4 * t * slope) {
          w += t * dir;
          theta = trial;
          f = ft;
          return true;
        }
        t *= 0.5;
      }
      return false;
    };

    // The Hessian p(p-1) Q^T diag(|theta|^{p-2}) Q is singular once a
    // coordinate hits zero with p > 2; use a gradient step there.
    bool moved = false;
    if (p == 2.0 || theta.cwiseAbs().minCoeff() >= 1e-12) {
      const Matrix H = p * (p - 1.0) * (Q.transpose() * curv.asDiagonal() * Q);
      const Eigen::LLT<Matrix> llt(H);
      if (llt.info() == Eigen::Success) moved = line_search(-llt.solve(g));
    }
    if (!moved) {
      const double step = std::max(inf_norm(theta), 1e-300) / std::max(gnorm, 1e-300);
      moved = line_search(-step * g);
    }
    if (!moved) {
      // Line search cannot improve f in floating point: accept if the
      // gradient is at its rounding floor, otherwise report the stall.
      const double floor = 1e3 * std::numeric_limits<double>::epsilon() * p *
                           kt.sum_abs_pow(theta.data(), d, p - 1.0) * std::sqrt(double(d));
      if (gnorm <= std::max(floor, opts.lp_grad_tol * std::max(1.0, f))) {
        out.theta = theta;
        out.stationarity = gnorm;
        out.iterations = iter;
        finish(D, Y, out, opts.support_rel_tol);
        return out;
      }
      fail(ErrorKind::MaxIterations,
           "l_p Newton stalled at iteration " + std::to_string(iter) +
               " with ||g||_inf=" + std::to_string(gnorm));
    }
  }
  fail(ErrorKind::MaxIterations, "l_p Newton did not converge in " +
                                     std::to_string(opts.max_iter) + " iterations");
}

CertificateReport uniqueness_certificate(const DesignMatrix& D, const SupportSigns& ss,
                                         double cert_margin_tol) {
  if (ss.support.empty()) fail(ErrorKind::BadShape, "certificate needs a nonempty support");
  const Matrix& X = D.X();
  const Matrix XS = gather_columns(X, ss.support);
  if (!full_column_rank(XS)) {
    fail(ErrorKind::SupportRankDeficient,
         "X_S (|S|=" + std::to_string(ss.support.size()) + ") is not full column rank");
  }
  Vector s(static_cast<Index>(ss.signs.size()));
  for (std::size_t i = 0; i < ss.signs.size(); ++i) s(static_cast<Index>(i)) = ss.signs[i];

  // Minimum-norm mu with X_S^T mu = s: mu = X_S (X_S^T X_S)^{-1} s.
  const Matrix G = XS.transpose() * XS;
  const Eigen::LLT<Matrix> llt(G);
  Vector a = llt.solve(s);
  a += llt.solve(s - G * a);
  CertificateReport rep;
  rep.mu = XS * a;

  const std::vector<Index> C = complement(D.d(), ss.support);
  const auto off_support_max = [&](const Vector& mu) {
    double m = 0.0;
    for (Index j : C) m = std::max(m, std::fabs(X.col(j).dot(mu)));
    return m;
  };
  rep.max_abs_offsupport = off_support_max(rep.mu);

  // With |S| < n the minimum-norm mu is one of many; look for the one that
  // minimizes ||X_C^T mu||_inf before giving up on uniqueness.
  const Index n = D.n();
  if (!C.empty() && static_cast<Index>(ss.support.size()) < n &&
      rep.max_abs_offsupport >= 1.0 - cert_margin_tol) {
    const Index m = static_cast<Index>(C.size());
    Vector c = Vector::Zero(n + 1);
    c(n) = 1.0;
    Matrix Aub = Matrix::Zero(2 * m, n + 1);
    for (Index r = 0; r < m; ++r) {
      const Index j = C[static_cast<std::size_t>(r)];
      Aub.row(2 * r).head(n) = X.col(j).transpose();
      Aub(2 * r, n) = -1.0;
      Aub.row(2 * r + 1).head(n) = -X.col(j).transpose();
      Aub(2 * r + 1, n) = -1.0;
    }
    Matrix Aeq = Matrix::Zero(XS.cols(), n + 1);
    Aeq.leftCols(n) = XS.transpose();
    const LpResult lp = linprog_free(c, Aub, Vector::Zero(2 * m), Aeq, s);
    if (lp.status == LpStatus::Optimal) {
      const Vector mu = lp.x.head(n);
      const double off = off_support_max(mu);
      if ((XS.transpose() * mu - s).cwiseAbs().maxCoeff() <= 1e-9 && off < rep.max_abs_offsupport) {
        rep.mu = mu;
        rep.max_abs_offsupport = off;
      }
    }
  }
  rep.margin = 1.0 - rep.max_abs_offsupport;
  rep.unique = rep.max_abs_offsupport < 1.0 - cert_margin_tol;
  return rep;
}

namespace {

struct PolishResult {
  Vector theta;
  SupportSigns ss;
  CertificateReport cert;
  double gap = 0.0;
};

// Re-solve on a candidate support and check dual feasibility of the
// certificate; returns true when the vertex is provably optimal.
bool try_polish(const DesignMatrix& D, const Vector& Y, const std::vector<Index>& support,
                const SolverOptions& opts, PolishResult& out) {
  const Matrix XS = gather_columns(D.X(), support);
  if (!full_column_rank(XS)) return false;
  const Matrix G = XS.transpose() * XS;
  const Eigen::LLT<Matrix> llt(G);
  if (llt.info() != Eigen::Success) return false;
  const Vector rhs = XS.transpose() * Y;
  Vector ts = llt.solve(rhs);
  ts += llt.solve(XS.transpose() * (Y - XS * ts));
  const double ynorm = std::max(1.0, Y.norm());
  if ((XS * ts - Y).norm() > 1e-10 * ynorm) return false;
  const double tmax = inf_norm(ts);
  SupportSigns ss;
  for (std::size_t k = 0; k < support.size(); ++k) {
    const double v = ts(static_cast<Index>(k));
    if (std::fabs(v) <= 1e-14 * tmax) return false;
    ss.support.push_back(support[k]);
    ss.signs.push_back(v > 0.0 ? 1 : -1);
  }
  CertificateReport cert;
  try {
    cert = uniqueness_certificate(D, ss, opts.cert_margin_tol);
  } catch (const Error&) {
    return false;
  }
  if (cert.max_abs_offsupport > 1.0 + 1e-10) return false;
  Vector theta = Vector::Zero(D.d());
  for (std::size_t k = 0; k < support.size(); ++k) theta(support[k]) = ts(static_cast<Index>(k));
  const double l1 = theta.cwiseAbs().sum();
  const double gap = l1 - Y.dot(cert.mu);
  if (gap > opts.l1_gap_tol * std::max(1.0, l1)) return false;
  out.theta = std::move(theta);
  out.ss = std::move(ss);
  out.cert = std::move(cert);
  out.gap = std::max(gap, 0.0);
  return true;
}

}  // namespace

Interpolator solve_basis_pursuit(const DesignMatrix& D, const Vector& Y,
                                 const SolverOptions& opts) {
  const Index n = D.n();
  const Index d = D.d();
  const Matrix& X = D.X();
  const Vector theta_l2 = pinv_apply(D, Y);
  const double scale = inf_norm(theta_l2);

  Interpolator out;
  out.p = 1.0;
  if (scale == 0.0) {
    out.theta = Vector::Zero(d);
    CertificateReport cert;
    cert.mu = Vector::Zero(n);
    cert.unique = true;
    cert.margin = 1.0;
    out.certificate = cert;
    return out;
  }

  // ADMM on the split LP  min 1^T (u + v)  s.t.  X (u - v) = Y,  u, v >= 0.
  const Eigen::LLT<Matrix> gram2(2.0 * D.gram());
  Vector xu(d), xv(d), zu(d), zv(d), yu = Vector::Zero(d), yv = Vector::Zero(d);
  CounterRng rng(opts.seed, 0x11A5ull);
  for (Index j = 0; j < d; ++j) {
    zu(j) = rng.uniform(0.0, scale);
    zv(j) = rng.uniform(0.0, scale);
  }
  double rho = 1.0 / scale;
  std::vector<Index> order(static_cast<std::size_t>(d));

  for (int iter = 1; iter <= opts.max_iter; ++iter) {
    xu = zu - yu;
    xv = zv - yv;
    xu.array() -= 1.0 / rho;
    xv.array() -= 1.0 / rho;
    const Vector r = X * (xu - xv) - Y;
    const Vector corr = X.transpose() * gram2.solve(r);
    xu -= corr;
    xv += corr;

    const Vector zu_old = zu;
    const Vector zv_old = zv;
    zu = (xu + yu).cwiseMax(0.0);
    zv = (xv + yv).cwiseMax(0.0);
    yu += xu - zu;
    yv += xv - zv;

    if (iter % 50 == 0) {
      const double primal = std::sqrt((xu - zu).squaredNorm() + (xv - zv).squaredNorm());
      const double dual =
          rho * std::sqrt((zu - zu_old).squaredNorm() + (zv - zv_old).squaredNorm());
      if (primal > 10.0 * dual) {
        rho *= 2.0;
        yu /= 2.0;
        yv /= 2.0;
      } else if (dual > 10.0 * primal) {
        rho /= 2.0;
        yu *= 2.0;
        yv *= 2.0;
      }
    }

    if (iter % 10 == 0 || iter == opts.max_iter) {
      const Vector theta = zu - zv;
      const double tinf = inf_norm(theta);
      if (tinf == 0.0) continue;
      std::iota(order.begin(), order.end(), Index{0});
      std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) {
        return std::fabs(theta(a)) > std::fabs(theta(b));
      });
      for (double rel : {1e-6, 1e-3}) {
        Index count = 0;
        while (count < d && std::fabs(theta(order[static_cast<std::size_t>(count)])) > rel * tinf) {
          ++count;
        }
        const Index take = std::min(count, n);
        if (take == 0) continue;
        std::vector<Index> support(order.begin(), order.begin() + take);
        std::sort(support.begin(), support.end());
        PolishResult pr;
        if (try_polish(D, Y, support, opts, pr)) {
          out.theta = std::move(pr.theta);
          out.support = std::move(pr.ss.support);
          out.signs = std::move(pr.ss.signs);
          out.certificate = std::move(pr.cert);
          out.stationarity = pr.gap;
          out.iterations = iter;
          out.residual = (X * out.theta - Y).norm();
          return out;
        }
      }
    }
  }
  // ADMM did not settle on a certifiable support; solve the split LP
  // exactly and polish the vertex it returns.
  Matrix A(n, 2 * d);
  A.leftCols(d) = X;
  A.rightCols(d) = -X;
  const LpResult lp = simplex_standard(A, Y, Vector::Ones(2 * d));
  if (lp.status == LpStatus::Optimal) {
    const Vector theta = lp.x.head(d) - lp.x.tail(d);
    const double tinf = inf_norm(theta);
    std::vector<Index> support;
    for (Index j = 0; j < d; ++j) {
      if (std::fabs(theta(j)) > 1e-12 * tinf) support.push_back(j);
    }
    PolishResult pr;
    if (!support.empty() && static_cast<Index>(support.size()) <= n &&
        try_polish(D, Y, support, opts, pr)) {
      out.theta = std::move(pr.theta);
      out.support = std::move(pr.ss.support);
      out.signs = std::move(pr.ss.signs);
      out.certificate = std::move(pr.cert);
      out.stationarity = pr.gap;
      out.iterations = opts.max_iter;
      out.residual = (X * out.theta - Y).norm();
      return out;
    }
  }
  fail(ErrorKind::MaxIterations,
       "basis pursuit found no certified vertex in " + std::to_string(opts.max_iter) +
           " iterations");
}

Interpolator min_norm_l1(const DesignMatrix& D, const Vector& Y, const SolverOptions& opts) {
  Interpolator out = solve_basis_pursuit(D, Y, opts);
  if (out.certificate && !out.certificate->unique) {
    fail(ErrorKind::NotUnique, "l1 minimizer is not unique (certificate margin " +
                                   std::to_string(out.certificate->margin) + ")");
  }
  return out;
}

Interpolator min_norm_interpolator(const DesignMatrix& D, const Vector& Y, double p,
                                   const SolverOptions& opts) {
  if (p == 1.0) return min_norm_l1(D, Y, opts);
  if (p == 2.0) return min_norm_l2(D, Y);
  return min_norm_lp(D, Y, p, opts);
}

}  // namespace iiclab
