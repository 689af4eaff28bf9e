#include "iiclab/iic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "iiclab/errors.hpp"
#include "iiclab/lp.hpp"
#include "iiclab/rng.hpp"
#include "iiclab/simd/kernels.hpp"

namespace iiclab {
namespace {

constexpr double kLog2 = std::numbers::ln2;

void check_dimensions(double p, Index d, Index n) {
  if (n < 1 || d < n) {
    fail(ErrorKind::BadShape, "need d >= n >= 1 (d=" + std::to_string(d) +
                                  ", n=" + std::to_string(n) + ")");
  }
  if (p > 2.0 && 2.0 * d - p * (d - n) <= 0.0) {
    fail(ErrorKind::DimensionBound,
         "2d - p(d-n) <= 0 for p=" + std::to_string(p) + ", d=" + std::to_string(d) +
             ", n=" + std::to_string(n) + " (need d < np/(p-2))");
  }
}

// log((d-n)!)
double log_factorial(Index m) { return std::lgamma(static_cast<double>(m) + 1.0); }

}  // namespace

std::string_view to_string(V0Method m) noexcept {
  switch (m) {
    case V0Method::ClosedForm: return "closed_form";
    case V0Method::MonteCarlo: return "monte_carlo";
    case V0Method::N1Residue: return "n1_residue";
  }
  return "unknown";
}

double k1(double p, Index d, Index n) {
  if (!(p >= 2.0)) fail(ErrorKind::Usage, "k1 needs p >= 2");
  check_dimensions(p, d, n);
  const double dd = static_cast<double>(d);
  const double nn = static_cast<double>(n);
  const double a = 2.0 * dd - p * (dd - nn);
  if (!(a > 0.0)) fail(ErrorKind::DimensionBound, "2d - p(d-n) must be positive");
  const double log_two_gamma = kLog2 + std::lgamma(1.0 / p + 1.0);
  return (dd - nn) / nn * std::log(p * (p - 1.0) / (2.0 * std::numbers::pi)) +
         2.0 * dd / nn * log_two_gamma + a / (nn * p) * std::log(2.0 * p * std::numbers::e / a);
}

double k2(Index d, Index n) {
  check_dimensions(1.0, d, n);
  const double nn = static_cast<double>(n);
  return -2.0 * std::log(nn) - 2.0 / nn * (-static_cast<double>(d) * kLog2 + log_factorial(d - n));
}

double tau_star(double p, Index d, Index n, double norm_p_to_p) {
  if (!(norm_p_to_p > 0.0)) fail(ErrorKind::ZeroNorm, "tau* needs a nonzero interpolator");
  check_dimensions(p, d, n);
  const double nn = static_cast<double>(n);
  if (p == 1.0) return norm_p_to_p / nn;
  if (p == 2.0) return 2.0 * norm_p_to_p / nn;
  if (p > 2.0) return 2.0 * p * norm_p_to_p / (2.0 * d - p * (d - n));
  fail(ErrorKind::Usage, "tau* is defined for p = 1 and p >= 2");
}

IICBreakdown iic_ridge(const DesignMatrix& D, const Interpolator& interp) {
  if (interp.p != 2.0) fail(ErrorKind::Usage, "iic_ridge needs the p = 2 interpolator");
  const double sq = interp.theta.squaredNorm();
  if (!(sq > 0.0)) fail(ErrorKind::ZeroNorm, "theta* = 0 (Y = 0)");
  const double nn = static_cast<double>(D.n());
  IICBreakdown out;
  out.p = 2.0;
  out.log_det_gram = log_det_gram(D);
  out.ambient_constant = -std::log(nn);
  out.reg_term = std::log(sq);
  out.sharpness_term = out.log_det_gram / nn + out.ambient_constant;
  out.total = out.reg_term + out.sharpness_term;
  out.tau_star = tau_star(2.0, D.d(), D.n(), sq);
  return out;
}

IICBreakdown iic_smooth(const DesignMatrix& D, const Interpolator& interp, double p) {
  if (!(p >= 2.0)) fail(ErrorKind::Usage, "iic_smooth needs p >= 2");
  const Index d = D.d();
  const Index n = D.n();
  const double ambient = k1(p, d, n);
  const double norm = simd::sum_abs_pow({interp.theta.data(), static_cast<std::size_t>(d)}, p);
  if (!(norm > 0.0)) fail(ErrorKind::ZeroNorm, "theta* = 0 (Y = 0)");

  const double tmax = interp.theta.cwiseAbs().maxCoeff();
  const double tol = 1e-8 * tmax;
  std::optional<double> sum_log;
  bool any_zero = false;
  double acc = 0.0;
  for (Index j = 0; j < d; ++j) {
    const double a = std::fabs(interp.theta(j));
    if (a <= tol) {
      any_zero = true;
    } else {
      acc += std::log(a);
    }
  }
  if (!any_zero) sum_log = acc;
  if (p > 2.0 && any_zero) {
    fail(ErrorKind::ZeroCoordinate, "theta* has a (near-)zero coordinate; sum log|theta_j| diverges");
  }

  const double nn = static_cast<double>(n);
  const double a = 2.0 * d - p * (d - n);
  IICBreakdown out;
  out.p = p;
  out.log_det_gram = log_det_gram(D);
  out.ambient_constant = ambient;
  out.sum_log_abs_theta = sum_log;
  out.reg_term = a / (nn * p) * std::log(norm);
  out.sharpness_term = out.log_det_gram / nn + ambient;
  if (p > 2.0) out.sharpness_term += (p - 2.0) / nn * *sum_log;
  out.total = out.reg_term + out.sharpness_term;
  out.tau_star = tau_star(p, d, n, norm);
  return out;
}

V0Result v0_closed(const DesignMatrix& D, const SupportSigns& ss) {
  const Index n = D.n();
  const Index d = D.d();
  if (static_cast<Index>(ss.support.size()) != n) {
    fail(ErrorKind::SupportNotFull, "|S|=" + std::to_string(ss.support.size()) +
                                        " but the closed form needs |S| = n=" + std::to_string(n));
  }
  const Matrix& X = D.X();
  Matrix XS(n, n), XC(n, d - n);
  Vector s(n);
  {
    std::size_t k = 0;
    Index c = 0;
    for (Index j = 0; j < d; ++j) {
      if (k < ss.support.size() && ss.support[k] == j) {
        XS.col(static_cast<Index>(k)) = X.col(j);
        s(static_cast<Index>(k)) = ss.signs[k];
        ++k;
      } else {
        XC.col(c++) = X.col(j);
      }
    }
  }
  const Eigen::FullPivLU<Matrix> lu(XS);
  if (!lu.isInvertible()) fail(ErrorKind::SupportRankDeficient, "X_S is singular");
  const Matrix Psi = lu.solve(XC);
  V0Result out;
  out.method = V0Method::ClosedForm;
  out.psi = Psi.transpose() * s;
  double log_prod = 0.0;
  for (Index k = 0; k < out.psi.size(); ++k) {
    const double psi = out.psi(k);
    if (!(std::fabs(psi) < 1.0)) {
      fail(ErrorKind::InfiniteVolume,
           "|psi_" + std::to_string(k) + "| = " + std::to_string(std::fabs(psi)) + " >= 1");
    }
    log_prod -= std::log1p(-psi * psi);
  }
  const Index m = d - n;
  const Matrix IPP = Matrix::Identity(m, m) + Psi.transpose() * Psi;
  const double half_logdet = m > 0 ? 0.5 * log_det_spd(IPP) : 0.0;
  out.log_value = static_cast<double>(m) * kLog2 + half_logdet - log_factorial(m) + log_prod;
  out.value = std::exp(out.log_value);
  return out;
}

V0Result v0_monte_carlo(const DesignMatrix& D, const SupportSigns& ss, std::int64_t samples,
                        std::uint64_t seed, Index mc_dim_limit) {
  const Index n = D.n();
  const Index d = D.d();
  const Index m = d - n;
  if (m > mc_dim_limit) {
    fail(ErrorKind::DimensionTooHigh, "d-n=" + std::to_string(m) + " exceeds the Monte Carlo limit " +
                                          std::to_string(mc_dim_limit));
  }
  if (samples < 1) fail(ErrorKind::Usage, "need at least one Monte Carlo sample");
  V0Result out;
  out.method = V0Method::MonteCarlo;
  if (m == 0) {
    out.value = 1.0;
    out.log_value = 0.0;
    return out;
  }
  const Matrix Q = kernel_basis(D).Q;

  Vector w_abs = Vector::Ones(d);
  Vector w_lin = Vector::Zero(d);
  for (std::size_t k = 0; k < ss.support.size(); ++k) {
    w_abs(ss.support[k]) = 0.0;
    w_lin(ss.support[k]) = ss.signs[k];
  }
  std::vector<Index> C;
  for (Index j = 0; j < d; ++j) {
    if (w_abs(j) != 0.0) C.push_back(j);
  }

  // Body: sum_{j in C} t_j + sum_{j in S} s_j (Qw)_j <= 1,  |(Qw)_j| <= t_j.
  const Index nc = static_cast<Index>(C.size());
  const Index nv = m + nc;
  Matrix Aub = Matrix::Zero(2 * nc + 1, nv);
  Vector bub = Vector::Zero(2 * nc + 1);
  for (Index r = 0; r < nc; ++r) {
    const Index j = C[static_cast<std::size_t>(r)];
    Aub.row(2 * r).head(m) = Q.row(j);
    Aub(2 * r, m + r) = -1.0;
    Aub.row(2 * r + 1).head(m) = -Q.row(j);
    Aub(2 * r + 1, m + r) = -1.0;
  }
  Aub.row(2 * nc).head(m) = (w_lin.asDiagonal() * Q).colwise().sum();
  Aub.row(2 * nc).tail(nc).setOnes();
  bub(2 * nc) = 1.0;

  Vector lo(m), hi(m);
  for (Index k = 0; k < m; ++k) {
    for (double sgn : {1.0, -1.0}) {
      Vector c = Vector::Zero(nv);
      c(k) = -sgn;  // maximize sgn * w_k
      const LpResult lp = linprog_free(c, Aub, bub, Matrix(0, nv), Vector(0));
      if (lp.status == LpStatus::Unbounded) {
        fail(ErrorKind::UnboundedBody, "kernel body is unbounded along axis " + std::to_string(k));
      }
      if (lp.status != LpStatus::Optimal) {
        fail(ErrorKind::UnboundedBody, "bounding-box LP failed along axis " + std::to_string(k));
      }
      const double extent = -lp.objective;
      if (sgn > 0.0) {
        hi(k) = extent * (1.0 + 1e-9) + 1e-300;
      } else {
        lo(k) = -extent * (1.0 + 1e-9) - 1e-300;
      }
    }
  }
  double log_box = 0.0;
  for (Index k = 0; k < m; ++k) log_box += std::log(hi(k) - lo(k));

  const simd::KernelTable& kt = simd::active_kernels();
  CounterRng rng(seed, 0x0700ull);
  constexpr Index kBatch = 4096;
  Matrix W(m, kBatch);
  Matrix Z(d, kBatch);
  std::int64_t hits = 0;
  for (std::int64_t done = 0; done < samples; done += kBatch) {
    const Index b = static_cast<Index>(std::min<std::int64_t>(kBatch, samples - done));
    for (Index c = 0; c < b; ++c) {
      for (Index k = 0; k < m; ++k) W(k, c) = rng.uniform(lo(k), hi(k));
    }
    Z.leftCols(b).noalias() = Q * W.leftCols(b);
    for (Index c = 0; c < b; ++c) {
      const double phi =
          kt.weighted_abs_linear(Z.col(c).data(), w_abs.data(), w_lin.data(), static_cast<std::size_t>(d));
      if (phi <= 1.0) ++hits;
    }
  }
  const double frac = static_cast<double>(hits) / static_cast<double>(samples);
  const double box = std::exp(log_box);
  out.value = box * frac;
  out.log_value = hits > 0 ? log_box + std::log(frac) : -std::numeric_limits<double>::infinity();
  out.mc_std_error = box * std::sqrt(frac * (1.0 - frac) / static_cast<double>(samples));
  return out;
}

IICBreakdown iic_sparse(const DesignMatrix& D, const Interpolator& interp, const V0Result& v0) {
  if (interp.p != 1.0) fail(ErrorKind::Usage, "iic_sparse needs the p = 1 interpolator");
  if (interp.certificate && !interp.certificate->unique) {
    fail(ErrorKind::NotUnique, "l1 interpolator is not certified unique");
  }
  const double l1 = interp.theta.cwiseAbs().sum();
  if (!(l1 > 0.0)) fail(ErrorKind::ZeroNorm, "theta* = 0 (Y = 0)");
  if (!std::isfinite(v0.log_value)) fail(ErrorKind::InfiniteVolume, "V0 estimate is not finite");
  const Index n = D.n();
  const double nn = static_cast<double>(n);
  IICBreakdown out;
  out.p = 1.0;
  out.log_det_gram = log_det_gram(D);
  out.ambient_constant = k2(D.d(), n);
  out.log_v0 = v0.log_value;
  out.v0_method = v0.method;
  out.reg_term = 2.0 * std::log(l1);
  out.sharpness_term = out.log_det_gram / nn - 2.0 / nn * v0.log_value + out.ambient_constant;
  out.total = out.reg_term + out.sharpness_term;
  out.tau_star = tau_star(1.0, D.d(), n, l1);
  return out;
}

IICBreakdown iic_sparse_n1(const Vector& x, double Y) {
  const Index d = x.size();
  if (d < 1) fail(ErrorKind::BadShape, "empty design row");
  if (!x.allFinite() || !std::isfinite(Y)) fail(ErrorKind::NonFinite, "non-finite input");
  if (Y == 0.0) fail(ErrorKind::ZeroNorm, "Y = 0");

  Index top = 0;
  for (Index j = 1; j < d; ++j) {
    if (std::fabs(x(j)) > std::fabs(x(top))) top = j;
  }
  const double xmax = std::fabs(x(top));
  if (!(xmax > 0.0)) fail(ErrorKind::RankDeficient, "x = 0");
  std::vector<double> sq(static_cast<std::size_t>(d));
  for (Index j = 0; j < d; ++j) sq[static_cast<std::size_t>(j)] = x(j) * x(j);
  for (Index j = 0; j < d; ++j) {
    if (j != top && std::fabs(sq[static_cast<std::size_t>(j)] - xmax * xmax) <= 1e-12 * xmax * xmax) {
      fail(ErrorKind::TiedMaximum, "max |x_j| is attained more than once");
    }
  }
  std::vector<double> sorted = sq;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t j = 1; j < sorted.size(); ++j) {
    if (sorted[j] - sorted[j - 1] <= 1e-12 * sorted[j]) {
      fail(ErrorKind::DegenerateCoordinates, "x_j^2 values collide");
    }
  }

  const double xi2 = xmax * xmax;
  // log prod_{j != I} x_I^2 / (x_I^2 - x_j^2) = -sum log(1 - x_j^2 / x_I^2)
  double log_prod = 0.0;
  for (Index j = 0; j < d; ++j) {
    if (j != top) log_prod -= std::log1p(-sq[static_cast<std::size_t>(j)] / xi2);
  }
  const double l1 = std::fabs(Y) / xmax;
  IICBreakdown out;
  out.p = 1.0;
  out.log_det_gram = std::log(x.squaredNorm());
  out.ambient_constant = k2(d, 1);
  out.reg_term = 2.0 * std::log(l1);
  out.sharpness_term = -2.0 * (-std::log(2.0 * xmax) + log_prod);
  out.total = out.reg_term + out.sharpness_term;
  out.tau_star = l1;
  out.v0_method = V0Method::N1Residue;
  out.log_v0 = static_cast<double>(d - 1) * kLog2 + 0.5 * std::log(x.squaredNorm() / xi2) -
               log_factorial(d - 1) + log_prod;
  return out;
}

double pac_bayes_bound(double free_energy, double delta, double s2, std::int64_t n) {
  if (!(delta > 0.0 && delta < 1.0)) fail(ErrorKind::Usage, "delta must lie in (0, 1)");
  if (!(s2 >= 0.0)) fail(ErrorKind::Usage, "s2 must be nonnegative");
  if (n < 1) fail(ErrorKind::Usage, "n must be positive");
  return (free_energy - std::log(delta) + 0.5 * s2) / std::sqrt(static_cast<double>(n));
}

}  // namespace iiclab
