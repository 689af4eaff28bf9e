#include "iiclab/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "iiclab/errors.hpp"
#include "iiclab/quadrature.hpp"
#include "iiclab/rng.hpp"
#include "iiclab/simd/kernels.hpp"

namespace iiclab {
namespace {

constexpr double kTruncation = 40.0;
constexpr int kInnerMaxIntervals = 400;
constexpr double kInnerRelTol = 1e-12;
constexpr double kInvPhi = 0.6180339887498949;

double log_prior_normalizer(double p, Index d, double tau) {
  const double dd = static_cast<double>(d);
  return -dd * (std::numbers::ln2 + std::lgamma(1.0 / p + 1.0)) - dd / p * std::log(tau);
}

void check_tau(double tau) {
  if (!(tau > 0.0) || !std::isfinite(tau)) fail(ErrorKind::Usage, "tau must be positive and finite");
}

void check_rhs(const DesignMatrix& D, const Vector& Y) {
  if (Y.size() != D.n()) fail(ErrorKind::BadShape, "Y length does not match the rows of X");
  if (!Y.allFinite()) fail(ErrorKind::NonFinite, "non-finite entry in Y");
}

struct Golden {
  double x;
  double fx;
};

// Minimizes a convex function on [lo, hi]; the endpoints are candidates too.
template <class F>
Golden golden_min(F&& f, double lo, double hi) {
  double a = lo, b = hi;
  double c = b - kInvPhi * (b - a);
  double d = a + kInvPhi * (b - a);
  double fc = f(c), fd = f(d);
  for (int it = 0; it < 200; ++it) {
    if (b - a <= 1e-13 * std::max(1.0, std::fabs(a) + std::fabs(b))) break;
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kInvPhi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kInvPhi * (b - a);
      fd = f(d);
    }
  }
  Golden best = fc < fd ? Golden{c, fc} : Golden{d, fd};
  for (double e : {lo, hi}) {
    const double fe = f(e);
    if (fe < best.fx) best = {e, fe};
  }
  return best;
}

// h(w) = ||theta0 + Q w||_p^p / tau, integrated one kernel axis at a time.
// Level k integrates over w_k .. w_{m-1} with the earlier axes folded into
// `base` = theta0 + sum_{i<k} w_i Q_i.
class NestedIntegrator {
 public:
  NestedIntegrator(Vector theta0, Matrix Q, double p, double tau, double radius)
      : theta0_(std::move(theta0)), Q_(std::move(Q)), p_(p), tau_(tau), radius_(radius),
        m_(Q_.cols()), kinks_(!(p == 2.0 || p == 4.0 || p == 6.0)) {}

  struct Result {
    double value = 0.0;
    double abs_error = 0.0;
    bool converged = true;
  };

  double global_min() {
    h0_ = mode(0, theta0_).fx;
    return h0_;
  }

  Result integrate(int outer_budget, double rel_tol) { return level(0, theta0_, outer_budget, rel_tol); }

 private:
  Vector shifted(const Vector& base, Index k, double t) const {
    Vector v = base;
    simd::active_kernels().axpy(t, Q_.col(k).data(), v.data(), static_cast<std::size_t>(v.size()));
    return v;
  }

  double h(const Vector& v) const {
    return simd::sum_abs_pow({v.data(), static_cast<std::size_t>(v.size())}, p_) / tau_;
  }

  // min over axes > k of h, with axis k at t.
  double profile(Index k, const Vector& base, double t) const {
    const Vector v = shifted(base, k, t);
    if (k == m_ - 1) return h(v);
    return mode(k + 1, v).fx;
  }

  Golden mode(Index k, const Vector& base) const {
    return golden_min([&](double t) { return profile(k, base, t); }, -radius_, radius_);
  }

  // Point on [from, to] where the convex profile crosses `level`.
  double crossing(Index k, const Vector& base, double from, double to, double cut) const {
    if (profile(k, base, to) <= cut) return to;
    double inside = from, outside = to;
    for (int it = 0; it < 80; ++it) {
      const double mid = 0.5 * (inside + outside);
      if (profile(k, base, mid) <= cut) {
        inside = mid;
      } else {
        outside = mid;
      }
      if (std::fabs(outside - inside) <= 1e-14 * std::max(1.0, std::fabs(inside))) break;
    }
    return outside;
  }

  // Axis-k coordinates of the vertices of the arrangement {v_j = 0}
  // restricted to the remaining axes; the integrand is non-smooth there.
  std::vector<double> kinks(Index k, const Vector& base) const {
    std::vector<double> out;
    if (!kinks_) return out;
    const Index r = m_ - k;
    const Index d = Q_.rows();
    std::vector<Index> pick(static_cast<std::size_t>(r));
    for (Index i = 0; i < r; ++i) pick[static_cast<std::size_t>(i)] = i;
    while (true) {
      Matrix A(r, r);
      Vector rhs(r);
      for (Index i = 0; i < r; ++i) {
        const Index j = pick[static_cast<std::size_t>(i)];
        A.row(i) = Q_.block(j, k, 1, r);
        rhs(i) = -base(j);
      }
      Eigen::FullPivLU<Matrix> lu(A);
      if (lu.rank() == r) {
        const double t = lu.solve(rhs)(0);
        if (std::isfinite(t) && std::fabs(t) < radius_) out.push_back(t);
      }
      Index i = r - 1;
      while (i >= 0 && pick[static_cast<std::size_t>(i)] == d - r + i) --i;
      if (i < 0) break;
      ++pick[static_cast<std::size_t>(i)];
      for (Index j = i + 1; j < r; ++j) {
        pick[static_cast<std::size_t>(j)] = pick[static_cast<std::size_t>(j - 1)] + 1;
      }
    }
    return out;
  }

  Result level(Index k, const Vector& base, int budget, double rel_tol) const {
    const Golden top = mode(k, base);
    const double cut = h0_ + kTruncation;
    if (top.fx > cut) return {};
    const double lo = crossing(k, base, top.x, -radius_, cut);
    const double hi = crossing(k, base, top.x, radius_, cut);

    const bool innermost = k == m_ - 1;
    double inner_err = 0.0;
    bool inner_ok = true;
    auto f = [&](double t) {
      const Vector v = shifted(base, k, t);
      if (innermost) return std::exp(-(h(v) - h0_));
      const Result r = level(k + 1, v, kInnerMaxIntervals, kInnerRelTol);
      inner_err = std::max(inner_err, r.abs_error);
      inner_ok = inner_ok && r.converged;
      return r.value;
    };

    std::vector<double> bps = kinks(k, base);
    bps.push_back(top.x);
    const QuadResult q = integrate_adaptive(f, lo, hi, bps, rel_tol, 0.0, budget);

    // Log-concave tails beyond the truncation points, scaled by the mass of
    // the slice through the mode relative to its pointwise maximum.
    const double peak = f(top.x);
    const double scale = peak * std::exp(top.fx - h0_);
    const double drop = std::max(cut - top.fx, 1e-6);
    const double tails = scale * std::exp(-kTruncation) * ((top.x - lo) + (hi - top.x)) / drop;

    Result out;
    out.value = q.value;
    out.abs_error = q.abs_error + tails + inner_err * (hi - lo);
    out.converged = q.converged && inner_ok;
    return out;
  }

  Vector theta0_;
  Matrix Q_;
  double p_;
  double tau_;
  double radius_;
  Index m_;
  bool kinks_;
  double h0_ = 0.0;
};

// Radius of a Euclidean ball in kernel coordinates containing
// {w : h(w) <= h(0) + 40}.
double truncation_radius(const Vector& theta0, double p, double tau) {
  const Index d = theta0.size();
  const double norm_pp = simd::sum_abs_pow({theta0.data(), static_cast<std::size_t>(d)}, p);
  const double rp = std::pow(norm_pp + kTruncation * tau, 1.0 / p);
  const double norm_p = std::pow(norm_pp, 1.0 / p);
  const double cp = std::min(1.0, std::pow(static_cast<double>(d), 1.0 / p - 0.5));
  return 1.01 * (rp + norm_p) / cp;
}

double log_t5_density(double x) {
  constexpr double nu = 5.0;
  static const double log_norm =
      std::lgamma(0.5 * (nu + 1.0)) - std::lgamma(0.5 * nu) - 0.5 * std::log(nu * std::numbers::pi);
  return log_norm - 0.5 * (nu + 1.0) * std::log1p(x * x / nu);
}

double t5_draw(CounterRng& rng) {
  double chi2 = 0.0;
  for (int i = 0; i < 5; ++i) {
    const double z = rng.normal();
    chi2 += z * z;
  }
  return rng.normal() / std::sqrt(chi2 / 5.0);
}

// Kernel coordinates of a good center for importance sampling.
Vector mc_center(const DesignMatrix& D, const Vector& Y, const Vector& theta0, const Matrix& Q,
                 double p) {
  try {
    Vector theta;
    if (p == 1.0) {
      theta = solve_basis_pursuit(D, Y).theta;
    } else if (p >= 2.0) {
      theta = min_norm_interpolator(D, Y, p).theta;
    } else {
      return Vector::Zero(Q.cols());
    }
    return Q.transpose() * (theta - theta0);
  } catch (const Error&) {
    return Vector::Zero(Q.cols());
  }
}

DualPriorEstimate numeric_monte_carlo(const DesignMatrix& D, const Vector& Y, double p, double tau,
                                      const NumericBudget& budget, double log_front) {
  const Vector theta0 = pinv_apply(D, Y);
  const Matrix Q = kernel_basis(D).Q;
  const Index m = Q.cols();
  const Index d = D.d();
  const auto hfun = [&](const Vector& w) {
    const Vector v = theta0 + Q * w;
    return simd::sum_abs_pow({v.data(), static_cast<std::size_t>(d)}, p) / tau;
  };

  const Vector center = mc_center(D, Y, theta0, Q, p);
  const double hc = hfun(center);
  // Per-axis scale: distance along the axis at which h rises by one.
  Vector scale(m);
  for (Index k = 0; k < m; ++k) {
    double s_max = 0.0;
    for (double dir : {-1.0, 1.0}) {
      double step = 1e-6 * std::max(1.0, theta0.norm());
      Vector w = center;
      while (true) {
        w(k) = center(k) + dir * step;
        if (hfun(w) - hc >= 1.0 || step > 1e12) break;
        step *= 2.0;
      }
      double in = 0.0, out = step;
      for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (in + out);
        w(k) = center(k) + dir * mid;
        if (hfun(w) - hc >= 1.0) {
          out = mid;
        } else {
          in = mid;
        }
      }
      s_max = std::max(s_max, out);
    }
    scale(k) = 1.2 * s_max;
  }
  const double log_scale_sum = scale.array().log().sum();

  CounterRng rng(budget.seed, 0x6f7261636c65ull);
  const std::int64_t N = std::max<std::int64_t>(budget.mc_samples, 2);
  std::vector<double> logw(static_cast<std::size_t>(N));
  Vector z(m), w(m);
  for (std::int64_t i = 0; i < N; ++i) {
    double log_q = -log_scale_sum;
    for (Index k = 0; k < m; ++k) {
      z(k) = t5_draw(rng);
      log_q += log_t5_density(z(k));
    }
    w = center + scale.cwiseProduct(z);
    logw[static_cast<std::size_t>(i)] = -(hfun(w) - hc) - log_q;
  }
  const double top = *std::max_element(logw.begin(), logw.end());
  double mean = 0.0, sq = 0.0;
  for (double lw : logw) {
    const double r = std::exp(lw - top);
    mean += r;
    sq += r * r;
  }
  const double nn = static_cast<double>(N);
  mean /= nn;
  const double var = std::max(sq / nn - mean * mean, 0.0) * nn / (nn - 1.0);
  const double rel_se = std::sqrt(var / nn) / mean;

  DualPriorEstimate out;
  out.method = PriorMethod::MonteCarlo;
  out.tau = tau;
  out.log_value = log_front - hc + top + std::log(mean);
  out.abs_error_estimate = std::log1p(rel_se);
  if (!(out.abs_error_estimate <= budget.mc_rel_tol)) {
    fail(ErrorKind::BudgetExhausted, "Monte Carlo relative error " + std::to_string(rel_se) +
                                         " above tolerance; raise the sample count");
  }
  return out;
}

// Asymptotic free energy pieces shared by the three regimes.
struct AsymptoticModel {
  double p = 2.0;
  Index n = 0;
  Index d = 0;
  double log_det = 0.0;
  double norm = 0.0;     // ||theta*||_p^p
  double log_det_curvature = 0.0;  // log det(Q^T Lambda Q), p > 2
  double log_v0 = 0.0;   // p = 1

  double log_prior(double tau) const {
    const double nn = static_cast<double>(n);
    const double dd = static_cast<double>(d);
    const double m = dd - nn;
    if (p == 1.0) {
      return -dd * std::numbers::ln2 + std::lgamma(m + 1.0) - nn * std::log(tau) - 0.5 * log_det -
             norm / tau + log_v0;
    }
    if (p == 2.0) {
      return -0.5 * nn * std::log(std::numbers::pi * tau) - 0.5 * log_det - norm / tau;
    }
    return 0.5 * m * std::log(2.0 * std::numbers::pi * tau) - dd / p * std::log(tau) -
           0.5 * m * std::log(p * (p - 1.0)) -
           dd * (std::numbers::ln2 + std::lgamma(1.0 / p + 1.0)) - 0.5 * log_det - norm / tau -
           0.5 * log_det_curvature;
  }
};

AsymptoticModel smooth_model(const DesignMatrix& D, const Vector& Y, double p,
                             LaplaceDeterminant form) {
  const Interpolator interp = min_norm_interpolator(D, Y, p);
  AsymptoticModel mdl;
  mdl.p = p;
  mdl.n = D.n();
  mdl.d = D.d();
  mdl.log_det = log_det_gram(D);
  mdl.norm = interp.norm_p_to_p();
  if (p > 2.0) {
    const double tmax = interp.theta.cwiseAbs().maxCoeff();
    double sum_log = 0.0;
    for (Index j = 0; j < interp.theta.size(); ++j) {
      const double a = std::fabs(interp.theta(j));
      if (a <= 1e-8 * tmax) {
        fail(ErrorKind::ZeroCoordinate, "theta* has a (near-)zero coordinate");
      }
      sum_log += std::log(a);
    }
    if (form == LaplaceDeterminant::ProductOfCoordinates || D.kernel_dim() == 0) {
      mdl.log_det_curvature = (p - 2.0) * sum_log;
    } else {
      const Matrix Q = kernel_basis(D).Q;
      const Vector lambda = interp.theta.cwiseAbs().array().pow(p - 2.0).matrix();
      mdl.log_det_curvature = log_det_spd(Q.transpose() * lambda.asDiagonal() * Q);
    }
  }
  return mdl;
}

AsymptoticModel sparse_model(const DesignMatrix& D, const Vector& Y, const V0Result& v0) {
  if (D.kernel_dim() == 0) fail(ErrorKind::EmptyKernel, "d = n: no kernel volume to integrate");
  const Interpolator interp = min_norm_l1(D, Y);
  AsymptoticModel mdl;
  mdl.p = 1.0;
  mdl.n = D.n();
  mdl.d = D.d();
  mdl.log_det = log_det_gram(D);
  mdl.norm = interp.theta.cwiseAbs().sum();
  mdl.log_v0 = v0.log_value;
  return mdl;
}

DualPriorEstimate asymptotic(const AsymptoticModel& mdl, double tau, PriorMethod method) {
  DualPriorEstimate out;
  out.method = method;
  out.tau = tau;
  out.log_value = mdl.log_prior(tau);
  out.abs_error_estimate = 0.0;
  return out;
}

}  // namespace

std::string_view to_string(PriorMethod m) noexcept {
  switch (m) {
    case PriorMethod::Quadrature: return "quadrature";
    case PriorMethod::MonteCarlo: return "monte_carlo";
    case PriorMethod::RidgeAsymptotic: return "ridge_asymptotic";
    case PriorMethod::SmoothAsymptotic: return "smooth_asymptotic";
    case PriorMethod::SparseAsymptotic: return "sparse_asymptotic";
    case PriorMethod::ResidueExact: return "residue_exact";
  }
  return "unknown";
}

DualPriorEstimate dual_prior_numeric(const DesignMatrix& D, const Vector& Y, double p, double tau,
                                     PriorMethod method, const NumericBudget& budget) {
  check_tau(tau);
  check_rhs(D, Y);
  if (!(p >= 1.0) || !std::isfinite(p)) fail(ErrorKind::Usage, "p must be >= 1");
  const Index m = D.kernel_dim();
  const double log_front = log_prior_normalizer(p, D.d(), tau) - 0.5 * log_det_gram(D);
  const Vector theta0 = pinv_apply(D, Y);

  if (m == 0) {
    DualPriorEstimate out;
    out.method = method;
    out.tau = tau;
    out.log_value =
        log_front - simd::sum_abs_pow({theta0.data(), static_cast<std::size_t>(theta0.size())}, p) / tau;
    return out;
  }
  if (method == PriorMethod::MonteCarlo) {
    if (m > kMonteCarloMaxKernelDim) {
      fail(ErrorKind::DimensionTooHigh, "Monte Carlo needs d - n <= 8");
    }
    return numeric_monte_carlo(D, Y, p, tau, budget, log_front);
  }
  if (method != PriorMethod::Quadrature) {
    fail(ErrorKind::Usage, "dual_prior_numeric takes quadrature or monte_carlo");
  }
  if (m > kQuadratureMaxKernelDim) fail(ErrorKind::DimensionTooHigh, "quadrature needs d - n <= 3");
  if (budget.max_intervals < 1) fail(ErrorKind::Usage, "budget must be positive");

  NestedIntegrator integ(theta0, kernel_basis(D).Q, p, tau, truncation_radius(theta0, p, tau));
  const double h0 = integ.global_min();
  const NestedIntegrator::Result r = integ.integrate(budget.max_intervals, budget.rel_tol);
  if (!(r.value > 0.0)) fail(ErrorKind::BudgetExhausted, "integral vanished numerically");

  DualPriorEstimate out;
  out.method = PriorMethod::Quadrature;
  out.tau = tau;
  out.log_value = log_front - h0 + std::log(r.value);
  out.abs_error_estimate = std::log1p(r.abs_error / r.value);
  if (!(r.abs_error <= budget.rel_tol * r.value)) {
    fail(ErrorKind::BudgetExhausted, "quadrature error " + std::to_string(r.abs_error / r.value) +
                                         " (relative) above tolerance; raise the budget");
  }
  return out;
}

DualPriorEstimate dual_prior_ridge_asymptotic(const DesignMatrix& D, const Vector& Y, double tau) {
  check_tau(tau);
  check_rhs(D, Y);
  AsymptoticModel mdl;
  mdl.p = 2.0;
  mdl.n = D.n();
  mdl.d = D.d();
  mdl.log_det = log_det_gram(D);
  mdl.norm = pinv_apply(D, Y).squaredNorm();
  return asymptotic(mdl, tau, PriorMethod::RidgeAsymptotic);
}

DualPriorEstimate dual_prior_smooth_asymptotic(const DesignMatrix& D, const Vector& Y, double p,
                                               double tau, LaplaceDeterminant form) {
  check_tau(tau);
  check_rhs(D, Y);
  if (!(p >= 2.0)) fail(ErrorKind::Usage, "smooth asymptotic needs p >= 2");
  return asymptotic(smooth_model(D, Y, p, form), tau, PriorMethod::SmoothAsymptotic);
}

DualPriorEstimate dual_prior_sparse_asymptotic(const DesignMatrix& D, const Vector& Y, double tau,
                                               const V0Result& v0) {
  check_tau(tau);
  check_rhs(D, Y);
  return asymptotic(sparse_model(D, Y, v0), tau, PriorMethod::SparseAsymptotic);
}

DualPriorEstimate dual_prior_residue_n1(const Vector& x, double Y, double tau) {
  check_tau(tau);
  const Index d = x.size();
  if (d < 1) fail(ErrorKind::BadShape, "empty design row");
  if (!x.allFinite() || !std::isfinite(Y)) fail(ErrorKind::NonFinite, "non-finite input");
  std::vector<double> sq(static_cast<std::size_t>(d));
  for (Index j = 0; j < d; ++j) sq[static_cast<std::size_t>(j)] = x(j) * x(j);
  std::vector<double> sorted = sq;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t j = 1; j < sorted.size(); ++j) {
    if (sorted[j] - sorted[j - 1] <= 1e-12 * sorted[j]) {
      fail(ErrorKind::DegenerateCoordinates, "x_j^2 values collide");
    }
  }
  if (sorted.back() == 0.0) fail(ErrorKind::RankDeficient, "x = 0");
  if (sorted.front() == 0.0 && Y == 0.0) {
    fail(ErrorKind::DegenerateCoordinates, "zero coordinate with Y = 0");
  }

  // Terms alternate in sign; accumulate positive and negative parts as
  // separate log-sum-exps.
  const double ay = std::fabs(Y);
  double pos = -std::numeric_limits<double>::infinity();
  double neg = -std::numeric_limits<double>::infinity();
  const auto lse = [](double a, double b) {
    if (a < b) std::swap(a, b);
    return a == -std::numeric_limits<double>::infinity() ? a : a + std::log1p(std::exp(b - a));
  };
  for (Index k = 0; k < d; ++k) {
    const double xk2 = sq[static_cast<std::size_t>(k)];
    if (xk2 == 0.0) continue;  // e^{-|Y|/(0 tau)} = 0
    const double ak = std::sqrt(xk2);
    double log_mag = -std::log(2.0 * tau) - std::log(ak) - ay / (ak * tau);
    int flips = 0;
    for (Index j = 0; j < d; ++j) {
      if (j == k) continue;
      const double xj2 = sq[static_cast<std::size_t>(j)];
      log_mag += std::log(xk2) - std::log(std::fabs(xk2 - xj2));
      if (xj2 > xk2) ++flips;
    }
    if (flips % 2 == 0) {
      pos = lse(pos, log_mag);
    } else {
      neg = lse(neg, log_mag);
    }
  }
  const double gap = neg - pos;
  if (!(gap < 0.0)) fail(ErrorKind::DegenerateCoordinates, "residue sum cancelled to zero");
  DualPriorEstimate out;
  out.method = PriorMethod::ResidueExact;
  out.tau = tau;
  out.log_value = pos + std::log1p(-std::exp(gap));
  out.abs_error_estimate = 0.0;
  return out;
}

std::vector<double> log_grid(double lo, double hi, int points) {
  if (!(lo > 0.0 && hi > lo) || points < 2) fail(ErrorKind::Usage, "log_grid needs 0 < lo < hi, points >= 2");
  std::vector<double> g(static_cast<std::size_t>(points));
  const double a = std::log(lo), b = std::log(hi);
  for (int i = 0; i < points; ++i) {
    g[static_cast<std::size_t>(i)] = std::exp(a + (b - a) * i / (points - 1));
  }
  g.front() = lo;
  g.back() = hi;
  return g;
}

TauMinReport free_energy_numeric_min(const DesignMatrix& D, const Vector& Y, double p,
                                     std::span<const double> tau_grid,
                                     const std::optional<V0Result>& v0) {
  check_rhs(D, Y);
  if (tau_grid.size() < 3) fail(ErrorKind::Usage, "tau grid needs at least 3 points");
  for (std::size_t i = 0; i < tau_grid.size(); ++i) {
    if (!(tau_grid[i] > 0.0) || (i > 0 && !(tau_grid[i] > tau_grid[i - 1]))) {
      fail(ErrorKind::Usage, "tau grid must be positive and strictly increasing");
    }
  }

  AsymptoticModel mdl;
  if (p == 1.0) {
    if (v0) {
      mdl = sparse_model(D, Y, *v0);
    } else {
      if (D.kernel_dim() == 0) fail(ErrorKind::EmptyKernel, "d = n: no kernel volume");
      const Interpolator interp = min_norm_l1(D, Y);
      const SupportSigns ss{interp.support, interp.signs};
      const V0Result est = static_cast<Index>(ss.support.size()) == D.n()
                               ? v0_closed(D, ss)
                               : v0_monte_carlo(D, ss, 1'000'000, 0);
      mdl = sparse_model(D, Y, est);
    }
  } else if (p == 2.0) {
    mdl.p = 2.0;
    mdl.n = D.n();
    mdl.d = D.d();
    mdl.log_det = log_det_gram(D);
    mdl.norm = pinv_apply(D, Y).squaredNorm();
  } else if (p > 2.0) {
    mdl = smooth_model(D, Y, p, LaplaceDeterminant::ProductOfCoordinates);
  } else {
    fail(ErrorKind::Usage, "free energy is defined for p = 1 and p >= 2");
  }

  const auto F = [&](double log_tau) { return -mdl.log_prior(std::exp(log_tau)); };
  std::size_t best = 0;
  double fbest = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < tau_grid.size(); ++i) {
    const double v = F(std::log(tau_grid[i]));
    if (v < fbest) {
      fbest = v;
      best = i;
    }
  }
  if (best == 0 || best + 1 == tau_grid.size()) {
    fail(ErrorKind::MinimumAtBoundary, "free energy minimum sits on the tau grid edge; widen the grid");
  }
  const Golden g =
      golden_min(F, std::log(tau_grid[best - 1]), std::log(tau_grid[best + 1]));

  TauMinReport out;
  out.p = p;
  out.tau_min = std::exp(g.x);
  out.value = 2.0 / static_cast<double>(D.n()) * g.fx;
  out.tau_star = tau_star(p, D.d(), D.n(), mdl.norm);
  out.agrees = std::fabs(out.tau_min - out.tau_star) <= 1e-4 * out.tau_star;
  return out;
}

}  // namespace iiclab
