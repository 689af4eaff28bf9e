#include <cmath>
#include <numbers>

#include "doctest.h"
#include "iiclab/errors.hpp"
#include "iiclab/oracle.hpp"
#include "iiclab/rng.hpp"

using namespace iiclab;

namespace {

DesignMatrix row(std::initializer_list<double> v) {
  Matrix X(1, static_cast<Index>(v.size()));
  Index j = 0;
  for (double x : v) X(0, j++) = x;
  return validate_design(X);
}

Vector one(double y) { return Vector::Constant(1, y); }

ErrorKind kind_of(const auto& fn) {
  try {
    fn();
  } catch (const Error& err) {
    return err.kind();
  }
  FAIL("expected an iiclab::Error");
  return ErrorKind::Usage;
}

// Composite Simpson along the single kernel direction of a 1 x 2 design,
// with no adaptivity, kink handling or truncation logic.
double log_prior_simpson(const DesignMatrix& D, double Y, double p, double tau) {
  const Vector theta0 = pinv_apply(D, one(Y));
  const Vector q = kernel_basis(D).Q.col(0);
  const auto f = [&](double w) {
    return std::exp(-(theta0 + w * q).array().abs().pow(p).sum() / tau);
  };
  const double L = 20.0;
  const int m = 400000;
  const double h = 2 * L / m;
  double s = f(-L) + f(L);
  for (int k = 1; k < m; ++k) s += (k % 2 ? 4.0 : 2.0) * f(-L + k * h);
  const double integral = s * h / 3;
  const double log_c = -2 * (std::log(2.0) + std::lgamma(1 / p + 1)) - (2 / p) * std::log(tau);
  return log_c - 0.5 * log_det_gram(D) + std::log(integral);
}

}  // namespace

TEST_CASE("residue sum on the battery instance") {
  const auto r = dual_prior_residue_n1(Vector{{2.0, 1.0}}, 2.0, 1.0);
  CHECK(std::exp(r.log_value) == doctest::Approx(0.100070).epsilon(1e-5));
  CHECK(r.method == PriorMethod::ResidueExact);
  CHECK(kind_of([] { dual_prior_residue_n1(Vector{{1.0, -1.0}}, 1.0, 1.0); }) ==
        ErrorKind::DegenerateCoordinates);
}

TEST_CASE("quadrature agrees with the exact residue sum") {
  CounterRng rng(17);
  for (int t = 0; t < 10; ++t) {
    const Index d = 2 + static_cast<Index>(rng.below(2));
    Vector x(d);
    for (Index j = 0; j < d; ++j) x(j) = rng.uniform(0.5, 1.5) * (rng.below(2) ? 1 : -1);
    const double Y = rng.uniform(-3.0, 3.0);
    const double tau = rng.uniform(0.2, 2.0);
    const auto ref = dual_prior_residue_n1(x, Y, tau);
    const auto q = dual_prior_numeric(validate_design(x.transpose()), one(Y), 1.0, tau);
    CAPTURE(x.transpose());
    CHECK(std::fabs(q.log_value - ref.log_value) <= std::max(1e-8, 2 * q.abs_error_estimate));
  }
}

TEST_CASE("quadrature is exact for the Gaussian case") {
  Matrix X(2, 4);
  X << 1, 0.5, -0.3, 2, 0.2, 1, 1, -1;
  const DesignMatrix D = validate_design(X);
  const Vector Y = Vector{{0.7, -1.2}};
  for (double tau : {0.1, 1.0, 5.0}) {
    const auto exact = dual_prior_ridge_asymptotic(D, Y, tau);
    const auto q = dual_prior_numeric(D, Y, 2.0, tau);
    CHECK(std::fabs(q.log_value - exact.log_value) <= 1e-8);
  }
}

TEST_CASE("quadrature against an independent Simpson rule") {
  for (double p : {1.0, 3.0, 4.0, 1.5}) {
    const DesignMatrix D = row({3, 4});
    const double ref = log_prior_simpson(D, 5.0, p, 0.7);
    const auto q = dual_prior_numeric(D, one(5), p, 0.7);
    CAPTURE(p);
    CHECK(std::fabs(q.log_value - ref) <= 1e-8);
  }
}

TEST_CASE("Monte Carlo agrees with quadrature") {
  Matrix X(1, 3);
  X << 1.2, -0.7, 0.9;
  const DesignMatrix D = validate_design(X);
  for (double p : {1.0, 2.0, 3.0}) {
    const auto q = dual_prior_numeric(D, one(1.5), p, 0.5);
    NumericBudget b;
    b.seed = 11;
    const auto mc = dual_prior_numeric(D, one(1.5), p, 0.5, PriorMethod::MonteCarlo, b);
    CAPTURE(p);
    CHECK(std::fabs(mc.log_value - q.log_value) <= 4 * mc.abs_error_estimate);
    CHECK(mc.abs_error_estimate < 0.05);
  }
}

TEST_CASE("quadrature error does not grow with the budget") {
  Matrix X(1, 3);
  X << 3, 1, 2;
  const DesignMatrix D = validate_design(X);
  double prev = std::numeric_limits<double>::infinity();
  for (int budget : {4, 8, 16, 32, 64, 128, 256, 1024}) {
    NumericBudget b;
    b.max_intervals = budget;
    b.rel_tol = 1.0;  // report whatever the budget achieves
    const auto r = dual_prior_numeric(D, one(1.5), 3.0, 0.05, PriorMethod::Quadrature, b);
    CAPTURE(budget);
    CHECK(r.abs_error_estimate <= prev);
    prev = r.abs_error_estimate;
  }
  NumericBudget tiny;
  tiny.max_intervals = 1;
  CHECK(kind_of([&] { dual_prior_numeric(D, one(1.5), 3.0, 0.05, PriorMethod::Quadrature, tiny); }) ==
        ErrorKind::BudgetExhausted);
}

TEST_CASE("asymptotic forms converge as tau shrinks") {
  const DesignMatrix D = row({3, 4});
  for (double p : {3.0, 4.0}) {
    double prev = std::numeric_limits<double>::infinity();
    for (double tau : {0.2, 0.1, 0.05, 0.02}) {
      const double err = std::fabs(dual_prior_smooth_asymptotic(D, one(5), p, tau).log_value -
                                   dual_prior_numeric(D, one(5), p, tau).log_value);
      CHECK(err < prev);
      prev = err;
    }
    CHECK(prev < 0.02);
  }
  const DesignMatrix S = row({2, 1});
  const auto it = min_norm_l1(S, one(2));
  const auto v0 = v0_closed(S, {it.support, it.signs});
  const double err = std::fabs(dual_prior_sparse_asymptotic(S, one(2), 0.05, v0).log_value -
                               dual_prior_residue_n1(Vector{{2.0, 1.0}}, 2.0, 0.05).log_value);
  CHECK(err < 1e-6);
}

TEST_CASE("the product-of-coordinates curvature leaves a constant offset") {
  // |theta*_j| differ, so det(X Lambda^{-1} X^T) / det(XX^T) != 1.
  const DesignMatrix D = row({3, 4});
  const double a = dual_prior_smooth_asymptotic(D, one(5), 3.0, 0.1, LaplaceDeterminant::Exact).log_value;
  const double b =
      dual_prior_smooth_asymptotic(D, one(5), 3.0, 0.1, LaplaceDeterminant::ProductOfCoordinates).log_value;
  const double a2 = dual_prior_smooth_asymptotic(D, one(5), 3.0, 0.01, LaplaceDeterminant::Exact).log_value;
  const double b2 =
      dual_prior_smooth_asymptotic(D, one(5), 3.0, 0.01, LaplaceDeterminant::ProductOfCoordinates).log_value;
  CHECK(std::fabs(a - b) > 0.1);
  CHECK((a - b) == doctest::Approx(a2 - b2).epsilon(1e-12));

  // Equal magnitudes make the two forms coincide.
  const DesignMatrix E = row({1, 1});
  CHECK(dual_prior_smooth_asymptotic(E, one(2), 3.0, 0.1, LaplaceDeterminant::Exact).log_value ==
        doctest::Approx(
            dual_prior_smooth_asymptotic(E, one(2), 3.0, 0.1, LaplaceDeterminant::ProductOfCoordinates).log_value)
            .epsilon(1e-12));
}

TEST_CASE("free-energy minimum sits at the closed-form scale") {
  const auto grid = log_grid(1e-6, 1e6, 121);
  const DesignMatrix D = row({3, 4});
  const auto r2 = free_energy_numeric_min(D, one(5), 2.0, grid);
  CHECK(r2.agrees);
  CHECK(r2.tau_min == doctest::Approx(2.0).epsilon(1e-4));
  const auto r3 = free_energy_numeric_min(D, one(5), 3.0, grid);
  CHECK(r3.agrees);
  const auto r1 = free_energy_numeric_min(row({2, 1}), one(2), 1.0, grid);
  CHECK(r1.tau_min == doctest::Approx(1.0).epsilon(1e-4));

  const auto narrow = log_grid(10.0, 100.0, 11);
  CHECK(kind_of([&] { free_energy_numeric_min(D, one(5), 2.0, narrow); }) == ErrorKind::MinimumAtBoundary);
}

TEST_CASE("argument checks") {
  const DesignMatrix D = row({3, 4});
  CHECK(kind_of([&] { dual_prior_numeric(D, one(5), 2.0, -1.0); }) == ErrorKind::Usage);
  CHECK(kind_of([&] { dual_prior_sparse_asymptotic(validate_design(Matrix::Identity(1, 1)), one(1), 1.0, {}); }) ==
        ErrorKind::EmptyKernel);
  Matrix big = Matrix::Zero(1, 5);
  big << 1, 2, 3, 4, 5;
  CHECK(kind_of([&] { dual_prior_numeric(validate_design(big), one(1), 2.0, 1.0); }) ==
        ErrorKind::DimensionTooHigh);
  CHECK(log_grid(1.0, 100.0, 3)[1] == doctest::Approx(10.0));
}
