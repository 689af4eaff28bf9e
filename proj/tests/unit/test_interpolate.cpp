#include <cmath>
#include <limits>
#include <vector>

#include "doctest.h"
#include "iiclab/errors.hpp"
#include "iiclab/interpolate.hpp"
#include "iiclab/rng.hpp"

using namespace iiclab;

namespace {

DesignMatrix design(std::initializer_list<std::initializer_list<double>> rows) {
  const Index n = static_cast<Index>(rows.size());
  const Index d = static_cast<Index>(rows.begin()->size());
  Matrix X(n, d);
  Index i = 0;
  for (const auto& r : rows) {
    Index j = 0;
    for (double v : r) X(i, j++) = v;
    ++i;
  }
  return validate_design(X);
}

Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Index>(v.size()));
  Index i = 0;
  for (double x : v) out(i++) = x;
  return out;
}

// Smallest l1 norm over all basic solutions X_B theta_B = Y with |B| = n.
// Returns the optimum and how many distinct optimal vertices there are.
struct BruteL1 {
  double best = std::numeric_limits<double>::infinity();
  std::vector<Vector> optima;
};

BruteL1 brute_force_l1(const Matrix& X, const Vector& Y) {
  const Index n = X.rows(), d = X.cols();
  BruteL1 out;
  std::vector<Vector> vertices;
  std::vector<Index> pick(static_cast<std::size_t>(n));
  const auto visit = [&](auto&& self, Index start, Index depth) -> void {
    if (depth == n) {
      Matrix XB(n, n);
      for (Index k = 0; k < n; ++k) XB.col(k) = X.col(pick[static_cast<std::size_t>(k)]);
      Eigen::FullPivLU<Matrix> lu(XB);
      if (!lu.isInvertible()) return;
      const Vector tb = lu.solve(Y);
      Vector th = Vector::Zero(d);
      for (Index k = 0; k < n; ++k) th(pick[static_cast<std::size_t>(k)]) = tb(k);
      vertices.push_back(th);
      return;
    }
    for (Index j = start; j < d; ++j) {
      pick[static_cast<std::size_t>(depth)] = j;
      self(self, j + 1, depth + 1);
    }
  };
  visit(visit, 0, 0);
  for (const Vector& v : vertices) out.best = std::min(out.best, v.lpNorm<1>());
  for (const Vector& v : vertices) {
    if (v.lpNorm<1>() > out.best + 1e-9 * std::max(1.0, out.best)) continue;
    bool seen = false;
    for (const Vector& o : out.optima) seen = seen || (o - v).lpNorm<Eigen::Infinity>() <= 1e-9;
    if (!seen) out.optima.push_back(v);
  }
  return out;
}

// Dense scan of the 1-D kernel line theta0 + w q for ||.||_p^p.
double line_min_lp(const Vector& theta0, const Vector& q, double p) {
  const auto f = [&](double w) { return (theta0 + w * q).array().abs().pow(p).sum(); };
  double lo = -10.0, hi = 10.0;
  for (int round = 0; round < 6; ++round) {
    double best_w = lo, best = f(lo);
    const int steps = 2000;
    for (int k = 1; k <= steps; ++k) {
      const double w = lo + (hi - lo) * k / steps;
      const double v = f(w);
      if (v < best) best = v, best_w = w;
    }
    const double h = (hi - lo) / steps;
    lo = best_w - 2 * h;
    hi = best_w + 2 * h;
  }
  return f(0.5 * (lo + hi));
}

ErrorKind kind_of(const auto& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an iiclab::Error");
  return ErrorKind::Usage;
}

}  // namespace

TEST_CASE("minimum l2 interpolator") {
  auto r = min_norm_l2(design({{3, 4}}), vec({5}));
  CHECK(r.theta(0) == doctest::Approx(0.6));
  CHECK(r.theta(1) == doctest::Approx(0.8));
  r = min_norm_l2(design({{1, 0}, {0, 1}}), vec({1, 2}));
  CHECK(r.theta(1) == doctest::Approx(2.0));
  r = min_norm_l2(design({{1, 1}}), vec({2}));
  CHECK(r.norm_p_to_p() == doctest::Approx(2.0));
}

TEST_CASE("minimum lp interpolator, p > 2") {
  const auto r4 = min_norm_lp(design({{1, 1}}), vec({2}), 4.0);
  CHECK(r4.theta(0) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(r4.theta(1) == doctest::Approx(1.0).epsilon(1e-10));

  // Stationarity: theta_j^{p-1} sgn proportional to x_j, so theta = (3,4)^{1/(p-1)} scaled.
  const DesignMatrix D = design({{3, 4}});
  const auto r3 = min_norm_lp(D, vec({5}), 3.0);
  CHECK(std::fabs(3 * r3.theta(0) + 4 * r3.theta(1) - 5) <= 1e-12);
  CHECK(r3.theta(1) / r3.theta(0) == doctest::Approx(std::sqrt(4.0 / 3.0)).epsilon(1e-10));
  const Vector q = kernel_basis(D).Q.col(0);
  CHECK(r3.norm_p_to_p() == doctest::Approx(line_min_lp(pinv_apply(D, vec({5})), q, 3.0)).epsilon(1e-6));
}

TEST_CASE("lp at p = 2 matches the pseudoinverse") {
  CounterRng rng(4);
  for (int t = 0; t < 20; ++t) {
    const Index n = 1 + static_cast<Index>(rng.below(4));
    const Index d = n + 1 + static_cast<Index>(rng.below(6));
    Matrix X(n, d);
    for (Index i = 0; i < X.size(); ++i) X.data()[i] = rng.normal();
    Vector Y(n);
    for (Index i = 0; i < n; ++i) Y(i) = rng.normal();
    const DesignMatrix D = validate_design(X);
    const Vector a = min_norm_lp(D, Y, 2.0).theta;
    const Vector b = min_norm_l2(D, Y).theta;
    CHECK((a - b).norm() <= 1e-8 * std::max(1.0, b.norm()));
  }
}

TEST_CASE("lp interpolators satisfy first-order conditions") {
  CounterRng rng(8);
  for (double p : {3.0, 4.0, 2.5, 6.0}) {
    for (int t = 0; t < 10; ++t) {
      const Index n = 1 + static_cast<Index>(rng.below(4));
      const Index d = n + 1 + static_cast<Index>(rng.below(8));
      Matrix X(n, d);
      for (Index i = 0; i < X.size(); ++i) X.data()[i] = rng.normal();
      Vector Y(n);
      for (Index i = 0; i < n; ++i) Y(i) = rng.normal();
      const DesignMatrix D = validate_design(X);
      const auto r = min_norm_lp(D, Y, p);
      CHECK((X * r.theta - Y).norm() <= 1e-9 * std::max(1.0, Y.norm()));
      Vector g(d);
      for (Index j = 0; j < d; ++j) {
        g(j) = p * std::pow(std::fabs(r.theta(j)), p - 1) * (r.theta(j) > 0 ? 1.0 : -1.0);
      }
      const Vector qg = kernel_basis(D).Q.transpose() * g;
      CHECK(qg.lpNorm<Eigen::Infinity>() <= 1e-7 * std::max(1.0, r.norm_p_to_p()));
    }
  }
}

TEST_CASE("basis pursuit examples") {
  const auto r = min_norm_l1(design({{2, 1}}), vec({2}));
  CHECK(r.theta(0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::fabs(r.theta(1)) <= 1e-12);
  REQUIRE(r.support.size() == 1);
  CHECK(r.support[0] == 0);
  CHECK(r.signs[0] == 1);
  REQUIRE(r.certificate);
  CHECK(r.certificate->unique);

  CHECK(kind_of([] { min_norm_l1(design({{1, 1}}), vec({1})); }) == ErrorKind::NotUnique);
  const auto tie = solve_basis_pursuit(design({{1, 1}}), vec({1}));
  CHECK(tie.theta.lpNorm<1>() == doctest::Approx(1.0));
  CHECK_FALSE(tie.certificate->unique);

  const auto sq = min_norm_l1(design({{1, 0}, {0, 1}}), vec({1, -2}));
  CHECK(sq.theta(1) == doctest::Approx(-2.0));
  CHECK(sq.signs == std::vector<int>{1, -1});

  const auto zero = min_norm_l1(design({{1, 2, 3}}), vec({0}));
  CHECK(zero.theta.isZero());
}

TEST_CASE("basis pursuit against exhaustive enumeration") {
  CounterRng rng(1234);
  int unique = 0, tied = 0;
  for (int t = 0; t < 120; ++t) {
    const Index n = 1 + static_cast<Index>(rng.below(3));
    const Index d = n + 1 + static_cast<Index>(rng.below(static_cast<std::uint64_t>(6 - n)));
    Matrix X(n, d);
    const bool integer = t % 3 == 0;  // small integers make ties likely
    for (Index i = 0; i < X.size(); ++i) {
      X.data()[i] = integer ? static_cast<double>(rng.below(5)) - 2.0 : rng.normal();
    }
    Vector Y(n);
    for (Index i = 0; i < n; ++i) Y(i) = integer ? static_cast<double>(rng.below(5)) - 2.0 : rng.normal();
    if (Y.isZero()) continue;
    DesignMatrix D = [&] {
      try {
        return validate_design(X);
      } catch (const Error&) {
        return validate_design(Matrix::Identity(1, 1));
      }
    }();
    if (D.n() != n || D.d() != d) continue;
    const BruteL1 ref = brute_force_l1(X, Y);
    CAPTURE(X);
    CAPTURE(Y);
    if (ref.optima.size() == 1) {
      ++unique;
      const auto r = min_norm_l1(D, Y);
      CHECK(r.theta.lpNorm<1>() == doctest::Approx(ref.best).epsilon(1e-8));
      CHECK((r.theta - ref.optima[0]).lpNorm<Eigen::Infinity>() <= 1e-8 * std::max(1.0, ref.best));
    } else {
      ++tied;
      CHECK(kind_of([&] { min_norm_l1(D, Y); }) == ErrorKind::NotUnique);
      CHECK(solve_basis_pursuit(D, Y).theta.lpNorm<1>() == doctest::Approx(ref.best).epsilon(1e-8));
    }
  }
  CHECK(unique > 30);
  CHECK(tied > 3);
}

TEST_CASE("detect_support") {
  auto s = detect_support(vec({1, 0, -3}));
  CHECK(s.support == std::vector<Index>{0, 2});
  CHECK(s.signs == std::vector<int>{1, -1});
  s = detect_support(vec({1e-12, 1}));
  CHECK(s.support == std::vector<Index>{1});
  CHECK(detect_support(vec({0, 0})).support.empty());
}

TEST_CASE("uniqueness certificate examples") {
  auto c = uniqueness_certificate(design({{2, 1}}), {{0}, {1}});
  CHECK(c.mu(0) == doctest::Approx(0.5));
  CHECK(c.max_abs_offsupport == doctest::Approx(0.5));
  CHECK(c.unique);

  c = uniqueness_certificate(design({{1, 1}}), {{0}, {1}});
  CHECK(c.max_abs_offsupport == doctest::Approx(1.0));
  CHECK_FALSE(c.unique);

  c = uniqueness_certificate(design({{1, 0}, {0, 1}}), {{0, 1}, {1, 1}});
  CHECK(c.mu(0) == doctest::Approx(1.0));
  CHECK(c.mu(1) == doctest::Approx(1.0));
  CHECK(c.max_abs_offsupport == 0.0);
  CHECK(c.unique);

  CHECK(kind_of([] { uniqueness_certificate(design({{1, 1, 0}, {2, 2, 1}}), {{0, 1}, {1, 1}}); }) ==
        ErrorKind::SupportRankDeficient);
}
