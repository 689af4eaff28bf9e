#include <cmath>

#include "doctest.h"
#include "iiclab/errors.hpp"
#include "iiclab/linalg.hpp"
#include "iiclab/rng.hpp"

using namespace iiclab;

namespace {

Matrix random_matrix(CounterRng& rng, Index r, Index c) {
  Matrix m(r, c);
  for (Index j = 0; j < c; ++j)
    for (Index i = 0; i < r; ++i) m(i, j) = rng.normal();
  return m;
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

TEST_CASE("validate_design rejects bad shapes and ranks") {
  Matrix dup(2, 3);
  dup << 1, 2, 3, 2, 4, 6;
  CHECK(kind_of([&] { validate_design(dup); }) == ErrorKind::RankDeficient);

  Matrix tall(3, 2);
  tall << 1, 0, 0, 1, 1, 1;
  CHECK(kind_of([&] { validate_design(tall); }) == ErrorKind::BadShape);

  Matrix nan(1, 2);
  nan << 1.0, std::nan("");
  CHECK(kind_of([&] { validate_design(nan); }) == ErrorKind::NonFinite);

  Matrix ok(1, 2);
  ok << 3, 4;
  const DesignMatrix D = validate_design(ok);
  CHECK(D.n() == 1);
  CHECK(D.d() == 2);
  CHECK(D.kernel_dim() == 1);
}

TEST_CASE("log det of the gram matrix") {
  Matrix x(1, 2);
  x << 3, 4;
  CHECK(log_det_gram(validate_design(x)) == doctest::Approx(std::log(25.0)).epsilon(1e-14));

  CounterRng rng(3);
  const Matrix X = random_matrix(rng, 4, 9);
  const double ref = std::log((X * X.transpose()).determinant());
  CHECK(log_det_gram(validate_design(X)) == doctest::Approx(ref).epsilon(1e-12));
}

TEST_CASE("log_det_spd flags indefinite input") {
  Matrix a(2, 2);
  a << 1, 2, 2, 1;
  CHECK(kind_of([&] { log_det_spd(a); }) == ErrorKind::NotPositiveDefinite);
}

TEST_CASE("pinv_apply interpolates with minimum l2 norm") {
  Matrix x(1, 2);
  x << 3, 4;
  Vector y(1);
  y << 5;
  const Vector t = pinv_apply(validate_design(x), y);
  CHECK(t(0) == doctest::Approx(0.6).epsilon(1e-15));
  CHECK(t(1) == doctest::Approx(0.8).epsilon(1e-15));

  CounterRng rng(11);
  for (int trial = 0; trial < 40; ++trial) {
    const Index n = 1 + static_cast<Index>(rng.below(8));
    const Index d = n + static_cast<Index>(rng.below(9));
    const Matrix X = random_matrix(rng, n, d);
    const Vector Y = random_matrix(rng, n, 1);
    const DesignMatrix D = validate_design(X);
    const Vector th = pinv_apply(D, Y);
    CHECK((X * th - Y).norm() <= 1e-8 * Y.norm());
    // Orthogonal to the kernel, hence the minimum-norm solution.
    if (d > n) CHECK((kernel_basis(D).Q.transpose() * th).norm() <= 1e-10 * th.norm());
  }
}

TEST_CASE("kernel basis is orthonormal, annihilated by X and sign-normalized") {
  CounterRng rng(21);
  for (int trial = 0; trial < 30; ++trial) {
    const Index n = 1 + static_cast<Index>(rng.below(5));
    const Index d = n + 1 + static_cast<Index>(rng.below(6));
    const Matrix X = random_matrix(rng, n, d);
    const DesignMatrix D = validate_design(X);
    const Matrix Q = kernel_basis(D).Q;
    REQUIRE(Q.rows() == d);
    REQUIRE(Q.cols() == d - n);
    CHECK((X * Q).norm() <= 1e-12 * X.norm());
    CHECK((Q.transpose() * Q - Matrix::Identity(d - n, d - n)).norm() <= 1e-12);
    for (Index c = 0; c < Q.cols(); ++c) {
      Index i = 0;
      while (std::fabs(Q(i, c)) <= 1e-12) ++i;
      CHECK(Q(i, c) > 0.0);
    }
    // Deterministic on repeat.
    CHECK(kernel_basis(D).Q == Q);
  }
}
