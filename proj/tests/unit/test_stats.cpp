#include <cmath>
#include <vector>

#include "doctest.h"
#include "iiclab/errors.hpp"
#include "iiclab/rng.hpp"
#include "iiclab/stats.hpp"

using namespace iiclab;

TEST_CASE("mean squared error") {
  const std::vector<double> a = {1, 2, 3};
  CHECK(mse(a, a) == 0.0);
  CHECK(mse(std::vector<double>{2, 3, 4}, a) == 1.0);
  CHECK(mse(std::vector<double>{0, 2}, std::vector<double>{1, 1}) == 1.0);
}

TEST_CASE("spearman with ties") {
  const std::vector<double> x = {1, 2, 3};
  CHECK(spearman(x, std::vector<double>{10, 20, 30}) == doctest::Approx(1.0));
  CHECK(spearman(x, std::vector<double>{3, 2, 1}) == doctest::Approx(-1.0));
  CHECK(spearman(std::vector<double>{1, 2, 2, 3}, std::vector<double>{1, 2, 3, 4}) ==
        doctest::Approx(0.9486832980505138));
  CHECK(midranks(std::vector<double>{5, 1, 5}) == std::vector<double>{2.5, 1, 2.5});
}

TEST_CASE("spearman symmetry and monotone invariance") {
  CounterRng rng(3);
  std::vector<double> a(25), b(25), ea(25);
  for (int i = 0; i < 25; ++i) {
    a[i] = rng.normal();
    b[i] = rng.normal();
    ea[i] = std::exp(3 * a[i]);
  }
  CHECK(spearman(a, b) == doctest::Approx(spearman(b, a)).epsilon(1e-15));
  CHECK(spearman(ea, b) == doctest::Approx(spearman(a, b)).epsilon(1e-15));
}

TEST_CASE("spearman errors") {
  const auto kind = [](auto fn) {
    try {
      fn();
    } catch (const Error& e) {
      return e.kind();
    }
    return ErrorKind::Usage;
  };
  CHECK(kind([] { spearman(std::vector<double>{1, 2}, std::vector<double>{1, 2}); }) == ErrorKind::TooFew);
  CHECK(kind([] { spearman(std::vector<double>{1, 1, 1}, std::vector<double>{1, 2, 3}); }) ==
        ErrorKind::ZeroVariance);
  CHECK(kind([] { spearman(std::vector<double>{1, NAN, 2}, std::vector<double>{1, 2, 3}); }) ==
        ErrorKind::NonFinite);
}

TEST_CASE("bootstrap confidence interval") {
  const std::vector<double> x = {1, 2, 3, 4, 5, 6, 7, 8};
  const std::vector<double> y = {2, 4, 5, 9, 10, 11, 30, 31};
  const auto up = bootstrap_ci(x, y, 500, 1, "x~y");
  CHECK(up.rho == doctest::Approx(1.0));
  CHECK(up.ci_low == doctest::Approx(1.0));
  CHECK(up.ci_high == doctest::Approx(1.0));
  CHECK(up.pair == "x~y");

  std::vector<double> rev(y.rbegin(), y.rend());
  const auto down = bootstrap_ci(x, rev, 500, 1);
  CHECK(down.ci_low == doctest::Approx(-1.0));
  CHECK(down.ci_high == doctest::Approx(-1.0));

  CounterRng rng(12);
  std::vector<double> a(30), b(30);
  for (int i = 0; i < 30; ++i) {
    a[i] = rng.normal();
    b[i] = a[i] + rng.normal();
  }
  const auto r1 = bootstrap_ci(a, b, 1000, 42);
  const auto r2 = bootstrap_ci(a, b, 1000, 42);
  CHECK(r1.ci_low == r2.ci_low);
  CHECK(r1.ci_high == r2.ci_high);
  CHECK(r1.ci_low <= r1.rho);
  CHECK(r1.rho <= r1.ci_high);
  CHECK(r1.ci_low > 0.0);
  CHECK(r1.n_resamples == 1000);
}
