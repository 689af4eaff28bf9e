#include "doctest.h"
#include "iiclab/lp.hpp"

using namespace iiclab;

TEST_CASE("standard form optimum") {
  // min -x1 - 2 x2  s.t.  x1 + x2 + s1 = 4,  x2 + s2 = 3
  Matrix A(2, 4);
  A << 1, 1, 1, 0, 0, 1, 0, 1;
  Vector b(2);
  b << 4, 3;
  Vector c(4);
  c << -1, -2, 0, 0;
  const LpResult r = simplex_standard(A, b, c);
  REQUIRE(r.status == LpStatus::Optimal);
  CHECK(r.objective == doctest::Approx(-7.0));
  CHECK(r.x(0) == doctest::Approx(1.0));
  CHECK(r.x(1) == doctest::Approx(3.0));
}

TEST_CASE("infeasible and unbounded programs") {
  Matrix A(1, 1);
  A << 1;
  Vector b(1);
  b << -1;
  Vector c(1);
  c << 1;
  CHECK(simplex_standard(A, b, c).status == LpStatus::Infeasible);

  Matrix A2(1, 2);
  A2 << 1, -1;
  Vector b2(1);
  b2 << 1;
  Vector c2(2);
  c2 << -1, 0;
  CHECK(simplex_standard(A2, b2, c2).status == LpStatus::Unbounded);
}

TEST_CASE("free variables with inequality and equality blocks") {
  // min t  s.t.  |x - 3| <= t,  x + y = 1,  y = -4  ->  x = 5, t = 2
  Vector c(3);
  c << 0, 0, 1;
  Matrix Aub(2, 3);
  Aub << 1, 0, -1, -1, 0, -1;
  Vector bub(2);
  bub << 3, -3;
  Matrix Aeq(2, 3);
  Aeq << 1, 1, 0, 0, 1, 0;
  Vector beq(2);
  beq << 1, -4;
  const LpResult r = linprog_free(c, Aub, bub, Aeq, beq);
  REQUIRE(r.status == LpStatus::Optimal);
  CHECK(r.x(0) == doctest::Approx(5.0));
  CHECK(r.x(1) == doctest::Approx(-4.0));
  CHECK(r.objective == doctest::Approx(2.0));
}

TEST_CASE("degenerate program terminates") {
  // Several constraints tight at the optimum vertex.
  Matrix A(3, 5);
  A << 1, 1, 1, 0, 0,
       1, -1, 0, 1, 0,
       2, 0, 0, 0, 1;
  Vector b(3);
  b << 2, 0, 2;
  Vector c(5);
  c << -1, -1, 0, 0, 0;
  const LpResult r = simplex_standard(A, b, c);
  REQUIRE(r.status == LpStatus::Optimal);
  CHECK(r.objective == doctest::Approx(-2.0));
}
