#pragma once
// Dense two-phase simplex for the small linear programs that appear in
// certificate repair and in Monte Carlo bounding boxes (a few dozen
// variables at most). Bland's rule, so it terminates on degenerate problems.

#include "iiclab/linalg.hpp"

namespace iiclab {

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpResult {
  LpStatus status = LpStatus::Infeasible;
  Vector x;
  double objective = 0.0;
};

/// minimize c^T x  subject to  A x = b,  x >= 0.
LpResult simplex_standard(const Matrix& A, const Vector& b, const Vector& c);

/// minimize c^T x  subject to  A_ub x <= b_ub,  A_eq x = b_eq, with x free
/// (entries of x unrestricted in sign). Either constraint block may be empty.
LpResult linprog_free(const Vector& c, const Matrix& A_ub, const Vector& b_ub,
                      const Matrix& A_eq, const Vector& b_eq);

}  // namespace iiclab
