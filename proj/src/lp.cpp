#include "iiclab/lp.hpp"

#include <cmath>
#include <limits>
#include <vector>

namespace iiclab {
namespace {

constexpr double kPivotEps = 1e-11;

struct Tableau {
  // Rows 0..m-1 are constraints, row m is the objective (reduced costs);
  // the last column is the right-hand side.
  Matrix t;
  std::vector<Eigen::Index> basis;

  Eigen::Index rows() const { return t.rows() - 1; }
  Eigen::Index rhs_col() const { return t.cols() - 1; }

  void pivot(Eigen::Index r, Eigen::Index c) {
    t.row(r) /= t(r, c);
    for (Eigen::Index i = 0; i < t.rows(); ++i) {
      if (i != r && t(i, c) != 0.0) t.row(i) -= t(i, c) * t.row(r);
    }
    basis[static_cast<std::size_t>(r)] = c;
  }

  // Returns false when unbounded. `allowed` limits entering columns.
  bool run(Eigen::Index allowed, int max_pivots) {
    for (int it = 0; it < max_pivots; ++it) {
      Eigen::Index enter = -1;
      for (Eigen::Index j = 0; j < allowed; ++j) {
        if (t(rows(), j) < -kPivotEps) {
          enter = j;
          break;
        }
      }
      if (enter < 0) return true;
      Eigen::Index leave = -1;
      double best = std::numeric_limits<double>::infinity();
      for (Eigen::Index i = 0; i < rows(); ++i) {
        const double a = t(i, enter);
        if (a > kPivotEps) {
          const double ratio = t(i, rhs_col()) / a;
          if (ratio < best - 1e-14 ||
              (std::fabs(ratio - best) <= 1e-14 && leave >= 0 &&
               basis[static_cast<std::size_t>(i)] < basis[static_cast<std::size_t>(leave)])) {
            best = ratio;
            leave = i;
          }
        }
      }
      if (leave < 0) return false;
      pivot(leave, enter);
    }
    return true;
  }
};

}  // namespace

LpResult simplex_standard(const Matrix& A, const Vector& b, const Vector& c) {
  const Eigen::Index m = A.rows();
  const Eigen::Index nv = A.cols();
  LpResult out;
  out.x = Vector::Zero(nv);

  Tableau tab;
  tab.t = Matrix::Zero(m + 1, nv + m + 1);
  tab.basis.resize(static_cast<std::size_t>(m));
  for (Eigen::Index i = 0; i < m; ++i) {
    const double sgn = b(i) < 0.0 ? -1.0 : 1.0;
    tab.t.row(i).head(nv) = sgn * A.row(i);
    tab.t(i, nv + i) = 1.0;
    tab.t(i, nv + m) = sgn * b(i);
    tab.basis[static_cast<std::size_t>(i)] = nv + i;
  }
  // Phase 1 objective: sum of artificials, expressed in nonbasic terms.
  for (Eigen::Index i = 0; i < m; ++i) tab.t.row(m) -= tab.t.row(i);
  for (Eigen::Index i = 0; i < m; ++i) tab.t(m, nv + i) = 0.0;

  const int max_pivots = 50 * static_cast<int>(nv + m + 10);
  tab.run(nv + m, max_pivots);
  const double scale = 1.0 + b.cwiseAbs().sum();
  if (-tab.t(m, nv + m) > 1e-9 * scale) {
    out.status = LpStatus::Infeasible;
    return out;
  }

  // Drive remaining artificials out of the basis; drop redundant rows.
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < m; ++i) {
    if (tab.basis[static_cast<std::size_t>(i)] >= nv) {
      Eigen::Index col = -1;
      for (Eigen::Index j = 0; j < nv; ++j) {
        if (std::fabs(tab.t(i, j)) > 1e-9) {
          col = j;
          break;
        }
      }
      if (col >= 0) {
        tab.pivot(i, col);
        keep.push_back(i);
      }
    } else {
      keep.push_back(i);
    }
  }
  Tableau p2;
  const Eigen::Index m2 = static_cast<Eigen::Index>(keep.size());
  p2.t = Matrix::Zero(m2 + 1, nv + 1);
  p2.basis.resize(keep.size());
  for (Eigen::Index k = 0; k < m2; ++k) {
    const Eigen::Index i = keep[static_cast<std::size_t>(k)];
    p2.t.row(k).head(nv) = tab.t.row(i).head(nv);
    p2.t(k, nv) = tab.t(i, nv + m);
    p2.basis[static_cast<std::size_t>(k)] = tab.basis[static_cast<std::size_t>(i)];
  }
  p2.t.row(m2).head(nv) = c.transpose();
  for (Eigen::Index k = 0; k < m2; ++k) {
    const Eigen::Index bj = p2.basis[static_cast<std::size_t>(k)];
    const double cb = p2.t(m2, bj);
    if (cb != 0.0) p2.t.row(m2) -= cb * p2.t.row(k);
  }
  if (!p2.run(nv, max_pivots)) {
    out.status = LpStatus::Unbounded;
    return out;
  }
  for (Eigen::Index k = 0; k < m2; ++k) {
    out.x(p2.basis[static_cast<std::size_t>(k)]) = p2.t(k, nv);
  }
  out.objective = c.dot(out.x);
  out.status = LpStatus::Optimal;
  return out;
}

LpResult linprog_free(const Vector& c, const Matrix& A_ub, const Vector& b_ub,
                      const Matrix& A_eq, const Vector& b_eq) {
  const Eigen::Index nv = c.size();
  const Eigen::Index mu = A_ub.rows();
  const Eigen::Index me = A_eq.rows();
  // x = x_plus - x_minus, slacks for the inequality rows.
  const Eigen::Index cols = 2 * nv + mu;
  Matrix A = Matrix::Zero(mu + me, cols);
  Vector b(mu + me);
  Vector cc = Vector::Zero(cols);
  cc.head(nv) = c;
  cc.segment(nv, nv) = -c;
  if (mu > 0) {
    A.block(0, 0, mu, nv) = A_ub;
    A.block(0, nv, mu, nv) = -A_ub;
    A.block(0, 2 * nv, mu, mu).setIdentity();
    b.head(mu) = b_ub;
  }
  if (me > 0) {
    A.block(mu, 0, me, nv) = A_eq;
    A.block(mu, nv, me, nv) = -A_eq;
    b.tail(me) = b_eq;
  }
  LpResult std_res = simplex_standard(A, b, cc);
  LpResult out;
  out.status = std_res.status;
  out.x = Vector::Zero(nv);
  if (std_res.status == LpStatus::Optimal) {
    out.x = std_res.x.head(nv) - std_res.x.segment(nv, nv);
    out.objective = c.dot(out.x);
  }
  return out;
}

}  // namespace iiclab
