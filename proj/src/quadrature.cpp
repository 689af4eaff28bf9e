#include "iiclab/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <vector>

namespace iiclab {
namespace {

// Kronrod abscissae on [0, 1); odd indices are the embedded Gauss nodes.
constexpr double kXgk[8] = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                            0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                            0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                            0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kWgk[8] = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                            0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                            0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                            0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                           0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double a, b, value, error;
  bool operator<(const Segment& o) const { return error < o.error; }
};

Segment gk15(const std::function<double(double)>& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  double kron = fc * kWgk[7];
  double gauss = fc * kWg[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    const double f1 = f(center - dx);
    const double f2 = f(center + dx);
    kron += kWgk[j] * (f1 + f2);
    if (j % 2 == 1) gauss += kWg[j / 2] * (f1 + f2);
  }
  return {a, b, kron * half, std::fabs((kron - gauss) * half)};
}

}  // namespace

QuadResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                              std::span<const double> breakpoints, double rel_tol, double abs_tol,
                              int max_intervals) {
  QuadResult out;
  if (!(b > a)) return out;
  std::vector<double> cuts{a};
  for (double c : breakpoints) {
    if (c > a && c < b) cuts.push_back(c);
  }
  cuts.push_back(b);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  std::priority_queue<Segment> heap;
  double value = 0.0;
  double error = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const Segment s = gk15(f, cuts[i], cuts[i + 1]);
    value += s.value;
    error += s.error;
    heap.push(s);
  }
  const auto tol = [&](double v) { return std::max(abs_tol, rel_tol * std::fabs(v)); };

  out.value = value;
  out.abs_error = error;
  out.intervals = static_cast<int>(heap.size());
  while (error > tol(value) && static_cast<int>(heap.size()) < max_intervals) {
    const Segment worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {
      heap.push(worst);
      break;  // interval no longer divisible in floating point
    }
    const Segment left = gk15(f, worst.a, mid);
    const Segment right = gk15(f, mid, worst.b);
    value += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
    if (error < out.abs_error) {
      out.value = value;
      out.abs_error = error;
      out.intervals = static_cast<int>(heap.size());
    }
  }
  out.converged = out.abs_error <= tol(out.value);
  return out;
}

}  // namespace iiclab
