#pragma once

#include <functional>
#include <span>

namespace iiclab {

struct QuadResult {
  double value = 0.0;
  double abs_error = 0.0;
  int intervals = 0;
  bool converged = false;
};

/// Globally adaptive Gauss-Kronrod 7/15 on [a, b]. Interior breakpoints
/// (kinks of the integrand) seed the initial partition. Refinement stops
/// when abs_error <= max(abs_tol, rel_tol * |value|) or after max_intervals
/// subintervals; the reported state is the one with the smallest error
/// estimate seen, so a larger budget never reports a larger error.
QuadResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                              std::span<const double> breakpoints, double rel_tol,
                              double abs_tol, int max_intervals);

}  // namespace iiclab
