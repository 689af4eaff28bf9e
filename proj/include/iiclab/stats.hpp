#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace iiclab {

double mse(std::span<const double> pred, std::span<const double> actual);

/// 1-based average ranks; tied values share the mean of their positions.
std::vector<double> midranks(std::span<const double> x);

/// Pearson correlation of midranks. Throws TooFew below 3 points and
/// ZeroVariance when either side is constant.
double spearman(std::span<const double> a, std::span<const double> b);

struct CorrelationReport {
  std::string pair;
  double rho = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  int n_points = 0;
  int n_resamples = 0;
  int skipped_resamples = 0;
  std::uint64_t seed = 0;
  std::string method = "bootstrap-percentile";
};

/// Paired bootstrap of the Spearman correlation, 2.5/97.5 percentiles. A
/// resample with constant ranks is redrawn up to 10 times, then skipped.
/// The interval is widened to contain rho if resampling skews it away.
CorrelationReport bootstrap_ci(std::span<const double> a, std::span<const double> b,
                               int n_resamples = 1000, std::uint64_t seed = 0,
                               const std::string& pair = "");

}  // namespace iiclab
