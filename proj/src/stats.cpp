#include "iiclab/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "iiclab/errors.hpp"
#include "iiclab/rng.hpp"

namespace iiclab {
namespace {

bool constant(std::span<const double> x) {
  return std::all_of(x.begin(), x.end(), [&](double v) { return v == x[0]; });
}

}  // namespace

double mse(std::span<const double> pred, std::span<const double> actual) {
  if (pred.size() != actual.size() || pred.empty()) {
    fail(ErrorKind::BadShape, "mse needs equal, non-empty lengths");
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const double e = pred[i] - actual[i];
    acc += e * e;
  }
  return acc / static_cast<double>(pred.size());
}

std::vector<double> midranks(std::span<const double> x) {
  const std::size_t n = x.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return x[i] < x[j]; });
  std::vector<double> r(n);
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j + 1 < n && x[order[j + 1]] == x[order[i]]) ++j;
    const double avg = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) r[order[k]] = avg;
    i = j + 1;
  }
  return r;
}

double spearman(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) fail(ErrorKind::BadShape, "spearman needs equal lengths");
  if (a.size() < 3) fail(ErrorKind::TooFew, "spearman needs at least 3 points");
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!std::isfinite(a[i]) || !std::isfinite(b[i])) fail(ErrorKind::NonFinite, "spearman input");
  }
  if (constant(a) || constant(b)) fail(ErrorKind::ZeroVariance, "all ranks tied");
  const std::vector<double> ra = midranks(a);
  const std::vector<double> rb = midranks(b);
  const double n = static_cast<double>(a.size());
  const double ma = std::accumulate(ra.begin(), ra.end(), 0.0) / n;
  const double mb = std::accumulate(rb.begin(), rb.end(), 0.0) / n;
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < ra.size(); ++i) {
    sab += (ra[i] - ma) * (rb[i] - mb);
    saa += (ra[i] - ma) * (ra[i] - ma);
    sbb += (rb[i] - mb) * (rb[i] - mb);
  }
  return std::clamp(sab / std::sqrt(saa * sbb), -1.0, 1.0);
}

CorrelationReport bootstrap_ci(std::span<const double> a, std::span<const double> b,
                               int n_resamples, std::uint64_t seed, const std::string& pair) {
  if (a.size() != b.size()) fail(ErrorKind::BadShape, "bootstrap needs equal lengths");
  if (a.size() < 4) fail(ErrorKind::TooFew, "bootstrap needs at least 4 points");
  if (n_resamples < 1) fail(ErrorKind::Usage, "n_resamples must be positive");
  CorrelationReport rep;
  rep.pair = pair;
  rep.rho = spearman(a, b);
  rep.n_points = static_cast<int>(a.size());
  rep.n_resamples = n_resamples;
  rep.seed = seed;

  CounterRng rng(seed, 0x626f6f74ull);
  const std::size_t n = a.size();
  std::vector<double> ra(n), rb(n), stats;
  stats.reserve(static_cast<std::size_t>(n_resamples));
  for (int s = 0; s < n_resamples; ++s) {
    bool ok = false;
    for (int attempt = 0; attempt <= 10 && !ok; ++attempt) {
      for (std::size_t i = 0; i < n; ++i) {
        const auto k = static_cast<std::size_t>(rng.below(n));
        ra[i] = a[k];
        rb[i] = b[k];
      }
      ok = !constant(ra) && !constant(rb);
    }
    if (!ok) {
      ++rep.skipped_resamples;
      continue;
    }
    stats.push_back(spearman(ra, rb));
  }
  if (stats.empty()) {
    rep.ci_low = rep.ci_high = rep.rho;
    return rep;
  }
  std::sort(stats.begin(), stats.end());
  // Linear interpolation between order statistics.
  const auto quantile = [&](double q) {
    const double pos = q * static_cast<double>(stats.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, stats.size() - 1);
    return stats[lo] + (pos - static_cast<double>(lo)) * (stats[hi] - stats[lo]);
  };
  rep.ci_low = std::min(quantile(0.025), rep.rho);
  rep.ci_high = std::max(quantile(0.975), rep.rho);
  return rep;
}

}  // namespace iiclab
