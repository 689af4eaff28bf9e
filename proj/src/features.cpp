#include "iiclab/features.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "iiclab/errors.hpp"
#include "iiclab/rng.hpp"

namespace iiclab {
namespace {

// Exponent vectors summing to `degree` over d0 variables, lexicographically
// descending (x1^2, x1 x2, x2^2, ...).
void monomials_of_degree(int degree, Index d0, std::vector<int>& cur, Index pos,
                         std::vector<std::vector<int>>& out) {
  if (pos == d0 - 1) {
    cur[static_cast<std::size_t>(pos)] = degree;
    out.push_back(cur);
    return;
  }
  for (int a = degree; a >= 0; --a) {
    cur[static_cast<std::size_t>(pos)] = a;
    monomials_of_degree(degree - a, d0, cur, pos + 1, out);
  }
}

Vector evaluate_monomial(const Matrix& X0, const std::vector<int>& expo) {
  Vector col = Vector::Ones(X0.rows());
  for (Index j = 0; j < X0.cols(); ++j) {
    const int a = expo[static_cast<std::size_t>(j)];
    for (int k = 0; k < a; ++k) col.array() *= X0.col(j).array();
  }
  return col;
}

}  // namespace

std::string to_string(FeatureKind k) {
  return k == FeatureKind::Rff ? "rff" : "polynomial";
}

double median_pairwise_distance(const Matrix& X0) {
  const Index n = X0.rows();
  if (n < 2) return 1.0;
  std::vector<double> dist;
  dist.reserve(static_cast<std::size_t>(n * (n - 1) / 2));
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) dist.push_back((X0.row(i) - X0.row(j)).norm());
  }
  const auto mid = dist.begin() + static_cast<std::ptrdiff_t>(dist.size() / 2);
  std::nth_element(dist.begin(), mid, dist.end());
  double med = *mid;
  if (dist.size() % 2 == 0) {
    med = 0.5 * (med + *std::max_element(dist.begin(), mid));
  }
  if (med > 0.0) return med;
  const double top = *std::max_element(dist.begin(), dist.end());
  return top > 0.0 ? top : 1.0;
}

RffMap::RffMap(const Matrix& X0_train, const RFFConfig& cfg) : cfg_(cfg) {
  if (cfg.target_dim < 2) fail(ErrorKind::Usage, "rff target_dim must be >= 2");
  if (X0_train.cols() < 1) fail(ErrorKind::BadShape, "base design has no columns");
  if (!X0_train.allFinite()) fail(ErrorKind::NonFinite, "non-finite base design");
  sigma_ = cfg.sigma > 0.0 ? cfg.sigma : median_pairwise_distance(X0_train);
  const Index dh = cfg.target_dim / 2;
  const Index d0 = X0_train.cols();
  V_.resize(dh, d0);
  for (Index k = 0; k < dh; ++k) {
    CounterRng rng(cfg.seed, static_cast<std::uint64_t>(k));
    for (Index j = 0; j < d0; ++j) V_(k, j) = rng.normal() / sigma_;
  }
}

FeatureMatrix RffMap::transform(const Matrix& X0) const {
  if (X0.cols() != V_.cols()) fail(ErrorKind::BadShape, "rff input width does not match the fit");
  const Index dh = V_.rows();
  const double s = 1.0 / std::sqrt(static_cast<double>(dh));
  const Matrix proj = X0 * V_.transpose();  // n x d_h
  FeatureMatrix out;
  out.kind = FeatureKind::Rff;
  out.Z.resize(X0.rows(), 2 * dh);
  for (Index i = 0; i < X0.rows(); ++i) {
    for (Index k = 0; k < dh; ++k) {
      out.Z(i, 2 * k) = s * std::cos(proj(i, k));
      out.Z(i, 2 * k + 1) = s * std::sin(proj(i, k));
    }
  }
  char buf[160];
  std::snprintf(buf, sizeof buf, "rff d=%lld sigma=%.17g seed=%llu rng=%s",
                static_cast<long long>(2 * dh), sigma_,
                static_cast<unsigned long long>(cfg_.seed), CounterRng::kName);
  out.provenance = buf;
  return out;
}

FeatureMatrix rff_map(const Matrix& X0, const RFFConfig& cfg) {
  return RffMap(X0, cfg).transform(X0);
}

PolyMap::PolyMap(const Matrix& X0_train, int degree, Index target_dim, int degree_cap)
    : d0_(X0_train.cols()) {
  if (degree < 1) fail(ErrorKind::Usage, "poly degree must be >= 1");
  if (d0_ < 1) fail(ErrorKind::BadShape, "base design has no columns");
  if (target_dim < d0_) fail(ErrorKind::Usage, "poly target_dim must be >= d0");
  if (!X0_train.allFinite()) fail(ErrorKind::NonFinite, "non-finite base design");

  std::vector<double> means, scales;
  std::vector<int> cur(static_cast<std::size_t>(d0_));
  for (int deg = 1; static_cast<Index>(monomials_.size()) < target_dim; ++deg) {
    if (deg > degree && deg > degree_cap) {
      fail(ErrorKind::DegreeExhausted, "cannot reach " + std::to_string(target_dim) +
                                           " non-constant monomials by degree " +
                                           std::to_string(degree_cap));
    }
    std::vector<std::vector<int>> batch;
    monomials_of_degree(deg, d0_, cur, 0, batch);
    for (const auto& expo : batch) {
      if (static_cast<Index>(monomials_.size()) == target_dim) break;
      const Vector col = evaluate_monomial(X0_train, expo);
      const double mean = col.mean();
      const double sd = std::sqrt((col.array() - mean).square().mean());
      const double amax = col.cwiseAbs().maxCoeff();
      if (!(sd > 1e-14 * amax) || !std::isfinite(sd)) continue;  // constant on the training rows
      monomials_.push_back(expo);
      means.push_back(mean);
      scales.push_back(sd);
    }
    degree_used_ = deg;
  }
  mean_ = Eigen::Map<Vector>(means.data(), static_cast<Index>(means.size()));
  scale_ = Eigen::Map<Vector>(scales.data(), static_cast<Index>(scales.size()));
}

Matrix PolyMap::raw(const Matrix& X0) const {
  Matrix Z(X0.rows(), static_cast<Index>(monomials_.size()));
  for (std::size_t c = 0; c < monomials_.size(); ++c) {
    Z.col(static_cast<Index>(c)) = evaluate_monomial(X0, monomials_[c]);
  }
  return Z;
}

FeatureMatrix PolyMap::transform(const Matrix& X0) const {
  if (X0.cols() != d0_) fail(ErrorKind::BadShape, "poly input width does not match the fit");
  FeatureMatrix out;
  out.kind = FeatureKind::Polynomial;
  out.Z = raw(X0);
  for (Index c = 0; c < out.Z.cols(); ++c) {
    out.Z.col(c) = (out.Z.col(c).array() - mean_(c)) / scale_(c);
  }
  out.provenance = "polynomial d=" + std::to_string(out.Z.cols()) +
                   " max_degree=" + std::to_string(degree_used_);
  return out;
}

FeatureMatrix poly_map(const Matrix& X0, int degree, Index target_dim, int degree_cap) {
  return PolyMap(X0, degree, target_dim, degree_cap).transform(X0);
}

}  // namespace iiclab
