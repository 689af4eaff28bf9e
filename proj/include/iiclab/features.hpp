#pragma once
// Feature maps that lift a low-dimensional base design into the
// overparameterized regime. Each map is fitted on training rows and then
// applied unchanged to any other rows (test predictions reuse the fit).

#include <cstdint>
#include <string>
#include <vector>

#include "iiclab/linalg.hpp"

namespace iiclab {

enum class FeatureKind { Rff, Polynomial };

std::string to_string(FeatureKind k);

struct RFFConfig {
  Eigen::Index target_dim = 2;  // output has 2 * floor(target_dim / 2) columns
  double sigma = 0.0;           // <= 0 selects the median heuristic
  std::uint64_t seed = 0;
};

struct FeatureMatrix {
  Matrix Z;
  FeatureKind kind = FeatureKind::Rff;
  std::string provenance;
};

/// Median Euclidean distance over distinct row pairs. Falls back to the
/// largest distance when the median is zero, and to 1 for a single point.
double median_pairwise_distance(const Matrix& X0);

class RffMap {
 public:
  /// Frequency k is drawn from its own generator stream (seed, k), so maps
  /// built for different target_dim share a prefix of frequencies.
  RffMap(const Matrix& X0_train, const RFFConfig& cfg);

  /// Row i becomes (cos(v_k . x_i), sin(v_k . x_i))_k / sqrt(d_h).
  FeatureMatrix transform(const Matrix& X0) const;

  const Matrix& frequencies() const noexcept { return V_; }  // d_h x d0
  double sigma() const noexcept { return sigma_; }

 private:
  Matrix V_;
  double sigma_;
  RFFConfig cfg_;
};

/// Convenience: fit on X0 and transform X0.
FeatureMatrix rff_map(const Matrix& X0, const RFFConfig& cfg);

inline constexpr int kDefaultPolyDegreeCap = 256;

class PolyMap {
 public:
  /// Graded lexicographic monomials of degree 1, 2, ..., constant columns
  /// dropped, truncated to target_dim and standardized with the training mean
  /// and standard deviation. Degrees above `degree` are added only when the
  /// lower ones run out; past max(degree, degree_cap) this throws
  /// DegreeExhausted.
  PolyMap(const Matrix& X0_train, int degree, Eigen::Index target_dim,
          int degree_cap = kDefaultPolyDegreeCap);

  FeatureMatrix transform(const Matrix& X0) const;

  /// Exponent vectors of the kept columns, in output order.
  const std::vector<std::vector<int>>& monomials() const noexcept { return monomials_; }
  int degree_used() const noexcept { return degree_used_; }

 private:
  Matrix raw(const Matrix& X0) const;

  std::vector<std::vector<int>> monomials_;
  Vector mean_;
  Vector scale_;
  int degree_used_ = 0;
  Eigen::Index d0_ = 0;
};

FeatureMatrix poly_map(const Matrix& X0, int degree, Eigen::Index target_dim,
                       int degree_cap = kDefaultPolyDegreeCap);

}  // namespace iiclab
