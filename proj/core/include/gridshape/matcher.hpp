#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gridshape/descriptor.hpp"

namespace gridshape {

/// Fusion weights for the grid, centroid-distance and global-statistics
/// similarities. Nonnegative and summing to one.
class WeightVector {
 public:
  /// Defaults (0.5, 0.3, 0.2).
  WeightVector() = default;
  /// Throws kInvalidArgument unless all weights are >= 0 and sum to 1 (1e-9).
  WeightVector(double grid, double cdf, double global);

  double grid() const noexcept { return grid_; }
  double cdf() const noexcept { return cdf_; }
  double global() const noexcept { return global_; }

  std::string to_string() const;
  friend bool operator==(const WeightVector&, const WeightVector&) = default;

 private:
  double grid_ = 0.5;
  double cdf_ = 0.3;
  double global_ = 0.2;
};

/// 1 - mean(|a_i - b_i| / max(a_i, b_i)); terms with max = 0 contribute 0.
/// Throws kComparability on length mismatch, kDomain on negative input.
double feature_similarity(std::span<const double> a, std::span<const double> b);

struct ComponentSimilarity {
  double grid = 0.0;
  double cdf = 0.0;
  double global = 0.0;
};

/// Throws kComparability when fingerprints differ.
void require_comparable(const CompositeDescriptor& p, const CompositeDescriptor& q);

ComponentSimilarity component_similarity(const CompositeDescriptor& p,
                                         const CompositeDescriptor& q);

/// Weighted combination of component similarities, normalized by the weight
/// sum so that identical components give exactly 1 and unit weights pick a
/// component exactly.
double fuse(const ComponentSimilarity& s, const WeightVector& w);

double weighted_similarity(const CompositeDescriptor& p,
                           const CompositeDescriptor& q, const WeightVector& w);

struct RankedResult {
  std::string shape_id;
  std::optional<std::string> class_label;
  double score = 0.0;
  std::size_t rank = 0;  // 1-based
};

/// Top min(k, |db|) entries by weighted similarity, descending; equal scores
/// are ordered by shape_id.
std::vector<RankedResult> rank(const CompositeDescriptor& query,
                               std::span<const CompositeDescriptor> db,
                               const WeightVector& w, std::size_t k);

}  // namespace gridshape
