#include "gridshape/matcher.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "gridshape/error.hpp"

namespace gridshape {

WeightVector::WeightVector(double grid, double cdf, double global)
    : grid_(grid), cdf_(cdf), global_(global) {
  if (!(grid >= 0.0 && cdf >= 0.0 && global >= 0.0)) {
    throw Error(ErrorKind::kInvalidArgument, "weights must be nonnegative");
  }
  if (std::fabs(grid + cdf + global - 1.0) > 1e-9) {
    throw Error(ErrorKind::kInvalidArgument, "weights must sum to 1");
  }
}

std::string WeightVector::to_string() const {
  return format_value(grid_) + "," + format_value(cdf_) + "," +
         format_value(global_);
}

double feature_similarity(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw Error(ErrorKind::kComparability,
                "feature length mismatch: " + std::to_string(a.size()) +
                    " vs " + std::to_string(b.size()));
  }
  if (a.empty()) {
    throw Error(ErrorKind::kComparability, "empty feature vectors");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] < 0.0 || b[i] < 0.0 || std::isnan(a[i]) || std::isnan(b[i])) {
      throw Error(ErrorKind::kDomain, "feature values must be nonnegative");
    }
    const double hi = std::max(a[i], b[i]);
    if (hi > 0.0) total += std::fabs(a[i] - b[i]) / hi;
  }
  return 1.0 - total / static_cast<double>(a.size());
}

void require_comparable(const CompositeDescriptor& p,
                        const CompositeDescriptor& q) {
  if (!(p.fingerprint == q.fingerprint)) {
    throw Error(ErrorKind::kComparability,
                "descriptor configs differ: " + p.fingerprint.to_string() +
                    " vs " + q.fingerprint.to_string());
  }
}

ComponentSimilarity component_similarity(const CompositeDescriptor& p,
                                         const CompositeDescriptor& q) {
  require_comparable(p, q);
  const auto pg = p.globals.to_array();
  const auto qg = q.globals.to_array();
  return {feature_similarity(p.grid_vector(), q.grid_vector()),
          feature_similarity(p.cdf.bins, q.cdf.bins),
          feature_similarity(pg, qg)};
}

double fuse(const ComponentSimilarity& s, const WeightVector& w) {
  const double weight_sum = w.grid() + w.cdf() + w.global();
  const double weighted = w.grid() * s.grid + w.cdf() * s.cdf + w.global() * s.global;
  return weighted / weight_sum;
}

double weighted_similarity(const CompositeDescriptor& p,
                           const CompositeDescriptor& q, const WeightVector& w) {
  return fuse(component_similarity(p, q), w);
}

std::vector<RankedResult> rank(const CompositeDescriptor& query,
                               std::span<const CompositeDescriptor> db,
                               const WeightVector& w, std::size_t k) {
  if (db.empty()) {
    throw Error(ErrorKind::kEmptyDatabase, "empty database");
  }
  if (k == 0) {
    throw Error(ErrorKind::kInvalidArgument, "k must be >= 1");
  }
  std::vector<std::pair<double, std::size_t>> scored;
  scored.reserve(db.size());
  for (std::size_t i = 0; i < db.size(); ++i) {
    scored.emplace_back(weighted_similarity(query, db[i], w), i);
  }
  const std::size_t keep = std::min(k, db.size());
  auto before = [&](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return db[a.second].shape_id < db[b.second].shape_id;
  };
  std::partial_sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(keep),
                    scored.end(), before);

  std::vector<RankedResult> out;
  out.reserve(keep);
  for (std::size_t r = 0; r < keep; ++r) {
    const auto& d = db[scored[r].second];
    out.push_back({d.shape_id, d.class_label, scored[r].first, r + 1});
  }
  return out;
}

}  // namespace gridshape
