#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "gridshape/matcher.hpp"
#include "gridshape/shape_index.hpp"

namespace gridshape {

struct PrPoint {
  std::size_t k = 0;
  double precision = 0.0;
  double recall = 0.0;
};

struct PrCurve {
  std::string query_id;
  std::vector<PrPoint> points;
};

struct PrOptions {
  std::size_t max_k = 40;
  /// Keep the query's own entry (matched by shape_id) in the ranking.
  bool include_self = false;
};

/// Precision = relevant-in-top-k / k, recall = relevant-in-top-k / relevant,
/// for k = 1..min(max_k, ranked entries). Throws kEvaluation when the query's
/// class has no other member in the index.
PrCurve precision_recall(const CompositeDescriptor& query, const ShapeIndex& ix,
                         const WeightVector& w, const PrOptions& opts = {});

/// Mean precision over every (query, k) point with recall < 0.5 (low band)
/// and recall > 0.5 (high band).
struct PrBandSummary {
  double low_recall_precision = 0.0;
  double high_recall_precision = 0.0;
  std::size_t low_points = 0;
  std::size_t high_points = 0;
};

PrBandSummary summarize_bands(std::span<const PrCurve> curves);

struct BullseyeOptions {
  /// Retrieval depth; 40 in the MPEG-7 protocol (twice the class size).
  std::size_t cutoff = 40;
  /// Drop the query from its own ranking.
  bool exclude_self = false;
};

struct BullseyeHit {
  std::string shape_id;
  std::size_t hits = 0;
};

struct BullseyeReport {
  std::vector<BullseyeHit> per_query;
  /// Total hits over the largest attainable total.
  double overall = 0.0;
};

/// Score matrix accessor: similarity of entry `j` to query `i`.
using ScoreFn = std::function<double(std::size_t query, std::size_t candidate)>;

/// Protocol core, independent of how scores are produced. Rankings order by
/// score descending then by id. The attainable hits per query are
/// min(cutoff, class size), minus the query itself when excluded.
BullseyeReport bullseye(std::span<const std::string> ids,
                        std::span<const std::string> labels, const ScoreFn& score,
                        const BullseyeOptions& opts = {});

/// All-pairs component similarities of an index, computed once so that many
/// weight vectors can be evaluated cheaply.
class SimilarityTable {
 public:
  explicit SimilarityTable(const ShapeIndex& ix, unsigned threads = 0);

  std::size_t size() const noexcept { return size_; }
  const ComponentSimilarity& at(std::size_t i, std::size_t j) const {
    return table_[i * size_ + j];
  }

 private:
  std::size_t size_ = 0;
  std::vector<ComponentSimilarity> table_;
};

/// Throws kEvaluation listing the ids of unlabeled entries.
std::vector<std::string> require_labels(const ShapeIndex& ix);

BullseyeReport bullseye(const ShapeIndex& ix, const WeightVector& w,
                        const BullseyeOptions& opts = {});
BullseyeReport bullseye(const ShapeIndex& ix, const SimilarityTable& table,
                        const WeightVector& w, const BullseyeOptions& opts = {});

/// Weight triples (a, b, 1-a-b) with a, b multiples of `step` and a + b <= 1,
/// ordered by w_grid descending then w_cdf descending.
std::vector<WeightVector> weight_lattice(double step);

struct TuneCandidate {
  WeightVector weights;
  double score = 0.0;
};

struct TuneResult {
  WeightVector best;
  double best_score = 0.0;
  std::vector<TuneCandidate> candidates;
};

/// Exhaustive bull's-eye maximization over the weight lattice. Ties prefer
/// larger w_grid, then larger w_cdf.
TuneResult tune_weights(const ShapeIndex& ix, double step = 0.05,
                        const BullseyeOptions& opts = {}, unsigned threads = 0);

}  // namespace gridshape
