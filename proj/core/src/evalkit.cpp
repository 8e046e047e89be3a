#include "gridshape/evalkit.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "gridshape/error.hpp"
#include "parallel.hpp"

namespace gridshape {

PrCurve precision_recall(const CompositeDescriptor& query, const ShapeIndex& ix,
                         const WeightVector& w, const PrOptions& opts) {
  if (!query.class_label) {
    throw Error(ErrorKind::kEvaluation,
                "evaluation error: query '" + query.shape_id + "' has no class label");
  }
  std::vector<CompositeDescriptor> pool;
  pool.reserve(ix.size());
  for (const auto& d : ix.entries()) {
    if (!opts.include_self && d.shape_id == query.shape_id) continue;
    pool.push_back(d);
  }
  const auto relevant = static_cast<std::size_t>(
      std::count_if(pool.begin(), pool.end(), [&](const CompositeDescriptor& d) {
        return d.class_label == query.class_label;
      }));
  if (relevant == 0) {
    throw Error(ErrorKind::kEvaluation, "evaluation error: class '" + *query.class_label +
                                            "' has no entries in the index");
  }
  const auto ranked = rank(query, pool, w, std::max<std::size_t>(1, opts.max_k));

  PrCurve curve;
  curve.query_id = query.shape_id;
  std::size_t hits = 0;
  for (const auto& r : ranked) {
    if (r.class_label == query.class_label) ++hits;
    curve.points.push_back({r.rank, static_cast<double>(hits) / static_cast<double>(r.rank),
                            static_cast<double>(hits) / static_cast<double>(relevant)});
  }
  return curve;
}

PrBandSummary summarize_bands(std::span<const PrCurve> curves) {
  PrBandSummary s;
  double low = 0.0;
  double high = 0.0;
  for (const auto& c : curves) {
    for (const auto& p : c.points) {
      if (p.recall < 0.5) {
        low += p.precision;
        ++s.low_points;
      } else if (p.recall > 0.5) {
        high += p.precision;
        ++s.high_points;
      }
    }
  }
  if (s.low_points) s.low_recall_precision = low / static_cast<double>(s.low_points);
  if (s.high_points) s.high_recall_precision = high / static_cast<double>(s.high_points);
  return s;
}

BullseyeReport bullseye(std::span<const std::string> ids,
                        std::span<const std::string> labels, const ScoreFn& score,
                        const BullseyeOptions& opts) {
  if (ids.size() != labels.size()) {
    throw Error(ErrorKind::kInvalidArgument, "ids and labels differ in length");
  }
  if (opts.cutoff == 0) {
    throw Error(ErrorKind::kInvalidArgument, "bull's-eye cutoff must be >= 1");
  }
  const std::size_t n = ids.size();
  std::map<std::string, std::size_t> class_size;
  for (const auto& l : labels) ++class_size[l];

  // Position in id order breaks score ties.
  std::vector<std::size_t> id_order(n);
  {
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::sort(perm.begin(), perm.end(),
              [&](std::size_t a, std::size_t b) { return ids[a] < ids[b]; });
    for (std::size_t r = 0; r < n; ++r) id_order[perm[r]] = r;
  }

  BullseyeReport report;
  report.per_query.reserve(n);
  std::size_t total_hits = 0;
  std::size_t attainable = 0;
  std::vector<std::pair<double, std::size_t>> scored;
  for (std::size_t q = 0; q < n; ++q) {
    scored.clear();
    for (std::size_t j = 0; j < n; ++j) {
      if (opts.exclude_self && j == q) continue;
      scored.emplace_back(score(q, j), j);
    }
    const std::size_t keep = std::min(opts.cutoff, scored.size());
    std::partial_sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(keep),
                      scored.end(), [&](const auto& a, const auto& b) {
                        if (a.first != b.first) return a.first > b.first;
                        return id_order[a.second] < id_order[b.second];
                      });
    std::size_t hits = 0;
    for (std::size_t r = 0; r < keep; ++r) {
      if (labels[scored[r].second] == labels[q]) ++hits;
    }
    const std::size_t members = class_size[labels[q]] - (opts.exclude_self ? 1 : 0);
    attainable += std::min(opts.cutoff, members);
    total_hits += hits;
    report.per_query.push_back({ids[q], hits});
  }
  report.overall = attainable ? static_cast<double>(total_hits) / static_cast<double>(attainable)
                              : 0.0;
  return report;
}

SimilarityTable::SimilarityTable(const ShapeIndex& ix, unsigned threads)
    : size_(ix.size()), table_(ix.size() * ix.size()) {
  const auto& e = ix.entries();
  detail::parallel_for(size_, threads, [&](std::size_t i) {
    table_[i * size_ + i] = component_similarity(e[i], e[i]);
    for (std::size_t j = i + 1; j < size_; ++j) {
      const auto s = component_similarity(e[i], e[j]);
      table_[i * size_ + j] = s;
      table_[j * size_ + i] = s;
    }
  });
}

std::vector<std::string> require_labels(const ShapeIndex& ix) {
  std::vector<std::string> labels;
  std::string missing;
  for (const auto& d : ix.entries()) {
    if (d.class_label && !d.class_label->empty()) {
      labels.push_back(*d.class_label);
    } else {
      missing += (missing.empty() ? "" : ", ") + d.shape_id;
    }
  }
  if (!missing.empty()) {
    throw Error(ErrorKind::kEvaluation, "evaluation error: unlabeled entries: " + missing);
  }
  return labels;
}

BullseyeReport bullseye(const ShapeIndex& ix, const SimilarityTable& table,
                        const WeightVector& w, const BullseyeOptions& opts) {
  const auto labels = require_labels(ix);
  std::vector<std::string> ids;
  ids.reserve(ix.size());
  for (const auto& d : ix.entries()) ids.push_back(d.shape_id);
  return bullseye(ids, labels,
                  [&](std::size_t i, std::size_t j) { return fuse(table.at(i, j), w); },
                  opts);
}

BullseyeReport bullseye(const ShapeIndex& ix, const WeightVector& w,
                        const BullseyeOptions& opts) {
  require_labels(ix);
  return bullseye(ix, SimilarityTable(ix), w, opts);
}

std::vector<WeightVector> weight_lattice(double step) {
  if (!(step > 0.0 && step <= 0.5)) {
    throw Error(ErrorKind::kInvalidArgument, "step must lie in (0, 0.5]");
  }
  const auto steps = static_cast<int>(std::floor(1.0 / step + 1e-9));
  // Exact fractions when the step divides 1, so e.g. 6 * 0.05 is 0.3.
  const bool divides = std::fabs(steps * step - 1.0) < 1e-9;
  auto value = [&](int i) {
    return divides ? static_cast<double>(i) / steps : i * step;
  };
  std::vector<WeightVector> out;
  for (int i = steps; i >= 0; --i) {
    for (int j = steps - i; j >= 0; --j) {
      const double a = value(i);
      const double b = value(j);
      const double rest = divides ? static_cast<double>(steps - i - j) / steps
                                  : std::max(0.0, 1.0 - a - b);
      out.emplace_back(a, b, rest);
    }
  }
  return out;
}

TuneResult tune_weights(const ShapeIndex& ix, double step,
                        const BullseyeOptions& opts, unsigned threads) {
  const auto lattice = weight_lattice(step);
  require_labels(ix);
  const SimilarityTable table(ix, threads);

  TuneResult result;
  result.candidates.resize(lattice.size());
  detail::parallel_for(lattice.size(), threads, [&](std::size_t c) {
    result.candidates[c] = {lattice[c], bullseye(ix, table, lattice[c], opts).overall};
  });
  // Lattice order already encodes the tie preference; keep the first maximum.
  result.best = result.candidates.front().weights;
  result.best_score = result.candidates.front().score;
  for (const auto& c : result.candidates) {
    if (c.score > result.best_score) {
      result.best = c.weights;
      result.best_score = c.score;
    }
  }
  return result;
}

}  // namespace gridshape
