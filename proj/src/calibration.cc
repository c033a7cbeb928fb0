#include "surveq/calibration.h"

#include <map>
#include <sstream>

#include "surveq/errors.h"

namespace surveq {
namespace {

std::string Render(const Prediction& p, const LabelSpace& space) {
  if (p.is_hard()) return space.label(p.label());
  std::ostringstream s;
  s.precision(17);
  for (std::size_t l = 0; l < p.probs().size(); ++l) s << (l ? "/" : "") << p.probs()[l];
  return s.str();
}

}  // namespace

CalibrationResult CalibrateDiscrete(const PredictionSet& predictions, const RatingMatrix& matrix,
                                    LabelIndex positive) {
  if (!(predictions.label_space() == matrix.label_space())) {
    throw UsageError("predictions and ratings use different label spaces");
  }
  const auto aligned = predictions.AlignTo(matrix);
  const std::size_t n = matrix.num_labels();
  std::map<std::string, std::size_t> bucket_of;
  std::vector<LabelCounts> totals;
  CalibrationResult result{PredictionSet(matrix.label_space(), PredictionKind::kSoft), {}};
  std::vector<std::size_t> item_bucket(matrix.num_items());
  for (std::size_t i : matrix.canonical_order()) {
    const std::string key = Render(*aligned[i], matrix.label_space());
    auto [it, added] = bucket_of.emplace(key, totals.size());
    if (added) {
      totals.emplace_back(n, 0);
      result.buckets.push_back({key, 0, 0, 0.0});
    }
    const std::size_t b = it->second;
    item_bucket[i] = b;
    ++result.buckets[b].items;
    const auto& counts = matrix.row_counts(i);
    for (std::size_t l = 0; l < n; ++l) totals[b][l] += counts[l];
  }
  std::vector<std::vector<double>> dists;
  for (std::size_t b = 0; b < totals.size(); ++b) {
    double total = 0.0;
    for (int c : totals[b]) total += c;
    std::vector<double> p(n);
    for (std::size_t l = 0; l < n; ++l) p[l] = totals[b][l] / total;
    result.buckets[b].labels = static_cast<std::size_t>(total);
    result.buckets[b].positive_frequency = p[positive];
    dists.push_back(std::move(p));
  }
  for (std::size_t i : matrix.canonical_order()) {
    result.calibrated.Add(matrix.item(i), Prediction::Soft(dists[item_bucket[i]]));
  }
  return result;
}

}  // namespace surveq
