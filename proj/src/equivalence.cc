#include "surveq/equivalence.h"

#include <algorithm>
#include <numeric>

#include "surveq/errors.h"
#include "surveq/hscore.h"

namespace surveq {

EquivalenceValue Seq(double h_score, const PowerCurve& curve) {
  const auto& c = curve.means;
  if (c.empty()) throw UsageError("empty power curve");
  if (h_score <= c[0]) return EquivalenceValue::LessThanZero();
  for (std::size_t k = 1; k < c.size(); ++k) {
    if (c[k] < h_score) continue;
    if (c[k] == h_score) return EquivalenceValue::Fraction(static_cast<double>(k));
    // c[k-1] < h_score < c[k] here.
    const double v = static_cast<double>(k - 1) + (h_score - c[k - 1]) / (c[k] - c[k - 1]);
    return EquivalenceValue::Fraction(v);
  }
  return EquivalenceValue::MoreThanK();
}

namespace {

void Summarize(EquivalenceResult& result) {
  std::vector<double> numeric;
  for (const auto& v : result.bootstrap_values) {
    switch (v.kind()) {
      case EquivalenceValue::Kind::kFraction:
        numeric.push_back(v.value());
        break;
      case EquivalenceValue::Kind::kLessThanZero:
        ++result.less_than_zero_count;
        break;
      case EquivalenceValue::Kind::kMoreThanK:
        ++result.more_than_k_count;
        break;
    }
  }
  if (numeric.empty()) return;
  result.bootstrap_mean =
      std::accumulate(numeric.begin(), numeric.end(), 0.0) / static_cast<double>(numeric.size());
  result.ci_low = Percentile(numeric, 0.025);
  result.ci_high = Percentile(numeric, 0.975);
}

}  // namespace

SeqAnalysis SeqWithBootstrap(const PredictionSet& predictions, const RatingMatrix& matrix,
                             const Combiner& combiner, const Scorer& scorer,
                             const RandomSource& random, const SpcOptions& options,
                             const BootstrapOptions& bootstrap) {
  const auto aligned = predictions.AlignTo(matrix);
  const int r = options.reference_raters;
  SeqAnalysis out;
  out.curves = BootstrapPowerCurves(matrix, combiner, scorer, random, options, bootstrap);

  EquivalenceResult& result = out.equivalence;
  result.classifier_score =
      detail::HScoreOnRows(aligned, matrix, matrix.canonical_order(), scorer, r, random,
                           options.reference_cap, stream_tag::kPointSample)
          .value;
  out.curves.point.classifier_score = result.classifier_score;
  result.value = Seq(result.classifier_score, out.curves.point);

  const std::size_t n = out.curves.sample_means.size();
  result.bootstrap_classifier_scores.resize(n);
  detail::ParallelFor(n, options.jobs, [&](std::size_t s) {
    const auto rows = detail::SampleRows(matrix, random, s, bootstrap.resample);
    const std::uint64_t key = bootstrap.resample ? s : stream_tag::kPointSample;
    result.bootstrap_classifier_scores[s] =
        detail::HScoreOnRows(aligned, matrix, rows, scorer, r, random, options.reference_cap, key)
            .value;
  });
  PowerCurve sample_curve;
  sample_curve.k_values = out.curves.point.k_values;
  for (std::size_t s = 0; s < n; ++s) {
    sample_curve.means = out.curves.sample_means[s];
    result.bootstrap_values.push_back(Seq(result.bootstrap_classifier_scores[s], sample_curve));
  }
  Summarize(result);
  return out;
}

CrossGroupResult CrossGroupEquivalence(const RatingMatrix& group_a, const RatingMatrix& group_b,
                                       const Combiner& combiner, const Scorer& scorer, int k_a,
                                       const RandomSource& random, const SpcOptions& options) {
  if (group_a.num_items() != group_b.num_items()) {
    throw ItemMismatchError("ItemMismatch: groups have " + std::to_string(group_a.num_items()) +
                            " and " + std::to_string(group_b.num_items()) + " items");
  }
  if (!(group_a.label_space() == group_b.label_space())) {
    throw ItemMismatchError("ItemMismatch: groups use different label spaces");
  }
  std::vector<std::size_t> reference_rows(group_a.num_items());
  for (std::size_t i = 0; i < group_a.num_items(); ++i) {
    const auto at = group_b.FindItem(group_a.item(i));
    if (!at) throw ItemMismatchError("ItemMismatch(" + group_a.item(i) + ")");
    reference_rows[i] = *at;
  }
  if (k_a < 0 || k_a > static_cast<int>(group_a.max_row_length())) {
    throw UsageError("k_a must be between 0 and the number of group a rater slots");
  }

  CrossGroupResult out;
  // Also checks combiner/scorer compatibility and group b's shape.
  out.reference_curve = Spc(group_b, combiner, scorer, random.Derive({1}), options);

  detail::CurveInputs inputs;
  inputs.source = &group_a;
  inputs.combiner = &combiner;
  inputs.scorer = &scorer;
  inputs.random = random.Derive({0});
  inputs.options = options;
  inputs.options.reference_raters = 1;
  if (!inputs.options.probability_memo) {
    inputs.options.probability_memo = std::make_shared<ProbabilityMemo>();
  }
  inputs.reference = &group_b;
  inputs.reference_rows = std::move(reference_rows);
  const int ks[] = {k_a};
  const double score =
      detail::CurveOnRows(inputs, group_a.canonical_order(), stream_tag::kPointSample, ks)[0];

  out.equivalence.classifier_score = score;
  out.reference_curve.classifier_score = score;
  out.equivalence.value = Seq(score, out.reference_curve);
  return out;
}

}  // namespace surveq
