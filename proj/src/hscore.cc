#include "surveq/hscore.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "surveq/errors.h"
#include "surveq/subsets.h"

namespace surveq {

std::vector<double> HScoreResult::coverage() const {
  std::size_t most = 0;
  for (const auto& r : references) most = std::max(most, r.items);
  std::vector<double> out;
  for (const auto& r : references) {
    out.push_back(most == 0 ? 0.0 : static_cast<double>(r.items) / static_cast<double>(most));
  }
  return out;
}

namespace detail {

UnitScores::UnitScores(const Scorer& scorer, std::size_t num_units)
    : additive_(scorer.additive()) {
  if (!additive_) {
    accumulators_.reserve(num_units);
    for (std::size_t u = 0; u < num_units; ++u) accumulators_.push_back(scorer.NewAccumulator());
  }
  Reset(num_units);
}

void UnitScores::Reset(std::size_t num_units) {
  if (!additive_ && num_units > accumulators_.size()) {
    throw UsageError("more reference units than accumulators");
  }
  active_ = num_units;
  sums_.assign(num_units, 0.0);
  counts_.assign(num_units, 0);
  for (std::size_t u = 0; u < std::min(num_units, accumulators_.size()); ++u) {
    accumulators_[u]->Reset();
  }
}

bool UnitScores::Mean(double& mean, std::vector<ReferenceScore>* details) const {
  double total = 0.0;
  std::size_t defined = 0;
  for (std::size_t u = 0; u < active_; ++u) {
    ReferenceScore ref;
    ref.items = counts_[u];
    if (counts_[u] == 0) {
      ref.score.defined = false;
    } else if (additive_) {
      ref.score.value = sums_[u] / static_cast<double>(counts_[u]);
    } else {
      ref.score = accumulators_[u]->Finish();
    }
    if (ref.score.defined) {
      total += ref.score.value;
      ++defined;
    }
    if (details != nullptr) details->push_back(std::move(ref));
  }
  if (defined == 0) return false;
  mean = total / static_cast<double>(defined);
  return true;
}

int UniquePlurality(std::span<const LabelIndex> row, std::span<const int> slots,
                    std::vector<int>& counts) {
  std::fill(counts.begin(), counts.end(), 0);
  for (int s : slots) ++counts[row[s]];
  int best = -1;
  int best_count = -1;
  bool tied = false;
  for (std::size_t l = 0; l < counts.size(); ++l) {
    if (counts[l] > best_count) {
      best = static_cast<int>(l);
      best_count = counts[l];
      tied = false;
    } else if (counts[l] == best_count) {
      tied = true;
    }
  }
  return tied ? -1 : best;
}

LabelIndex BreakTie(std::span<const int> counts, Rng& rng) {
  const int best = *std::max_element(counts.begin(), counts.end());
  std::vector<LabelIndex> modes;
  for (std::size_t l = 0; l < counts.size(); ++l) {
    if (counts[l] == best) modes.push_back(static_cast<LabelIndex>(l));
  }
  return modes[rng.UniformIndex(modes.size())];
}

HScoreResult HScoreOnRows(std::span<const Prediction* const> aligned, const RatingMatrix& matrix,
                          std::span<const std::size_t> rows, const Scorer& scorer, int r,
                          const RandomSource& random, std::size_t subset_cap,
                          std::uint64_t sample_key) {
  if (r < 1) throw UsageError("reference rater count must be at least 1");
  if (!aligned.empty() && !scorer.Accepts(aligned.front()->kind())) {
    throw ScoreError(ScoreError::Code::kKindMismatch,
                     scorer.name() + " scorer does not accept " +
                         std::string(ToString(aligned.front()->kind())) + " predictions");
  }
  const auto num_slots = static_cast<int>(matrix.max_row_length());
  std::vector<std::vector<int>> units;
  if (r == 1) {
    for (int j = 0; j < num_slots; ++j) units.push_back({j});
  } else {
    for (std::size_t i : rows) {
      if (matrix.row_length(i) < static_cast<std::size_t>(r)) {
        throw ScoreError(ScoreError::Code::kInsufficientRaters,
                         "InsufficientRaters(" + matrix.item(i) + "): fewer than " +
                             std::to_string(r) + " labels");
      }
    }
    Rng rng = random.Stream({sample_key, stream_tag::kReferenceSubsets});
    units = RaterSubsets(num_slots, r, rng, subset_cap).subsets;
  }

  const std::size_t num_labels = matrix.num_labels();
  UnitScores scores(scorer, units.size());
  std::vector<double> pair_scores(num_labels);
  std::vector<int> counts(num_labels);
  for (std::size_t pos = 0; pos < rows.size(); ++pos) {
    const std::size_t i = rows[pos];
    const auto row = matrix.row(i);
    const Prediction& prediction = *aligned[i];
    if (scores.additive()) {
      for (std::size_t l = 0; l < num_labels; ++l) {
        pair_scores[l] = scorer.PairScore(prediction, static_cast<LabelIndex>(l));
      }
    }
    for (std::size_t u = 0; u < units.size(); ++u) {
      const auto& unit = units[u];
      if (static_cast<std::size_t>(unit.back()) >= row.size()) continue;
      LabelIndex reference;
      if (r == 1) {
        reference = row[unit.front()];
      } else {
        const int label = UniquePlurality(row, unit, counts);
        if (label >= 0) {
          reference = static_cast<LabelIndex>(label);
        } else {
          Rng rng = random.Stream({sample_key, stream_tag::kReferenceTie, u, pos});
          reference = BreakTie(counts, rng);
        }
      }
      try {
        if (scores.additive()) {
          const double s = pair_scores[reference];
          if (std::isinf(s)) {
            throw ScoreError(ScoreError::Code::kZeroProbabilityLabel,
                             "ZeroProbabilityLabel: reference label has probability 0");
          }
          scores.AddPairScore(u, s);
        } else {
          scores.Add(u, prediction, reference);
        }
      } catch (const ScoreError& e) {
        throw ScoreError(e.code(), std::string(e.what()) + " (item " + matrix.item(i) +
                                       ", reference slot " + std::to_string(unit.front()) + ")");
      }
    }
  }

  HScoreResult result;
  if (!scores.Mean(result.value, &result.references)) {
    throw ScoreError(ScoreError::Code::kNoDefinedScore,
                     "no reference rater gives a defined " + scorer.name() + " score");
  }
  for (std::size_t u = 0; u < units.size(); ++u) result.references[u].slots = units[u];
  return result;
}

}  // namespace detail

HScoreResult HScore(const PredictionSet& predictions, const RatingMatrix& matrix,
                    const Scorer& scorer) {
  const auto aligned = predictions.AlignTo(matrix);
  return detail::HScoreOnRows(aligned, matrix, matrix.canonical_order(), scorer, 1,
                              RandomSource(0), kDefaultSubsetCap, stream_tag::kPointSample);
}

HScoreResult HScoreR(const PredictionSet& predictions, const RatingMatrix& matrix,
                     const Scorer& scorer, int r, const RandomSource& random,
                     std::size_t subset_cap) {
  const auto aligned = predictions.AlignTo(matrix);
  return detail::HScoreOnRows(aligned, matrix, matrix.canonical_order(), scorer, r, random,
                              subset_cap, stream_tag::kPointSample);
}

}  // namespace surveq
