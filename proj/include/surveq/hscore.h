#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "surveq/prediction.h"
#include "surveq/random.h"
#include "surveq/rating_matrix.h"
#include "surveq/scorers.h"

namespace surveq {

// Default cap on enumerated rater subsets (and reference subsets).
inline constexpr std::size_t kDefaultSubsetCap = 200;

// Score against one reference unit: a single rater slot, or a set of r
// slots reduced to their plurality label.
struct ReferenceScore {
  std::vector<int> slots;
  std::size_t items = 0;  // Items that had every slot of the unit.
  ScoreValue score;
};

struct HScoreResult {
  // Mean over reference units with a defined score.
  double value = 0.0;
  std::vector<ReferenceScore> references;
  // Fraction of items covered, per reference unit.
  std::vector<double> coverage() const;
};

// Scores predictions against each rater slot in turn (restricted to items
// that have that slot) and averages. Throws ScoreError on kind mismatch, on
// scorer errors (annotated with slot and item), or when no slot yields a
// defined score.
HScoreResult HScore(const PredictionSet& predictions, const RatingMatrix& matrix,
                    const Scorer& scorer);

// Scores predictions against the plurality label of r reference raters, for
// every size-r subset of slots (or `subset_cap` random ones), and averages.
// Plurality ties are broken at random from `random`. Throws
// ScoreError(kInsufficientRaters) when a row has fewer than r labels.
HScoreResult HScoreR(const PredictionSet& predictions, const RatingMatrix& matrix,
                     const Scorer& scorer, int r, const RandomSource& random,
                     std::size_t subset_cap = kDefaultSubsetCap);

namespace detail {

// Per-reference-unit score accumulation shared by HScore and the power
// curve. Additive scorers keep running sums; others use accumulators.
class UnitScores {
 public:
  UnitScores(const Scorer& scorer, std::size_t num_units);

  bool additive() const { return additive_; }
  void AddPairScore(std::size_t unit, double s) {
    sums_[unit] += s;
    ++counts_[unit];
  }
  void Add(std::size_t unit, const Prediction& prediction, LabelIndex reference) {
    accumulators_[unit]->Add(prediction, reference);
    ++counts_[unit];
  }
  void Reset(std::size_t num_units);

  // Mean of defined unit scores over the first `num_units` units; false when
  // none is defined. Fills `details` when non-null.
  bool Mean(double& mean, std::vector<ReferenceScore>* details = nullptr) const;

 private:
  bool additive_;
  std::vector<double> sums_;
  std::vector<std::size_t> counts_;
  std::vector<std::unique_ptr<ScoreAccumulator>> accumulators_;
  std::size_t active_ = 0;
};

// Plurality label of `row` at `slots`, or -1 when several labels tie; then
// `counts` holds the per-label counts for BreakTie.
int UniquePlurality(std::span<const LabelIndex> row, std::span<const int> slots,
                    std::vector<int>& counts);
LabelIndex BreakTie(std::span<const int> counts, Rng& rng);

// HScore / HScoreR over a sample of rows (duplicates allowed), with
// predictions aligned to matrix rows. `sample_key` separates the random
// streams of different bootstrap samples.
HScoreResult HScoreOnRows(std::span<const Prediction* const> aligned, const RatingMatrix& matrix,
                          std::span<const std::size_t> rows, const Scorer& scorer, int r,
                          const RandomSource& random, std::size_t subset_cap,
                          std::uint64_t sample_key);

}  // namespace detail
}  // namespace surveq
