#pragma once

#include <atomic>
#include <cstddef>
#include <memory>
#include <mutex>
#include <span>
#include <unordered_map>
#include <utility>
#include <vector>

#include "surveq/label_space.h"
#include "surveq/prediction.h"
#include "surveq/rating_matrix.h"

namespace surveq {

// Probability that k labels drawn in order, uniformly without replacement,
// from an item with label counts `item_counts` come out as one particular
// sequence with label counts `seq_counts` (k = sum of seq_counts):
//
//   prod_l C(W(l), y(l)) y(l)!  /  (C(|W|, k) k!)
//
// and 0 when some y(l) > W(l). Evaluated in log space. Callers ensure
// |W| >= k.
double ProbabilityOneItem(std::span<const int> seq_counts, std::span<const int> item_counts);

// Thread-safe memo of ProbabilityOneItem keyed by (sequence counts, item
// counts). Both arguments are count vectors, so the number of distinct keys
// is bounded by (distinct item count vectors) x (distinct sequence counts).
class ProbabilityMemo {
 public:
  double Get(std::span<const int> seq_counts, std::span<const int> item_counts);

  // Number of actual ProbabilityOneItem evaluations (cache misses).
  std::size_t evaluations() const { return evaluations_.load(); }
  std::size_t distinct_sequences() const;

 private:
  struct KeyHash {
    std::size_t operator()(const std::vector<int>& key) const;
  };
  mutable std::mutex mu_;
  std::unordered_map<std::vector<int>, double, KeyHash> values_;
  std::unordered_map<std::vector<int>, int, KeyHash> sequences_;
  std::atomic<std::size_t> evaluations_{0};
};

// Learned label-sequence statistics of a rating matrix (or of a bootstrap
// sample of its rows, duplicates included), backing the Anonymous Bayesian
// Combiner. Rows are grouped by their label count vector, so sums over
// items cost one term per distinct count vector.
//
// Not thread-safe: each concurrent task owns its AbcCache. The probability
// memo may be shared.
class AbcCache {
 public:
  struct Options {
    // Disables both memo layers; results are bit-identical either way.
    bool memoize = true;
    // Shared ProbabilityOneItem memo; a private one is created when null.
    std::shared_ptr<ProbabilityMemo> probability_memo;
  };

  explicit AbcCache(const RatingMatrix& matrix);
  AbcCache(const RatingMatrix& matrix, Options options);
  // Rows of `matrix` listed in `rows`, with repetition.
  AbcCache(const RatingMatrix& matrix, std::span<const std::size_t> rows, Options options);

  std::size_t num_labels() const { return num_labels_; }

  // Sum of ProbabilityOneItem over rows with at least `min_length` labels,
  // and the number of such rows.
  std::pair<double, std::size_t> SumOfProbabilities(std::span<const int> seq_counts,
                                                    std::size_t min_length);

  // Estimated probability of a label sequence with counts `seq_counts`,
  // learned from every row except one copy of the excluded item (given by
  // its label counts). Only rows with at least `min_length` labels take part;
  // an ineligible excluded item subtracts nothing. Throws
  // CombinerError(kTooFewEligibleItems) when no other row is eligible.
  double LabelSeqProb(std::span<const int> seq_counts, std::span<const int> excluded_counts,
                      std::size_t min_length);

  // Predictive distribution of the next label given observed counts `counts`
  // for the excluded item. Numerator and denominator both use rows with at
  // least sum(counts) + 1 labels, so the output sums to 1.
  Prediction Combine(std::span<const int> counts, std::span<const int> excluded_counts);

  ProbabilityMemo& probability_memo() { return *memo_; }

 private:
  double ItemProbability(std::span<const int> seq_counts, std::span<const int> item_counts);

  struct Group {
    LabelCounts counts;
    std::size_t length;
    std::size_t multiplicity;
  };
  struct SumKeyHash {
    std::size_t operator()(const std::pair<std::vector<int>, std::size_t>& key) const;
  };

  std::size_t num_labels_;
  Options options_;
  std::shared_ptr<ProbabilityMemo> memo_;
  std::vector<Group> groups_;
  std::unordered_map<std::pair<std::vector<int>, std::size_t>, std::pair<double, std::size_t>,
                     SumKeyHash>
      sums_;
};

// Entry points over an ordered label sequence. The result depends
// only on the sequence's label counts.
double LabelSeqProb(std::span<const LabelIndex> seq, const RatingMatrix& matrix,
                    std::size_t excluded_item, AbcCache& cache);
Prediction AbcCombine(std::span<const LabelIndex> seq, const RatingMatrix& matrix,
                      std::size_t excluded_item, AbcCache& cache);

}  // namespace surveq
