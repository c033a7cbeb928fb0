#pragma once

#include "surveq/combiners.h"
#include "surveq/errors.h"
#include "surveq/power_curve.h"
#include "surveq/prediction.h"
#include "surveq/random.h"
#include "surveq/rating_matrix.h"
#include "surveq/results.h"
#include "surveq/scorers.h"

namespace surveq {

// Survey size at which `curve` reaches `h_score`. LessThanZero when
// h_score <= c_0. Otherwise the leftmost k with c_k >= h_score: exactly k
// on a knot (or a flat stretch), else linear interpolation between k-1 and
// k. MoreThanK when the curve never gets there.
EquivalenceValue Seq(double h_score, const PowerCurve& curve);

struct SeqAnalysis {
  EquivalenceResult equivalence;
  BootstrapCurves curves;
};

// Classifier score and power curve on the full matrix, then again on each
// bootstrap sample of items; the classifier is rescored on the same
// resampled items as the curve. Sentinel outcomes are counted and left out
// of the mean and band.
SeqAnalysis SeqWithBootstrap(const PredictionSet& predictions, const RatingMatrix& matrix,
                             const Combiner& combiner, const Scorer& scorer,
                             const RandomSource& random, const SpcOptions& options = {},
                             const BootstrapOptions& bootstrap = {});

// Group a and group b rate the same items but groups differ.
class ItemMismatchError : public Error {
 public:
  using Error::Error;
};

struct CrossGroupResult {
  EquivalenceResult equivalence;
  PowerCurve reference_curve;  // Group b's own power curve.
};

// How many group-b raters a survey of k_a group-a raters is worth. Predictions
// combined from k_a-subsets of group a are scored against every group-b slot
// (mean over subsets) and placed on group b's power curve. Throws
// ItemMismatchError unless both groups cover the same item ids.
CrossGroupResult CrossGroupEquivalence(const RatingMatrix& group_a, const RatingMatrix& group_b,
                                       const Combiner& combiner, const Scorer& scorer, int k_a,
                                       const RandomSource& random, const SpcOptions& options = {});

}  // namespace surveq
