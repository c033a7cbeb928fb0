#pragma once

#include <string>
#include <vector>

#include "surveq/prediction.h"
#include "surveq/rating_matrix.h"

namespace surveq {

struct CalibrationBucket {
  std::string output;  // The classifier output, rendered.
  std::size_t items = 0;
  std::size_t labels = 0;
  double positive_frequency = 0.0;
};

struct CalibrationResult {
  PredictionSet calibrated;
  std::vector<CalibrationBucket> buckets;  // In order of first appearance.
};

// Replaces each distinct classifier output by the empirical distribution of
// human labels over the items that received it. Buckets report the
// frequency of `positive`. Predictions for items not in `matrix` are
// dropped; every matrix item needs one.
CalibrationResult CalibrateDiscrete(const PredictionSet& predictions, const RatingMatrix& matrix,
                                    LabelIndex positive);

}  // namespace surveq
