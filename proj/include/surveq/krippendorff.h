#pragma once

#include "surveq/rating_matrix.h"

namespace surveq {

struct AlphaResult {
  double alpha = 1.0;
  // Every pairable label is the same, so expected disagreement is 0 and
  // alpha is undefined; reported as 1.
  bool degenerate = false;
};

// Nominal Krippendorff alpha over the pairable labels of a ragged matrix
// (rows with at least 2 labels). Throws ScoreError(kEmptyInput) when no
// row is pairable.
AlphaResult KrippendorffAlpha(const RatingMatrix& matrix);

}  // namespace surveq
