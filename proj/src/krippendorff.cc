#include "surveq/krippendorff.h"

#include <vector>

#include "surveq/errors.h"

namespace surveq {

AlphaResult KrippendorffAlpha(const RatingMatrix& matrix) {
  const std::size_t n_labels = matrix.num_labels();
  // Coincidence matrix: each ordered pair of labels within a row, weighted
  // 1 / (m_u - 1).
  std::vector<double> coincidence(n_labels * n_labels, 0.0);
  for (std::size_t i : matrix.canonical_order()) {
    const std::size_t m = matrix.row_length(i);
    if (m < 2) continue;
    const auto& counts = matrix.row_counts(i);
    const double w = 1.0 / static_cast<double>(m - 1);
    for (std::size_t c = 0; c < n_labels; ++c) {
      if (counts[c] == 0) continue;
      for (std::size_t d = 0; d < n_labels; ++d) {
        const double pairs = c == d ? static_cast<double>(counts[c]) * (counts[c] - 1)
                                    : static_cast<double>(counts[c]) * counts[d];
        coincidence[c * n_labels + d] += pairs * w;
      }
    }
  }
  std::vector<double> marginal(n_labels, 0.0);
  double n = 0.0;
  for (std::size_t c = 0; c < n_labels; ++c) {
    for (std::size_t d = 0; d < n_labels; ++d) marginal[c] += coincidence[c * n_labels + d];
    n += marginal[c];
  }
  if (n == 0.0) throw ScoreError(ScoreError::Code::kEmptyInput, "no item has 2 labels");

  double observed = 0.0;
  double expected = 0.0;
  for (std::size_t c = 0; c < n_labels; ++c) {
    for (std::size_t d = 0; d < n_labels; ++d) {
      if (c == d) continue;
      observed += coincidence[c * n_labels + d];
      expected += marginal[c] * marginal[d];
    }
  }
  AlphaResult result;
  if (expected == 0.0) {
    result.degenerate = true;
    return result;
  }
  result.alpha = 1.0 - (n - 1.0) * observed / expected;
  return result;
}

}  // namespace surveq
