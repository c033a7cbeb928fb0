#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "surveq/random.h"

namespace surveq {

// Rater-slot subsets of one size.
struct SubsetPlan {
  int k = 0;
  // Each subset sorted ascending; subsets pairwise distinct.
  std::vector<std::vector<int>> subsets;
};

// All size-k subsets of `slots` when there are at most `cap` of them (in
// lexicographic order), otherwise `cap` distinct subsets drawn uniformly at
// random. Throws UsageError unless 0 <= k <= slots.size().
SubsetPlan RaterSubsets(std::span<const int> slots, int k, Rng& rng, std::size_t cap = 200);
// Same over slots 0..num_raters-1.
SubsetPlan RaterSubsets(int num_raters, int k, Rng& rng, std::size_t cap = 200);

// C(n, k), saturating at SIZE_MAX.
std::size_t BinomialCapped(std::size_t n, std::size_t k);

}  // namespace surveq
