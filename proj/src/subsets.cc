#include "surveq/subsets.h"

#include <algorithm>
#include <limits>
#include <numeric>
#include <set>

#include "surveq/errors.h"

namespace surveq {

std::size_t BinomialCapped(std::size_t n, std::size_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  constexpr std::size_t kMax = std::numeric_limits<std::size_t>::max();
  std::size_t result = 1;
  for (std::size_t i = 1; i <= k; ++i) {
    // result * (n - k + i) / i stays integral at every step.
    const std::size_t factor = n - k + i;
    if (result > kMax / factor) return kMax;
    result = result * factor / i;
  }
  return result;
}

SubsetPlan RaterSubsets(std::span<const int> slots, int k, Rng& rng, std::size_t cap) {
  const auto n = static_cast<int>(slots.size());
  if (k < 0 || k > n) throw UsageError("subset size out of range");
  SubsetPlan plan{k, {}};
  if (BinomialCapped(n, k) <= cap) {
    // Lexicographic enumeration of index combinations.
    std::vector<int> idx(k);
    std::iota(idx.begin(), idx.end(), 0);
    while (true) {
      std::vector<int> subset(k);
      for (int i = 0; i < k; ++i) subset[i] = slots[idx[i]];
      std::sort(subset.begin(), subset.end());
      plan.subsets.push_back(std::move(subset));
      int i = k - 1;
      while (i >= 0 && idx[i] == n - k + i) --i;
      if (i < 0) break;
      ++idx[i];
      for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
    return plan;
  }
  std::set<std::vector<int>> seen;
  std::vector<int> pool(slots.begin(), slots.end());
  while (plan.subsets.size() < cap) {
    // Partial Fisher-Yates draws a uniform k-subset.
    for (int i = 0; i < k; ++i) {
      const auto j = i + static_cast<int>(rng.UniformIndex(static_cast<std::uint64_t>(n - i)));
      std::swap(pool[i], pool[j]);
    }
    std::vector<int> subset(pool.begin(), pool.begin() + k);
    std::sort(subset.begin(), subset.end());
    if (seen.insert(subset).second) plan.subsets.push_back(std::move(subset));
  }
  return plan;
}

SubsetPlan RaterSubsets(int num_raters, int k, Rng& rng, std::size_t cap) {
  if (num_raters < 0) throw UsageError("negative rater count");
  std::vector<int> slots(num_raters);
  std::iota(slots.begin(), slots.end(), 0);
  return RaterSubsets(slots, k, rng, cap);
}

}  // namespace surveq
