#include "surveq/abc.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "surveq/errors.h"

namespace surveq {
namespace {

constexpr std::size_t kLogFactorialTableSize = 4096;

const std::vector<double>& LogFactorialTable() {
  static const std::vector<double> table = [] {
    std::vector<double> t(kLogFactorialTableSize, 0.0);
    for (std::size_t n = 2; n < t.size(); ++n) t[n] = t[n - 1] + std::log(static_cast<double>(n));
    return t;
  }();
  return table;
}

double LogFactorial(int n) {
  const auto& table = LogFactorialTable();
  if (static_cast<std::size_t>(n) < table.size()) return table[n];
  return std::lgamma(static_cast<double>(n) + 1.0);
}

std::size_t HashInts(std::span<const int> values, std::size_t seed) {
  std::size_t h = seed;
  for (int v : values) h = (h ^ static_cast<std::size_t>(v)) * 0x100000001B3ull;
  return h;
}

}  // namespace

double ProbabilityOneItem(std::span<const int> seq_counts, std::span<const int> item_counts) {
  if (seq_counts.size() != item_counts.size()) {
    throw UsageError("sequence and item count vectors differ in length");
  }
  int k = 0;
  int n = 0;
  double log_p = 0.0;
  for (std::size_t l = 0; l < seq_counts.size(); ++l) {
    if (seq_counts[l] > item_counts[l]) return 0.0;
    k += seq_counts[l];
    n += item_counts[l];
    // C(W, y) y! = W! / (W - y)!
    log_p += LogFactorial(item_counts[l]) - LogFactorial(item_counts[l] - seq_counts[l]);
  }
  if (k == 0) return 1.0;
  // C(n, k) k! = n! / (n - k)!
  log_p -= LogFactorial(n) - LogFactorial(n - k);
  return std::exp(log_p);
}

std::size_t ProbabilityMemo::KeyHash::operator()(const std::vector<int>& key) const {
  return HashInts(key, 0xCBF29CE484222325ull);
}

double ProbabilityMemo::Get(std::span<const int> seq_counts, std::span<const int> item_counts) {
  std::vector<int> key(seq_counts.begin(), seq_counts.end());
  key.insert(key.end(), item_counts.begin(), item_counts.end());
  std::lock_guard<std::mutex> lock(mu_);
  auto it = values_.find(key);
  if (it != values_.end()) return it->second;
  const double p = ProbabilityOneItem(seq_counts, item_counts);
  ++evaluations_;
  sequences_.emplace(std::vector<int>(seq_counts.begin(), seq_counts.end()), 0);
  values_.emplace(std::move(key), p);
  return p;
}

std::size_t ProbabilityMemo::distinct_sequences() const {
  std::lock_guard<std::mutex> lock(mu_);
  return sequences_.size();
}

std::size_t AbcCache::SumKeyHash::operator()(
    const std::pair<std::vector<int>, std::size_t>& key) const {
  return HashInts(key.first, 0x84222325CBF29CE4ull ^ key.second);
}

AbcCache::AbcCache(const RatingMatrix& matrix) : AbcCache(matrix, Options{}) {}

AbcCache::AbcCache(const RatingMatrix& matrix, Options options)
    : AbcCache(matrix, matrix.canonical_order(), std::move(options)) {}

AbcCache::AbcCache(const RatingMatrix& matrix, std::span<const std::size_t> rows, Options options)
    : num_labels_(matrix.num_labels()), options_(std::move(options)) {
  memo_ = options_.probability_memo ? options_.probability_memo
                                    : std::make_shared<ProbabilityMemo>();
  std::vector<const LabelCounts*> counts;
  counts.reserve(rows.size());
  for (std::size_t r : rows) counts.push_back(&matrix.row_counts(r));
  std::sort(counts.begin(), counts.end(),
            [](const LabelCounts* a, const LabelCounts* b) { return *a < *b; });
  for (const LabelCounts* c : counts) {
    if (!groups_.empty() && groups_.back().counts == *c) {
      ++groups_.back().multiplicity;
    } else {
      const auto length = static_cast<std::size_t>(std::accumulate(c->begin(), c->end(), 0));
      groups_.push_back({*c, length, 1});
    }
  }
}

double AbcCache::ItemProbability(std::span<const int> seq_counts,
                                 std::span<const int> item_counts) {
  if (options_.memoize) return memo_->Get(seq_counts, item_counts);
  return ProbabilityOneItem(seq_counts, item_counts);
}

std::pair<double, std::size_t> AbcCache::SumOfProbabilities(std::span<const int> seq_counts,
                                                            std::size_t min_length) {
  std::pair<std::vector<int>, std::size_t> key;
  if (options_.memoize) {
    key = {std::vector<int>(seq_counts.begin(), seq_counts.end()), min_length};
    auto it = sums_.find(key);
    if (it != sums_.end()) return it->second;
  }
  double v = 0.0;
  std::size_t eligible = 0;
  for (const Group& g : groups_) {
    if (g.length < min_length) continue;
    v += static_cast<double>(g.multiplicity) * ItemProbability(seq_counts, g.counts);
    eligible += g.multiplicity;
  }
  if (options_.memoize) sums_.emplace(std::move(key), std::make_pair(v, eligible));
  return {v, eligible};
}

double AbcCache::LabelSeqProb(std::span<const int> seq_counts,
                              std::span<const int> excluded_counts, std::size_t min_length) {
  auto [v, eligible] = SumOfProbabilities(seq_counts, min_length);
  const auto excluded_length =
      static_cast<std::size_t>(std::accumulate(excluded_counts.begin(), excluded_counts.end(), 0));
  if (excluded_length >= min_length) {
    v -= ItemProbability(seq_counts, excluded_counts);
    --eligible;
  }
  if (eligible == 0) {
    throw CombinerError(CombinerError::Code::kTooFewEligibleItems,
                        "TooFewEligibleItems: no other item has at least " +
                            std::to_string(min_length) + " labels");
  }
  // Cancellation can leave a tiny negative remainder.
  return std::max(0.0, v) / static_cast<double>(eligible);
}

Prediction AbcCache::Combine(std::span<const int> counts, std::span<const int> excluded_counts) {
  const auto k = static_cast<std::size_t>(std::accumulate(counts.begin(), counts.end(), 0));
  const double denominator = LabelSeqProb(counts, excluded_counts, k + 1);
  if (!(denominator > 0.0)) {
    std::string seq;
    for (int c : counts) seq += (seq.empty() ? "" : ",") + std::to_string(c);
    throw CombinerError(CombinerError::Code::kZeroDenominator,
                        "ZeroDenominator: no other item can produce label counts (" + seq + ")");
  }
  std::vector<int> extended(counts.begin(), counts.end());
  std::vector<double> probs(num_labels_);
  double total = 0.0;
  for (std::size_t l = 0; l < num_labels_; ++l) {
    ++extended[l];
    probs[l] = LabelSeqProb(extended, excluded_counts, k + 1);
    total += probs[l];
    --extended[l];
  }
  // The numerators sum to the denominator up to rounding; dividing by their
  // own sum keeps the output normalized when the excluded item dominates.
  if (!(total > 0.0)) {
    throw CombinerError(CombinerError::Code::kZeroDenominator,
                        "ZeroDenominator: next-label probabilities vanish");
  }
  for (double& p : probs) p /= total;
  return Prediction::Soft(std::move(probs));
}

double LabelSeqProb(std::span<const LabelIndex> seq, const RatingMatrix& matrix,
                    std::size_t excluded_item, AbcCache& cache) {
  const LabelCounts counts = CountLabels(seq, matrix.num_labels());
  return cache.LabelSeqProb(counts, matrix.row_counts(excluded_item), seq.size());
}

Prediction AbcCombine(std::span<const LabelIndex> seq, const RatingMatrix& matrix,
                      std::size_t excluded_item, AbcCache& cache) {
  const LabelCounts counts = CountLabels(seq, matrix.num_labels());
  return cache.Combine(counts, matrix.row_counts(excluded_item));
}

}  // namespace surveq
