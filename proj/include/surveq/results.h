#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace surveq {

// Expected score c_k of a k-rater survey, for k = 0 .. k_values.back().
struct PowerCurve {
  std::vector<int> k_values;
  std::vector<double> means;
  // 2.5th / 97.5th bootstrap percentiles per k, when bootstrapped.
  std::optional<std::vector<double>> ci_low;
  std::optional<std::vector<double>> ci_high;
  std::optional<double> classifier_score;

  std::string combiner;
  std::string scorer;
  std::size_t bootstrap_samples = 0;
  std::uint64_t seed = 0;
  int reference_raters = 1;
  // Fraction of (subset, item) evaluations that had the slots they needed,
  // per k. Below 1 only for ragged matrices.
  std::vector<double> coverage;

  // Throws UsageError unless k_values is 0,1,2,... and every mean is finite.
  void Validate() const;
};

// Survey equivalence: a fractional survey size, or one of two sentinels.
class EquivalenceValue {
 public:
  enum class Kind { kFraction, kLessThanZero, kMoreThanK };

  static EquivalenceValue Fraction(double v) { return EquivalenceValue(Kind::kFraction, v); }
  static EquivalenceValue LessThanZero() { return EquivalenceValue(Kind::kLessThanZero, 0.0); }
  static EquivalenceValue MoreThanK() { return EquivalenceValue(Kind::kMoreThanK, 0.0); }

  Kind kind() const { return kind_; }
  bool is_fraction() const { return kind_ == Kind::kFraction; }
  // Only meaningful for kFraction.
  double value() const { return value_; }

  // "4.77", "less than 0" or "more than K".
  std::string ToString() const;
  // Reading of a fractional value as a randomized survey size, e.g.
  // "4.77 = 0.77 * 5 + 0.23 * 4".
  std::string Interpretation() const;

  bool operator==(const EquivalenceValue& other) const = default;

 private:
  EquivalenceValue(Kind kind, double value) : kind_(kind), value_(value) {}
  Kind kind_;
  double value_;
};

struct EquivalenceResult {
  EquivalenceValue value = EquivalenceValue::LessThanZero();
  double classifier_score = 0.0;

  // Bootstrap outcomes, one per sample, when bootstrapped.
  std::vector<EquivalenceValue> bootstrap_values;
  std::vector<double> bootstrap_classifier_scores;
  // Mean and 95% percentile band over the numeric bootstrap values only.
  std::optional<double> bootstrap_mean;
  std::optional<double> ci_low;
  std::optional<double> ci_high;
  std::size_t less_than_zero_count = 0;
  std::size_t more_than_k_count = 0;
};

// Linear-interpolated percentile (q in [0,1]) of unsorted values.
double Percentile(std::vector<double> values, double q);

}  // namespace surveq
