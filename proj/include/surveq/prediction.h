#pragma once

#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "surveq/label_space.h"
#include "surveq/rating_matrix.h"

namespace surveq {

enum class PredictionKind { kHard, kSoft };

std::string_view ToString(PredictionKind kind);

// Soft probabilities must sum to 1 within this tolerance.
inline constexpr double kNormalizationTolerance = 1e-9;

// A classifier (or combiner) output for one item: a single label, or a
// probability distribution indexed in LabelSpace order.
class Prediction {
 public:
  static Prediction Hard(LabelIndex label);
  // Throws PredictionError unless every entry is in [0,1] and the sum is 1
  // within `tolerance`.
  static Prediction Soft(std::vector<double> probs, double tolerance = kNormalizationTolerance);

  PredictionKind kind() const { return kind_; }
  bool is_hard() const { return kind_ == PredictionKind::kHard; }
  LabelIndex label() const { return label_; }
  std::span<const double> probs() const { return probs_; }
  // Probability of `label`; for hard predictions 1 or 0.
  double Probability(LabelIndex label) const;

  bool operator==(const Prediction& other) const = default;

 private:
  Prediction(PredictionKind kind, LabelIndex label, std::vector<double> probs)
      : kind_(kind), label_(label), probs_(std::move(probs)) {}

  PredictionKind kind_;
  LabelIndex label_ = 0;
  std::vector<double> probs_;
};

// Per-item predictions of one kind, over a fixed label space.
class PredictionSet {
 public:
  PredictionSet(LabelSpace label_space, PredictionKind kind);

  const LabelSpace& label_space() const { return label_space_; }
  PredictionKind kind() const { return kind_; }
  std::size_t size() const { return items_.size(); }
  const std::vector<std::string>& items() const { return items_; }

  // Throws PredictionError on a kind mismatch, a wrong-length probability
  // vector, an out-of-range label or a duplicate item.
  void Add(std::string item, Prediction prediction);

  const Prediction* Find(std::string_view item) const;
  const Prediction& at(std::string_view item) const;

  // Predictions in row order of `matrix`. Throws PredictionError naming the
  // first item of the matrix that has no prediction.
  std::vector<const Prediction*> AlignTo(const RatingMatrix& matrix) const;

 private:
  LabelSpace label_space_;
  PredictionKind kind_;
  std::vector<std::string> items_;
  std::unordered_map<std::string, Prediction> predictions_;
};

}  // namespace surveq
