#include "surveq/prediction.h"

#include <cmath>

#include "surveq/errors.h"

namespace surveq {

std::string_view ToString(PredictionKind kind) {
  return kind == PredictionKind::kHard ? "hard" : "soft";
}

Prediction Prediction::Hard(LabelIndex label) { return Prediction(PredictionKind::kHard, label, {}); }

Prediction Prediction::Soft(std::vector<double> probs, double tolerance) {
  if (probs.empty()) throw PredictionError("soft prediction has no probabilities");
  double sum = 0.0;
  for (double p : probs) {
    if (!(p >= 0.0 && p <= 1.0)) {
      throw PredictionError("probability " + std::to_string(p) + " outside [0,1]");
    }
    sum += p;
  }
  if (std::abs(sum - 1.0) > tolerance) {
    throw PredictionError("probabilities sum to " + std::to_string(sum) + ", not 1");
  }
  return Prediction(PredictionKind::kSoft, 0, std::move(probs));
}

double Prediction::Probability(LabelIndex label) const {
  if (is_hard()) return label == label_ ? 1.0 : 0.0;
  return probs_.at(label);
}

PredictionSet::PredictionSet(LabelSpace label_space, PredictionKind kind)
    : label_space_(std::move(label_space)), kind_(kind) {}

void PredictionSet::Add(std::string item, Prediction prediction) {
  if (prediction.kind() != kind_) {
    throw PredictionError("item '" + item + "': expected a " + std::string(ToString(kind_)) +
                          " prediction");
  }
  if (prediction.is_hard() && prediction.label() >= label_space_.size()) {
    throw PredictionError("item '" + item + "': label index out of range");
  }
  if (!prediction.is_hard() && prediction.probs().size() != label_space_.size()) {
    throw PredictionError("item '" + item + "': expected " +
                          std::to_string(label_space_.size()) + " probabilities");
  }
  auto [it, inserted] = predictions_.emplace(item, std::move(prediction));
  if (!inserted) throw PredictionError("duplicate prediction for item '" + item + "'");
  items_.push_back(std::move(item));
}

const Prediction* PredictionSet::Find(std::string_view item) const {
  auto it = predictions_.find(std::string(item));
  return it == predictions_.end() ? nullptr : &it->second;
}

const Prediction& PredictionSet::at(std::string_view item) const {
  const Prediction* p = Find(item);
  if (p == nullptr) throw PredictionError("MissingItem(" + std::string(item) + ")");
  return *p;
}

std::vector<const Prediction*> PredictionSet::AlignTo(const RatingMatrix& matrix) const {
  if (!(matrix.label_space() == label_space_)) {
    throw PredictionError("predictions and ratings use different label spaces");
  }
  std::vector<const Prediction*> aligned(matrix.num_items());
  for (std::size_t i = 0; i < matrix.num_items(); ++i) aligned[i] = &at(matrix.item(i));
  return aligned;
}

}  // namespace surveq
