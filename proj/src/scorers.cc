#include "surveq/scorers.h"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include "surveq/errors.h"

namespace surveq {
namespace {

void RequireHard(const Prediction& p, std::string_view scorer) {
  if (!p.is_hard()) {
    throw ScoreError(ScoreError::Code::kKindMismatch,
                     std::string(scorer) + " scorer needs hard predictions");
  }
}

void RequireSoft(const Prediction& p, std::string_view scorer) {
  if (p.is_hard()) {
    throw ScoreError(ScoreError::Code::kKindMismatch,
                     std::string(scorer) + " scorer needs soft predictions");
  }
}

[[noreturn]] void ThrowEmpty() {
  throw ScoreError(ScoreError::Code::kEmptyInput, "no pairs to score");
}

// Mean of PairScore.
class MeanAccumulator : public ScoreAccumulator {
 public:
  explicit MeanAccumulator(const Scorer& scorer) : scorer_(scorer) {}
  void Add(const Prediction& p, LabelIndex reference) override {
    sum_ += scorer_.PairScore(p, reference);
    ++count_;
  }
  ScoreValue Finish() const override {
    if (count_ == 0) ThrowEmpty();
    return {sum_ / static_cast<double>(count_)};
  }
  void Reset() override {
    sum_ = 0.0;
    count_ = 0;
  }

 private:
  const Scorer& scorer_;
  double sum_ = 0.0;
};

class AgreementScorer : public Scorer {
 public:
  std::string name() const override { return "agreement"; }
  ScorerInput input() const override { return ScorerInput::kHard; }
  bool additive() const override { return true; }
  double PairScore(const Prediction& p, LabelIndex reference) const override {
    RequireHard(p, "agreement");
    return p.label() == reference ? 1.0 : 0.0;
  }
  std::unique_ptr<ScoreAccumulator> NewAccumulator() const override {
    return std::make_unique<MeanAccumulator>(*this);
  }
};

class CrossEntropyScorer : public Scorer {
 public:
  std::string name() const override { return "cross-entropy"; }
  ScorerInput input() const override { return ScorerInput::kSoft; }
  bool additive() const override { return true; }
  // Returns -inf for a zero-probability reference; accumulators reject it.
  double PairScore(const Prediction& p, LabelIndex reference) const override {
    RequireSoft(p, "cross-entropy");
    return std::log2(p.probs()[reference]);
  }
  std::unique_ptr<ScoreAccumulator> NewAccumulator() const override;
};

class CrossEntropyAccumulator : public ScoreAccumulator {
 public:
  void Add(const Prediction& p, LabelIndex reference) override {
    RequireSoft(p, "cross-entropy");
    const double q = p.probs()[reference];
    if (!(q > 0.0)) {
      throw ScoreError(ScoreError::Code::kZeroProbabilityLabel,
                       "ZeroProbabilityLabel: reference label has probability 0");
    }
    sum_ += std::log2(q);
    ++count_;
  }
  ScoreValue Finish() const override {
    if (count_ == 0) ThrowEmpty();
    return {sum_ / static_cast<double>(count_)};
  }
  void Reset() override {
    sum_ = 0.0;
    count_ = 0;
  }

 private:
  double sum_ = 0.0;
};

std::unique_ptr<ScoreAccumulator> CrossEntropyScorer::NewAccumulator() const {
  return std::make_unique<CrossEntropyAccumulator>();
}

class F1Accumulator : public ScoreAccumulator {
 public:
  explicit F1Accumulator(LabelIndex positive) : positive_(positive) {}
  void Add(const Prediction& p, LabelIndex reference) override {
    RequireHard(p, "f1");
    const bool predicted = p.label() == positive_;
    const bool actual = reference == positive_;
    if (predicted && actual) ++tp_;
    if (predicted && !actual) ++fp_;
    if (!predicted && actual) ++fn_;
    ++count_;
  }
  ScoreValue Finish() const override {
    if (count_ == 0) ThrowEmpty();
    const double denom = 2.0 * tp_ + fp_ + fn_;
    if (denom == 0.0) return {0.0, true, true};
    return {2.0 * tp_ / denom};
  }
  void Reset() override {
    tp_ = fp_ = fn_ = 0;
    count_ = 0;
  }

 private:
  LabelIndex positive_;
  std::size_t tp_ = 0, fp_ = 0, fn_ = 0;
};

class F1Scorer : public Scorer {
 public:
  explicit F1Scorer(LabelIndex positive) : positive_(positive) {}
  std::string name() const override { return "f1"; }
  ScorerInput input() const override { return ScorerInput::kHard; }
  std::unique_ptr<ScoreAccumulator> NewAccumulator() const override {
    return std::make_unique<F1Accumulator>(positive_);
  }

 private:
  LabelIndex positive_;
};

class AucAccumulator : public ScoreAccumulator {
 public:
  explicit AucAccumulator(LabelIndex positive) : positive_(positive) {}
  void Add(const Prediction& p, LabelIndex reference) override {
    RequireSoft(p, "auc");
    points_.emplace_back(p.probs()[positive_], reference == positive_);
    ++count_;
  }
  ScoreValue Finish() const override {
    if (count_ == 0) ThrowEmpty();
    std::vector<std::pair<double, bool>> sorted = points_;
    std::sort(sorted.begin(), sorted.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    double positive_rank_sum = 0.0;
    std::size_t positives = 0;
    for (std::size_t i = 0; i < sorted.size();) {
      std::size_t j = i;
      while (j < sorted.size() && sorted[j].first == sorted[i].first) ++j;
      // Ranks i+1..j share their average.
      const double rank = 0.5 * static_cast<double>(i + 1 + j);
      for (std::size_t m = i; m < j; ++m) {
        if (sorted[m].second) {
          positive_rank_sum += rank;
          ++positives;
        }
      }
      i = j;
    }
    const std::size_t negatives = sorted.size() - positives;
    if (positives == 0 || negatives == 0) return {0.0, false, true};
    const double np = static_cast<double>(positives);
    const double u = positive_rank_sum - np * (np + 1.0) / 2.0;
    return {u / (np * static_cast<double>(negatives))};
  }
  void Reset() override {
    points_.clear();
    count_ = 0;
  }

 private:
  LabelIndex positive_;
  std::vector<std::pair<double, bool>> points_;
};

class AucScorer : public Scorer {
 public:
  explicit AucScorer(LabelIndex positive) : positive_(positive) {}
  std::string name() const override { return "auc"; }
  ScorerInput input() const override { return ScorerInput::kSoft; }
  std::unique_ptr<ScoreAccumulator> NewAccumulator() const override {
    return std::make_unique<AucAccumulator>(positive_);
  }

 private:
  LabelIndex positive_;
};

class DmiAccumulator : public ScoreAccumulator {
 public:
  explicit DmiAccumulator(std::size_t num_labels)
      : joint_(Eigen::MatrixXd::Zero(num_labels, num_labels)) {}
  void Add(const Prediction& p, LabelIndex reference) override {
    if (p.is_hard()) {
      joint_(p.label(), reference) += 1.0;
    } else {
      for (Eigen::Index c = 0; c < joint_.rows(); ++c) joint_(c, reference) += p.probs()[c];
    }
    ++count_;
  }
  ScoreValue Finish() const override {
    if (count_ == 0) ThrowEmpty();
    const Eigen::MatrixXd m = joint_ / static_cast<double>(count_);
    return {std::abs(m.determinant())};
  }
  void Reset() override {
    joint_.setZero();
    count_ = 0;
  }

 private:
  Eigen::MatrixXd joint_;
};

class DmiScorer : public Scorer {
 public:
  explicit DmiScorer(std::size_t num_labels) : num_labels_(num_labels) {}
  std::string name() const override { return "dmi"; }
  ScorerInput input() const override { return ScorerInput::kAny; }
  std::unique_ptr<ScoreAccumulator> NewAccumulator() const override {
    return std::make_unique<DmiAccumulator>(num_labels_);
  }

 private:
  std::size_t num_labels_;
};

ScoreValue Run(ScoreAccumulator& acc, std::span<const ScoredPair> pairs) {
  if (pairs.empty()) ThrowEmpty();
  for (const auto& pair : pairs) acc.Add(pair.prediction, pair.reference);
  return acc.Finish();
}

}  // namespace

bool Scorer::Accepts(PredictionKind kind) const {
  switch (input()) {
    case ScorerInput::kAny:
      return true;
    case ScorerInput::kHard:
      return kind == PredictionKind::kHard;
    case ScorerInput::kSoft:
      return kind == PredictionKind::kSoft;
  }
  return false;
}

double Scorer::PairScore(const Prediction&, LabelIndex) const {
  throw ScoreError(ScoreError::Code::kKindMismatch, name() + " is not a per-pair scorer");
}

ScoreValue Scorer::Score(std::span<const ScoredPair> pairs) const {
  for (const auto& pair : pairs) {
    if (!Accepts(pair.prediction.kind())) {
      throw ScoreError(ScoreError::Code::kKindMismatch,
                       name() + " scorer does not accept " +
                           std::string(ToString(pair.prediction.kind())) + " predictions");
    }
  }
  auto acc = NewAccumulator();
  return Run(*acc, pairs);
}

std::unique_ptr<Scorer> MakeScorer(std::string_view name, const LabelSpace& label_space,
                                   std::optional<LabelIndex> positive) {
  auto need_positive = [&]() {
    if (!positive) throw UsageError(std::string(name) + " scorer needs --positive-label");
    if (*positive >= label_space.size()) throw UsageError("positive label out of range");
    return *positive;
  };
  if (name == "agreement") return std::make_unique<AgreementScorer>();
  if (name == "cross-entropy") return std::make_unique<CrossEntropyScorer>();
  if (name == "f1") return std::make_unique<F1Scorer>(need_positive());
  if (name == "auc") return std::make_unique<AucScorer>(need_positive());
  if (name == "dmi") return std::make_unique<DmiScorer>(label_space.size());
  throw UsageError("unknown scorer '" + std::string(name) + "'");
}

ScoreValue AgreementScore(std::span<const ScoredPair> pairs) {
  AgreementScorer scorer;
  return scorer.Score(pairs);
}

ScoreValue F1Score(std::span<const ScoredPair> pairs, LabelIndex positive) {
  return F1Scorer(positive).Score(pairs);
}

ScoreValue CrossEntropyScore(std::span<const ScoredPair> pairs) {
  return CrossEntropyScorer().Score(pairs);
}

ScoreValue AucScore(std::span<const ScoredPair> pairs, LabelIndex positive) {
  return AucScorer(positive).Score(pairs);
}

ScoreValue DmiScore(std::span<const ScoredPair> pairs, std::size_t num_labels) {
  return DmiScorer(num_labels).Score(pairs);
}

}  // namespace surveq
