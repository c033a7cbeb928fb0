#pragma once

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "surveq/label_space.h"
#include "surveq/prediction.h"

namespace surveq {

// Which prediction kinds a scorer accepts.
enum class ScorerInput { kHard, kSoft, kAny };

struct ScoreValue {
  double value = 0.0;
  // False when the score does not exist for this input (AUC with one class);
  // such scores are skipped by averaging callers.
  bool defined = true;
  // Set when a conventional value stands in for an undefined one (F1 with
  // no positives anywhere returns 0).
  bool degenerate = false;
};

struct ScoredPair {
  Prediction prediction;
  LabelIndex reference;
};

// Incremental form of a scorer: feed (prediction, reference) pairs, then
// read the score.
class ScoreAccumulator {
 public:
  virtual ~ScoreAccumulator() = default;
  virtual void Add(const Prediction& prediction, LabelIndex reference) = 0;
  // Throws ScoreError(kEmptyInput) when nothing was added.
  virtual ScoreValue Finish() const = 0;
  virtual void Reset() = 0;
  std::size_t count() const { return count_; }

 protected:
  std::size_t count_ = 0;
};

class Scorer {
 public:
  virtual ~Scorer() = default;

  virtual std::string name() const = 0;
  virtual ScorerInput input() const = 0;
  bool Accepts(PredictionKind kind) const;

  // Additive scorers score a set of pairs as the mean of PairScore. Power
  // curve computation uses this to avoid per-pair virtual dispatch.
  virtual bool additive() const { return false; }
  virtual double PairScore(const Prediction& prediction, LabelIndex reference) const;

  virtual std::unique_ptr<ScoreAccumulator> NewAccumulator() const = 0;

  // Throws ScoreError on an empty input or a prediction kind the scorer
  // does not accept.
  ScoreValue Score(std::span<const ScoredPair> pairs) const;
};

// Builds a scorer by name: agreement, f1, auc, cross-entropy, dmi. f1 and
// auc need `positive`. Throws UsageError otherwise.
std::unique_ptr<Scorer> MakeScorer(std::string_view name, const LabelSpace& label_space,
                                   std::optional<LabelIndex> positive = std::nullopt);

// Fraction of pairs whose hard prediction equals the reference.
ScoreValue AgreementScore(std::span<const ScoredPair> pairs);

// Harmonic mean of precision and recall for `positive`, computed as
// 2TP / (2TP + FP + FN). With no positives predicted or present the score
// is 0 and flagged degenerate.
ScoreValue F1Score(std::span<const ScoredPair> pairs, LabelIndex positive);

// Mean base-2 log probability of the reference label, in bits. Throws
// ScoreError(kZeroProbabilityLabel) when a reference label has probability 0.
ScoreValue CrossEntropyScore(std::span<const ScoredPair> pairs);

// Normalized Mann-Whitney statistic of the positive-label probability,
// ties counting one half. Undefined when references are all one class.
ScoreValue AucScore(std::span<const ScoredPair> pairs, LabelIndex positive);

// |det M| of the joint frequency matrix M[prediction][reference] / n. Soft
// predictions contribute their probability mass to each row.
ScoreValue DmiScore(std::span<const ScoredPair> pairs, std::size_t num_labels);

}  // namespace surveq
