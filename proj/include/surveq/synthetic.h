#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "surveq/label_space.h"
#include "surveq/prediction.h"
#include "surveq/random.h"
#include "surveq/rating_matrix.h"
#include "surveq/scorers.h"

namespace surveq {

// An item state: the label distribution a random rater draws from.
struct SyntheticState {
  std::vector<double> probs;
  double prior = 0.0;
};

// How a synthetic classifier responds to an item: a hard label drawn from
// hard_emission[state], reported softly as soft_map[hard label].
struct ClassifierRules {
  std::vector<std::vector<double>> hard_emission;
  std::vector<std::vector<double>> soft_map;
};

struct SyntheticModel {
  LabelSpace label_space;
  std::vector<SyntheticState> states;
  std::optional<ClassifierRules> classifier;

  // Throws UsageError unless there are >= 2 states with full support, priors
  // and every distribution sum to 1, and vector sizes match.
  void Validate() const;
};

// Three states over {C, D}: (.8,.2) prior .7, (.5,.5) prior .1, (.1,.9)
// prior .2. The classifier says C with probability .9, .5, .05 by state and
// reports C as (.77,.23) and D as (.32,.68).
SyntheticModel RunningExampleModel();

// Model from JSON text:
//   {"labels": [...], "states": [{"probs": [...], "prior": p}, ...],
//    "classifier": {"hard_emission": [[...] per state],
//                   "soft_map": {"<label>": [...], ...}}}
// "classifier" is optional. Throws ParseError on malformed JSON and
// UsageError on an invalid model.
SyntheticModel ParseModelJson(std::string_view text);

struct GroundTruthTrace {
  std::vector<std::string> items;
  std::vector<std::size_t> states;
};

struct SyntheticData {
  RatingMatrix ratings;
  std::optional<PredictionSet> hard;
  std::optional<PredictionSet> soft;
  GroundTruthTrace trace;
};

// n_items items with ids item0001.., each with a state drawn from the
// priors, n_raters i.i.d. labels and (when the model has one) classifier
// outputs. Every item draws from its own stream.
SyntheticData Generate(const SyntheticModel& model, std::size_t n_items, std::size_t n_raters,
                       const RandomSource& random);
// Fresh labels and classifier outputs for the items and states of `trace`.
SyntheticData GenerateFromTrace(const SyntheticModel& model, const GroundTruthTrace& trace,
                                std::size_t n_raters, const RandomSource& random);

// Entropy of one random label, in bits.
double LabelEntropy(const SyntheticModel& model);
// Exact MI (bits) between one label and k other labels of the same item,
// summed over label count vectors of size k.
double AnalyticSurveyMi(const SyntheticModel& model, int k);
// MI(state; label) in bits, the limit of AnalyticSurveyMi.
double AnalyticStateMi(const SyntheticModel& model);

struct ClassifierMi {
  double mi = 0.0;
  // Whether soft_map equals Pr[label | output] to within 1e-9.
  bool calibrated = false;
};
// Exact MI (bits) between the soft classifier output and a random label.
// Throws UsageError when the model has no classifier.
ClassifierMi AnalyticClassifierMi(const SyntheticModel& model);

// Score of predictions against each item's true state, read as a label.
// Needs one state per label (the state's most likely label); otherwise
// throws ScoreError(kNonUniformNoiseModel).
ScoreValue HScoreStar(const PredictionSet& predictions, const GroundTruthTrace& trace,
                      const SyntheticModel& model, const Scorer& scorer);

}  // namespace surveq
