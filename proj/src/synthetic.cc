#include "surveq/synthetic.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

#include "json.hpp"
#include "surveq/errors.h"

namespace surveq {
namespace {

constexpr double kSumTolerance = 1e-9;

void CheckDistribution(const std::vector<double>& p, std::size_t size, const std::string& what,
                       bool full_support) {
  if (p.size() != size) {
    throw UsageError(what + " has " + std::to_string(p.size()) + " entries, expected " +
                     std::to_string(size));
  }
  double sum = 0.0;
  for (double x : p) {
    if (!(x >= 0.0 && x <= 1.0)) throw UsageError(what + " has an entry outside [0,1]");
    if (full_support && x == 0.0) throw UsageError(what + " lacks full support");
    sum += x;
  }
  if (std::abs(sum - 1.0) > kSumTolerance) throw UsageError(what + " does not sum to 1");
}

std::size_t Draw(std::span<const double> p, Rng& rng) {
  const double u = rng.Uniform01();
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < p.size(); ++i) {
    acc += p[i];
    if (u < acc) return i;
  }
  return p.size() - 1;
}

double Log2OrZero(double p) { return p > 0.0 ? p * std::log2(p) : 0.0; }

// Calls fn(counts) for every count vector of `labels` entries summing to k.
void ForEachCounts(std::size_t labels, int k, const std::function<void(const std::vector<int>&)>& fn) {
  std::vector<int> counts(labels, 0);
  std::function<void(std::size_t, int)> rec = [&](std::size_t l, int left) {
    if (l + 1 == labels) {
      counts[l] = left;
      fn(counts);
      return;
    }
    for (int c = 0; c <= left; ++c) {
      counts[l] = c;
      rec(l + 1, left - c);
    }
  };
  rec(0, k);
}

std::string ItemId(std::size_t i, std::size_t n) {
  const std::size_t width = std::max<std::size_t>(4, std::to_string(n).size());
  std::string digits = std::to_string(i + 1);
  return "item" + std::string(width - digits.size(), '0') + digits;
}

}  // namespace

void SyntheticModel::Validate() const {
  const std::size_t n = label_space.size();
  if (states.size() < 2) throw UsageError("a model needs at least 2 states");
  double prior_sum = 0.0;
  for (std::size_t s = 0; s < states.size(); ++s) {
    CheckDistribution(states[s].probs, n, "state " + std::to_string(s), true);
    if (!(states[s].prior >= 0.0)) throw UsageError("negative prior");
    prior_sum += states[s].prior;
  }
  if (std::abs(prior_sum - 1.0) > kSumTolerance) throw UsageError("priors do not sum to 1");
  if (!classifier) return;
  if (classifier->hard_emission.size() != states.size()) {
    throw UsageError("hard_emission needs one distribution per state");
  }
  for (std::size_t s = 0; s < states.size(); ++s) {
    CheckDistribution(classifier->hard_emission[s], n, "hard_emission " + std::to_string(s),
                      false);
  }
  if (classifier->soft_map.size() != n) throw UsageError("soft_map needs one vector per label");
  for (std::size_t l = 0; l < n; ++l) {
    CheckDistribution(classifier->soft_map[l], n, "soft_map " + label_space.labels()[l], false);
  }
}

SyntheticModel RunningExampleModel() {
  SyntheticModel model{LabelSpace({"C", "D"}),
                       {{{0.8, 0.2}, 0.7}, {{0.5, 0.5}, 0.1}, {{0.1, 0.9}, 0.2}},
                       ClassifierRules{{{0.9, 0.1}, {0.5, 0.5}, {0.05, 0.95}},
                                       {{0.77, 0.23}, {0.32, 0.68}}}};
  return model;
}

SyntheticModel ParseModelJson(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(0, e.byte, std::string("model JSON: ") + e.what());
  }
  try {
    SyntheticModel model{LabelSpace(doc.at("labels").get<std::vector<std::string>>()), {}, {}};
    for (const auto& s : doc.at("states")) {
      model.states.push_back({s.at("probs").get<std::vector<double>>(), s.at("prior").get<double>()});
    }
    if (doc.contains("classifier")) {
      const auto& c = doc.at("classifier");
      ClassifierRules rules;
      rules.hard_emission = c.at("hard_emission").get<std::vector<std::vector<double>>>();
      const auto& soft = c.at("soft_map");
      for (const auto& label : model.label_space.labels()) {
        if (!soft.contains(label)) throw UsageError("soft_map has no entry for label " + label);
        rules.soft_map.push_back(soft.at(label).get<std::vector<double>>());
      }
      model.classifier = std::move(rules);
    }
    model.Validate();
    return model;
  } catch (const nlohmann::json::exception& e) {
    throw UsageError(std::string("model JSON: ") + e.what());
  }
}

SyntheticData GenerateFromTrace(const SyntheticModel& model, const GroundTruthTrace& trace,
                                std::size_t n_raters, const RandomSource& random) {
  model.Validate();
  if (n_raters < 2) throw UsageError("need at least 2 raters per item");
  const LabelSpace& space = model.label_space;
  std::vector<std::vector<LabelIndex>> rows;
  std::optional<PredictionSet> hard, soft;
  if (model.classifier) {
    hard.emplace(space, PredictionKind::kHard);
    soft.emplace(space, PredictionKind::kSoft);
  }
  for (std::size_t i = 0; i < trace.items.size(); ++i) {
    const auto& state = model.states.at(trace.states[i]);
    Rng rng = random.Stream({stream_tag::kGenerate, 1, i});
    std::vector<LabelIndex> row(n_raters);
    for (auto& label : row) label = static_cast<LabelIndex>(Draw(state.probs, rng));
    rows.push_back(std::move(row));
    if (model.classifier) {
      const auto h = static_cast<LabelIndex>(
          Draw(model.classifier->hard_emission[trace.states[i]], rng));
      hard->Add(trace.items[i], Prediction::Hard(h));
      soft->Add(trace.items[i], Prediction::Soft(model.classifier->soft_map[h]));
    }
  }
  return SyntheticData{RatingMatrix(space, trace.items, std::move(rows)), std::move(hard),
                       std::move(soft), trace};
}

SyntheticData Generate(const SyntheticModel& model, std::size_t n_items, std::size_t n_raters,
                       const RandomSource& random) {
  model.Validate();
  if (n_items < 1) throw UsageError("need at least 1 item");
  GroundTruthTrace trace;
  std::vector<double> priors;
  for (const auto& s : model.states) priors.push_back(s.prior);
  for (std::size_t i = 0; i < n_items; ++i) {
    Rng rng = random.Stream({stream_tag::kGenerate, 0, i});
    trace.items.push_back(ItemId(i, n_items));
    trace.states.push_back(Draw(priors, rng));
  }
  return GenerateFromTrace(model, trace, n_raters, random);
}

double LabelEntropy(const SyntheticModel& model) {
  double h = 0.0;
  for (std::size_t l = 0; l < model.label_space.size(); ++l) {
    double p = 0.0;
    for (const auto& s : model.states) p += s.prior * s.probs[l];
    h -= Log2OrZero(p);
  }
  return h;
}

double AnalyticSurveyMi(const SyntheticModel& model, int k) {
  if (k < 0) throw UsageError("k must be nonnegative");
  const std::size_t n = model.label_space.size();
  // H(Y | counts of k labels) by summing over count vectors.
  double conditional = 0.0;
  ForEachCounts(n, k, [&](const std::vector<int>& counts) {
    double log_multinomial = std::lgamma(k + 1.0);
    for (int c : counts) log_multinomial -= std::lgamma(c + 1.0);
    std::vector<double> joint(n, 0.0);
    double total = 0.0;
    for (const auto& s : model.states) {
      double log_p = log_multinomial;
      for (std::size_t l = 0; l < n; ++l) log_p += counts[l] * std::log(s.probs[l]);
      const double w = s.prior * std::exp(log_p);
      total += w;
      for (std::size_t l = 0; l < n; ++l) joint[l] += w * s.probs[l];
    }
    if (total <= 0.0) return;
    for (std::size_t l = 0; l < n; ++l) {
      if (joint[l] > 0.0) conditional -= joint[l] * std::log2(joint[l] / total);
    }
  });
  return std::max(0.0, LabelEntropy(model) - conditional);
}

double AnalyticStateMi(const SyntheticModel& model) {
  double conditional = 0.0;
  for (const auto& s : model.states) {
    for (double p : s.probs) conditional -= s.prior * Log2OrZero(p);
  }
  return LabelEntropy(model) - conditional;
}

ClassifierMi AnalyticClassifierMi(const SyntheticModel& model) {
  if (!model.classifier) throw UsageError("the model has no classifier");
  model.Validate();
  const std::size_t n = model.label_space.size();
  const auto& rules = *model.classifier;
  // Outputs are soft vectors; hard labels reported identically are one output.
  std::vector<std::vector<double>> outputs;
  std::vector<std::size_t> output_of(n);
  for (std::size_t h = 0; h < n; ++h) {
    auto it = std::find(outputs.begin(), outputs.end(), rules.soft_map[h]);
    output_of[h] = static_cast<std::size_t>(it - outputs.begin());
    if (it == outputs.end()) outputs.push_back(rules.soft_map[h]);
  }
  // joint[o][y] = Pr[output o, label y].
  std::vector<std::vector<double>> joint(outputs.size(), std::vector<double>(n, 0.0));
  for (std::size_t s = 0; s < model.states.size(); ++s) {
    for (std::size_t h = 0; h < n; ++h) {
      const double p = model.states[s].prior * rules.hard_emission[s][h];
      for (std::size_t y = 0; y < n; ++y) joint[output_of[h]][y] += p * model.states[s].probs[y];
    }
  }
  ClassifierMi result;
  result.calibrated = true;
  double conditional = 0.0;
  for (std::size_t o = 0; o < outputs.size(); ++o) {
    const double total = std::accumulate(joint[o].begin(), joint[o].end(), 0.0);
    if (total <= 0.0) continue;
    for (std::size_t y = 0; y < n; ++y) {
      const double posterior = joint[o][y] / total;
      if (std::abs(posterior - outputs[o][y]) > 1e-9) result.calibrated = false;
      if (joint[o][y] > 0.0) conditional -= joint[o][y] * std::log2(posterior);
    }
  }
  result.mi = std::max(0.0, LabelEntropy(model) - conditional);
  return result;
}

ScoreValue HScoreStar(const PredictionSet& predictions, const GroundTruthTrace& trace,
                      const SyntheticModel& model, const Scorer& scorer) {
  const std::size_t n = model.label_space.size();
  std::vector<LabelIndex> state_label;
  std::vector<bool> taken(n, false);
  bool bijective = model.states.size() == n;
  for (const auto& s : model.states) {
    const auto l = static_cast<std::size_t>(
        std::max_element(s.probs.begin(), s.probs.end()) - s.probs.begin());
    if (taken[l]) bijective = false;
    taken[l] = true;
    state_label.push_back(static_cast<LabelIndex>(l));
  }
  if (!bijective) {
    throw ScoreError(ScoreError::Code::kNonUniformNoiseModel,
                     "NonUniformNoiseModel: states do not correspond one to one with labels");
  }
  std::vector<ScoredPair> pairs;
  pairs.reserve(trace.items.size());
  for (std::size_t i = 0; i < trace.items.size(); ++i) {
    pairs.push_back({predictions.at(trace.items[i]), state_label[trace.states[i]]});
  }
  return scorer.Score(pairs);
}

}  // namespace surveq
