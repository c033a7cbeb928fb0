#include "surveq/combiners.h"

#include <algorithm>
#include <numeric>
#include <vector>

#include "surveq/errors.h"

namespace surveq {
namespace {

bool HasTie(std::span<const int> counts) {
  const int best = *std::max_element(counts.begin(), counts.end());
  return std::count(counts.begin(), counts.end(), best) > 1;
}

class PluralityCombiner : public Combiner {
 public:
  explicit PluralityCombiner(std::string name) : name_(std::move(name)) {}
  std::string name() const override { return name_; }
  PredictionKind output_kind() const override { return PredictionKind::kHard; }
  bool NeedsRandomness(std::span<const int> counts) const override { return HasTie(counts); }
  Prediction Combine(std::span<const int> counts, const CombineContext&, Rng& rng) const override {
    return Plurality(counts, rng);
  }

 private:
  std::string name_;
};

class FrequencyCombiner : public Combiner {
 public:
  std::string name() const override { return "frequency"; }
  PredictionKind output_kind() const override { return PredictionKind::kSoft; }
  Prediction Combine(std::span<const int> counts, const CombineContext&, Rng&) const override {
    return Frequency(counts);
  }
};

class AbcCombiner : public Combiner {
 public:
  std::string name() const override { return "abc"; }
  PredictionKind output_kind() const override { return PredictionKind::kSoft; }
  bool myopic() const override { return false; }
  Prediction Combine(std::span<const int> counts, const CombineContext& context,
                     Rng&) const override {
    if (context.abc == nullptr) throw UsageError("abc combiner needs a rating matrix");
    return context.abc->Combine(counts, context.excluded_counts);
  }
};

}  // namespace

Prediction Plurality(std::span<const int> counts, Rng& rng) {
  const int best = *std::max_element(counts.begin(), counts.end());
  std::vector<LabelIndex> modes;
  for (std::size_t l = 0; l < counts.size(); ++l) {
    if (counts[l] == best) modes.push_back(static_cast<LabelIndex>(l));
  }
  if (modes.size() == 1) return Prediction::Hard(modes.front());
  return Prediction::Hard(modes[rng.UniformIndex(modes.size())]);
}

Prediction MajorityVote(std::span<const int> counts, Rng& rng) {
  if (counts.size() != 2) {
    throw CombinerError(CombinerError::Code::kUnsupportedLabelSpace,
                        "majority vote needs exactly 2 labels; use plurality");
  }
  // With two labels the strict majority is the plurality label.
  return Plurality(counts, rng);
}

Prediction Frequency(std::span<const int> counts) {
  const int k = std::accumulate(counts.begin(), counts.end(), 0);
  const std::size_t n = counts.size();
  if (k == 0) return Prediction::Soft(std::vector<double>(n, 1.0 / static_cast<double>(n)));
  std::vector<double> probs(n);
  bool clipped = false;
  for (std::size_t l = 0; l < n; ++l) {
    probs[l] = static_cast<double>(counts[l]) / k;
    if (counts[l] == 0) {
      probs[l] = kFrequencyEpsilon;
      clipped = true;
    } else if (counts[l] == k) {
      probs[l] = 1.0 - kFrequencyEpsilon;
      clipped = true;
    }
  }
  if (clipped) {
    const double sum = std::accumulate(probs.begin(), probs.end(), 0.0);
    for (double& p : probs) p /= sum;
  }
  return Prediction::Soft(std::move(probs));
}

std::unique_ptr<Combiner> MakeCombiner(std::string_view name, const LabelSpace& label_space) {
  if (name == "majority") {
    if (label_space.size() != 2) {
      throw UsageError("majority combiner needs a binary label space; use plurality");
    }
    return std::make_unique<PluralityCombiner>("majority");
  }
  if (name == "plurality") return std::make_unique<PluralityCombiner>("plurality");
  if (name == "frequency") return std::make_unique<FrequencyCombiner>();
  if (name == "abc") return std::make_unique<AbcCombiner>();
  throw UsageError("unknown combiner '" + std::string(name) + "'");
}

}  // namespace surveq
