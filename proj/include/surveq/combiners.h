#pragma once

#include <memory>
#include <span>
#include <string>
#include <string_view>

#include "surveq/abc.h"
#include "surveq/label_space.h"
#include "surveq/prediction.h"
#include "surveq/random.h"

namespace surveq {

// Frequency-combiner outputs of exactly 0 or 1 are moved in by this much
// before renormalizing, so cross-entropy stays finite.
inline constexpr double kFrequencyEpsilon = 0.02;

// What a non-myopic combiner may look at besides the observed labels: the
// learned statistics of the matrix, and the label counts of the item being
// predicted (whose own labels must not inform the prediction).
struct CombineContext {
  AbcCache* abc = nullptr;
  std::span<const int> excluded_counts;
};

// Maps the labels observed for one item to a prediction of another rater's
// label. All combiners here are anonymous: they see a count per label.
class Combiner {
 public:
  virtual ~Combiner() = default;

  virtual std::string name() const = 0;
  virtual PredictionKind output_kind() const = 0;
  // Myopic combiners ignore CombineContext.
  virtual bool myopic() const { return true; }
  // True when Combine draws from `rng` for these counts (random
  // tie-breaking). Otherwise the output is a function of the counts (and
  // context) and callers may cache it.
  virtual bool NeedsRandomness(std::span<const int> counts) const {
    (void)counts;
    return false;
  }

  virtual Prediction Combine(std::span<const int> counts, const CombineContext& context,
                             Rng& rng) const = 0;
};

// Majority vote for binary label spaces; ties (and no labels) pick a label
// uniformly at random.
Prediction MajorityVote(std::span<const int> counts, Rng& rng);
// Most common label, uniform random tie-break; no labels gives a uniform
// random label.
Prediction Plurality(std::span<const int> counts, Rng& rng);
// Empirical label frequencies with 0 -> 0.02 and 1 -> 0.98 clipping, then
// renormalized. No labels gives the uniform distribution.
Prediction Frequency(std::span<const int> counts);

// Builds a combiner by name: majority, plurality, frequency, abc. The
// majority combiner requires a binary label space. Throws UsageError.
std::unique_ptr<Combiner> MakeCombiner(std::string_view name, const LabelSpace& label_space);

}  // namespace surveq
