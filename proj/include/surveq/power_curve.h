#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "surveq/abc.h"
#include "surveq/combiners.h"
#include "surveq/hscore.h"
#include "surveq/random.h"
#include "surveq/rating_matrix.h"
#include "surveq/results.h"
#include "surveq/scorers.h"
#include "surveq/subsets.h"

namespace surveq {

struct SpcOptions {
  std::size_t subset_cap = kDefaultSubsetCap;
  // Score against the plurality of this many held-out raters. The curve
  // then stops at k = K - reference_raters.
  int reference_raters = 1;
  std::size_t reference_cap = kDefaultSubsetCap;
  // Worker threads for bootstrap samples; results do not depend on it.
  unsigned jobs = 1;
  // Memoization inside the ABC combiner.
  bool memoize = true;
  // Shared ProbabilityOneItem memo; one per call is created when null.
  std::shared_ptr<ProbabilityMemo> probability_memo;
};

// Survey power curve c_0 .. c_{K - reference_raters}. For each k and each
// rater subset from RaterSubsets, every item having those slots gets a
// prediction from the combined subset labels, which is scored against the
// item's unused slots; c_k is the mean over subsets. Throws UsageError when
// the scorer does not accept the combiner's output kind or K is too small.
PowerCurve Spc(const RatingMatrix& matrix, const Combiner& combiner, const Scorer& scorer,
               const RandomSource& random, const SpcOptions& options = {});

struct BootstrapOptions {
  std::size_t samples = 500;
  // False makes every sample the original matrix (for testing).
  bool resample = true;
};

struct BootstrapCurves {
  PowerCurve point;  // Full-data curve, with ci_low / ci_high filled in.
  std::vector<std::vector<double>> sample_means;  // One curve per sample.
};

// Power curves over bootstrap samples of items (rows drawn with
// replacement; rater slots untouched) and 2.5 / 97.5 percentile bands.
BootstrapCurves BootstrapPowerCurves(const RatingMatrix& matrix, const Combiner& combiner,
                                     const Scorer& scorer, const RandomSource& random,
                                     const SpcOptions& options = {},
                                     const BootstrapOptions& bootstrap = {});

namespace detail {

// What a power-curve evaluation needs, beyond the sample of rows.
struct CurveInputs {
  const RatingMatrix* source = nullptr;
  const Combiner* combiner = nullptr;
  const Scorer* scorer = nullptr;
  RandomSource random{0};
  SpcOptions options;
  // Separate reference raters (cross-group equivalence): row i of `source`
  // is scored against row reference_rows[i] of `reference`, using all of
  // its slots. Null means the source's own unused slots.
  const RatingMatrix* reference = nullptr;
  std::vector<std::size_t> reference_rows;
};

// Largest k on the curve.
int MaxCurveK(const CurveInputs& inputs);

// c_k for each k in `ks` over a sample of source rows. Coverage per k is
// written when non-null.
std::vector<double> CurveOnRows(const CurveInputs& inputs, std::span<const std::size_t> rows,
                                std::uint64_t sample_key, std::span<const int> ks,
                                std::vector<double>* coverage = nullptr);

// Canonical row order, or a with-replacement draw of it for `sample`.
std::vector<std::size_t> SampleRows(const RatingMatrix& matrix, const RandomSource& random,
                                    std::uint64_t sample, bool resample);

// Runs fn(0) .. fn(n-1) on up to `jobs` threads.
void ParallelFor(std::size_t n, unsigned jobs, const std::function<void(std::size_t)>& fn);

}  // namespace detail
}  // namespace surveq
