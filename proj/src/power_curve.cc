#include "surveq/power_curve.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <numeric>
#include <thread>
#include <unordered_map>

#include "surveq/errors.h"

namespace surveq {
namespace detail {
namespace {

// Dense code tables up to this many entries; hashing beyond.
constexpr std::uint64_t kDenseCodeLimit = 1u << 20;

// Combiner outputs memoized by observed label counts (and, for non-myopic
// combiners, the predicted item's own label counts). Entries whose counts
// call for a random tie-break are marked and recomputed per item.
class PredictionCache {
 public:
  struct Entry {
    bool random = false;
    Prediction prediction = Prediction::Hard(0);
    std::vector<double> pair_scores;
  };

  PredictionCache(const RatingMatrix& matrix, bool myopic) : myopic_(myopic) {
    const std::uint64_t base = matrix.max_row_length() + 1;
    const std::size_t labels = matrix.num_labels();
    const std::size_t digits = myopic ? labels : 2 * labels;
    std::uint64_t size = 1;
    dense_ = true;
    for (std::size_t d = 0; d < digits; ++d) {
      if (size > kDenseCodeLimit / base) {
        dense_ = false;
        break;
      }
      size *= base;
    }
    if (dense_) {
      powers_.resize(labels);
      std::uint64_t p = 1;
      for (std::size_t l = 0; l < labels; ++l, p *= base) powers_[l] = p;
      row_space_ = p;
      index_.assign(size, -1);
    }
  }

  bool dense() const { return dense_; }
  std::uint64_t power(LabelIndex l) const { return powers_[l]; }
  std::uint64_t CountsCode(std::span<const int> counts) const {
    std::uint64_t code = 0;
    for (std::size_t l = 0; l < counts.size(); ++l) code += powers_[l] * counts[l];
    return code;
  }

  // `code` is the observed-count code; `row_code` the item's own count code.
  const Entry* FindDense(std::uint64_t code, std::uint64_t row_code) const {
    const int32_t at = index_[Key(code, row_code)];
    return at < 0 ? nullptr : &entries_[at];
  }
  const Entry& InsertDense(std::uint64_t code, std::uint64_t row_code, Entry entry) {
    index_[Key(code, row_code)] = static_cast<int32_t>(entries_.size());
    entries_.push_back(std::move(entry));
    return entries_.back();
  }

  const Entry* FindHashed(const std::vector<int>& key) const {
    auto it = hashed_.find(key);
    return it == hashed_.end() ? nullptr : &entries_[it->second];
  }
  const Entry& InsertHashed(std::vector<int> key, Entry entry) {
    hashed_.emplace(std::move(key), entries_.size());
    entries_.push_back(std::move(entry));
    return entries_.back();
  }

 private:
  std::uint64_t Key(std::uint64_t code, std::uint64_t row_code) const {
    return myopic_ ? code : code + row_space_ * row_code;
  }
  struct VectorHash {
    std::size_t operator()(const std::vector<int>& v) const {
      std::size_t h = 0xCBF29CE484222325ull;
      for (int x : v) h = (h ^ static_cast<std::size_t>(x)) * 0x100000001B3ull;
      return h;
    }
  };

  bool myopic_;
  bool dense_ = false;
  std::vector<std::uint64_t> powers_;
  std::uint64_t row_space_ = 1;
  std::vector<int32_t> index_;
  // Pointers into entries_ stay valid until the next insert.
  std::vector<Entry> entries_;
  std::unordered_map<std::vector<int>, std::size_t, VectorHash> hashed_;
};

std::string SubsetText(const std::vector<int>& subset) {
  std::string s = "{";
  for (std::size_t i = 0; i < subset.size(); ++i) {
    s += (i ? "," : "") + std::to_string(subset[i]);
  }
  return s + "}";
}

void CheckCompatible(const Combiner& combiner, const Scorer& scorer) {
  if (!scorer.Accepts(combiner.output_kind())) {
    throw UsageError("scorer " + scorer.name() + " cannot score the " +
                     std::string(ToString(combiner.output_kind())) + " output of combiner " +
                     combiner.name());
  }
}

}  // namespace

int MaxCurveK(const CurveInputs& inputs) {
  const auto num_slots = static_cast<int>(inputs.source->max_row_length());
  const int r = inputs.options.reference_raters;
  if (inputs.reference != nullptr) return num_slots;
  return num_slots - r;
}

std::vector<double> CurveOnRows(const CurveInputs& inputs, std::span<const std::size_t> rows,
                                std::uint64_t sample_key, std::span<const int> ks,
                                std::vector<double>* coverage) {
  const RatingMatrix& source = *inputs.source;
  const Combiner& combiner = *inputs.combiner;
  const Scorer& scorer = *inputs.scorer;
  const SpcOptions& options = inputs.options;
  const bool cross = inputs.reference != nullptr;
  const RatingMatrix& reference = cross ? *inputs.reference : source;
  const std::size_t num_labels = source.num_labels();
  const int r = options.reference_raters;
  const auto num_slots = static_cast<int>(source.max_row_length());
  const auto num_ref_slots = static_cast<int>(reference.max_row_length());

  std::unique_ptr<AbcCache> abc;
  if (!combiner.myopic()) {
    abc = std::make_unique<AbcCache>(
        source, rows, AbcCache::Options{options.memoize, options.probability_memo});
  }
  PredictionCache cache(source, combiner.myopic());
  std::vector<std::uint64_t> row_codes;
  if (cache.dense() && !combiner.myopic()) {
    row_codes.assign(source.num_items(), 0);
    for (std::size_t i : rows) row_codes[i] = cache.CountsCode(source.row_counts(i));
  }

  const bool additive = scorer.additive();
  // Pair scores of each possible hard prediction, for randomly broken ties.
  std::vector<std::vector<double>> hard_pair_scores;
  if (additive && combiner.output_kind() == PredictionKind::kHard) {
    for (std::size_t p = 0; p < num_labels; ++p) {
      std::vector<double> scores(num_labels);
      for (std::size_t l = 0; l < num_labels; ++l) {
        scores[l] = scorer.PairScore(Prediction::Hard(static_cast<LabelIndex>(p)),
                                     static_cast<LabelIndex>(l));
      }
      hard_pair_scores.push_back(std::move(scores));
    }
  }

  auto make_entry = [&](std::span<const int> counts, std::size_t row) {
    PredictionCache::Entry entry;
    if (combiner.NeedsRandomness(counts)) {
      entry.random = true;
      return entry;
    }
    Rng unused(0);
    CombineContext context{abc.get(), source.row_counts(row)};
    entry.prediction = combiner.Combine(counts, context, unused);
    if (additive) {
      entry.pair_scores.resize(num_labels);
      for (std::size_t l = 0; l < num_labels; ++l) {
        entry.pair_scores[l] = scorer.PairScore(entry.prediction, static_cast<LabelIndex>(l));
      }
    }
    return entry;
  };

  std::size_t max_units = std::max<std::size_t>(num_ref_slots, 1);
  if (r > 1) max_units = std::max(max_units, options.reference_cap);
  UnitScores unit_scores(scorer, max_units);
  std::vector<int> counts(num_labels);
  std::vector<int> tie_counts(num_labels);
  std::vector<int> key;

  std::vector<double> means;
  means.reserve(ks.size());
  if (coverage != nullptr) coverage->clear();
  for (int k : ks) {
    Rng subset_rng = inputs.random.Stream({sample_key, stream_tag::kSubsets,
                                           static_cast<std::uint64_t>(k)});
    const SubsetPlan plan = RaterSubsets(num_slots, k, subset_rng, options.subset_cap);
    double subset_total = 0.0;
    std::size_t subsets_defined = 0;
    std::size_t evaluated = 0;
    std::size_t attempted = 0;
    for (std::size_t s = 0; s < plan.subsets.size(); ++s) {
      const std::vector<int>& subset = plan.subsets[s];
      std::vector<int> ref_slots;
      for (int j = 0; j < (cross ? num_ref_slots : num_slots); ++j) {
        if (cross || !std::binary_search(subset.begin(), subset.end(), j)) ref_slots.push_back(j);
      }
      if (static_cast<int>(ref_slots.size()) < r) continue;
      std::vector<std::vector<int>> units;
      if (r == 1) {
        for (int j : ref_slots) units.push_back({j});
      } else {
        Rng unit_rng = inputs.random.Stream({sample_key, stream_tag::kReferenceSubsets,
                                             static_cast<std::uint64_t>(k), s});
        units = RaterSubsets(ref_slots, r, unit_rng, options.reference_cap).subsets;
      }
      unit_scores.Reset(units.size());
      const int needed = subset.empty() ? 0 : subset.back() + 1;

      try {
        for (std::size_t pos = 0; pos < rows.size(); ++pos) {
          const std::size_t i = rows[pos];
          ++attempted;
          const auto row = source.row(i);
          if (static_cast<int>(row.size()) < needed) continue;
          const auto ref_row = cross ? reference.row(inputs.reference_rows[i]) : row;

          // Prediction from the subset's labels.
          const PredictionCache::Entry* entry;
          if (cache.dense()) {
            std::uint64_t code = 0;
            for (int j : subset) code += cache.power(row[j]);
            const std::uint64_t row_code = row_codes.empty() ? 0 : row_codes[i];
            entry = cache.FindDense(code, row_code);
            if (entry == nullptr) {
              std::fill(counts.begin(), counts.end(), 0);
              for (int j : subset) ++counts[row[j]];
              entry = &cache.InsertDense(code, row_code, make_entry(counts, i));
            }
          } else {
            std::fill(counts.begin(), counts.end(), 0);
            for (int j : subset) ++counts[row[j]];
            key.assign(counts.begin(), counts.end());
            if (!combiner.myopic()) {
              const auto& own = source.row_counts(i);
              key.insert(key.end(), own.begin(), own.end());
            }
            entry = cache.FindHashed(key);
            if (entry == nullptr) entry = &cache.InsertHashed(key, make_entry(counts, i));
          }

          const Prediction* prediction = &entry->prediction;
          const double* pair_scores = entry->pair_scores.data();
          Prediction drawn = Prediction::Hard(0);
          std::vector<double> drawn_scores;
          if (entry->random) {
            std::fill(counts.begin(), counts.end(), 0);
            for (int j : subset) ++counts[row[j]];
            Rng rng = inputs.random.Stream({sample_key, stream_tag::kCombineTie,
                                            static_cast<std::uint64_t>(k), s, pos});
            CombineContext context{abc.get(), source.row_counts(i)};
            drawn = combiner.Combine(counts, context, rng);
            prediction = &drawn;
            if (additive) {
              if (drawn.is_hard()) {
                pair_scores = hard_pair_scores[drawn.label()].data();
              } else {
                drawn_scores.resize(num_labels);
                for (std::size_t l = 0; l < num_labels; ++l) {
                  drawn_scores[l] = scorer.PairScore(drawn, static_cast<LabelIndex>(l));
                }
                pair_scores = drawn_scores.data();
              }
            }
          }

          // Score against each reference unit the item has.
          bool scored = false;
          for (std::size_t u = 0; u < units.size(); ++u) {
            const auto& unit = units[u];
            if (static_cast<std::size_t>(unit.back()) >= ref_row.size()) continue;
            LabelIndex ref;
            if (r == 1) {
              ref = ref_row[unit.front()];
            } else {
              const int label = UniquePlurality(ref_row, unit, tie_counts);
              if (label >= 0) {
                ref = static_cast<LabelIndex>(label);
              } else {
                Rng rng = inputs.random.Stream({sample_key, stream_tag::kReferenceTie,
                                                static_cast<std::uint64_t>(k), s, u, pos});
                ref = BreakTie(tie_counts, rng);
              }
            }
            if (additive) {
              const double v = pair_scores[ref];
              if (std::isinf(v)) {
                throw ScoreError(ScoreError::Code::kZeroProbabilityLabel,
                                 "ZeroProbabilityLabel: item " + source.item(i));
              }
              unit_scores.AddPairScore(u, v);
            } else {
              unit_scores.Add(u, *prediction, ref);
            }
            scored = true;
          }
          if (scored) ++evaluated;
        }
      } catch (const ScoreError& e) {
        throw ScoreError(e.code(), std::string(e.what()) + " (k=" + std::to_string(k) +
                                       ", subset " + SubsetText(subset) + ")");
      } catch (const CombinerError& e) {
        throw CombinerError(e.code(), std::string(e.what()) + " (k=" + std::to_string(k) +
                                          ", subset " + SubsetText(subset) + ")");
      }

      double subset_score = 0.0;
      if (unit_scores.Mean(subset_score)) {
        subset_total += subset_score;
        ++subsets_defined;
      }
    }
    if (subsets_defined == 0) {
      throw ScoreError(ScoreError::Code::kNoDefinedScore,
                       "no rater subset gives a defined " + scorer.name() +
                           " score at k=" + std::to_string(k));
    }
    means.push_back(subset_total / static_cast<double>(subsets_defined));
    if (coverage != nullptr) {
      coverage->push_back(attempted == 0 ? 0.0
                                         : static_cast<double>(evaluated) /
                                               static_cast<double>(attempted));
    }
  }
  return means;
}

std::vector<std::size_t> SampleRows(const RatingMatrix& matrix, const RandomSource& random,
                                    std::uint64_t sample, bool resample) {
  const auto order = matrix.canonical_order();
  std::vector<std::size_t> rows(order.begin(), order.end());
  if (!resample) return rows;
  Rng rng = random.Stream({stream_tag::kBootstrap, sample});
  for (auto& row : rows) row = order[rng.UniformIndex(order.size())];
  return rows;
}

void ParallelFor(std::size_t n, unsigned jobs, const std::function<void(std::size_t)>& fn) {
  if (jobs <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> threads;
  const std::size_t count = std::min<std::size_t>(jobs, n);
  for (std::size_t t = 0; t < count; ++t) threads.emplace_back(worker);
  for (auto& t : threads) t.join();
  // Report the lowest-index failure so errors do not depend on scheduling.
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace detail

namespace {

detail::CurveInputs MakeInputs(const RatingMatrix& matrix, const Combiner& combiner,
                               const Scorer& scorer, const RandomSource& random,
                               const SpcOptions& options) {
  detail::CheckCompatible(combiner, scorer);
  if (options.reference_raters < 1) throw UsageError("--ref-r must be at least 1");
  if (matrix.max_row_length() < 2) throw UsageError("power curves need at least 2 rater slots");
  if (static_cast<int>(matrix.max_row_length()) - options.reference_raters < 0) {
    throw UsageError("more reference raters than rater slots");
  }
  detail::CurveInputs inputs;
  inputs.source = &matrix;
  inputs.combiner = &combiner;
  inputs.scorer = &scorer;
  inputs.random = random;
  inputs.options = options;
  if (!inputs.options.probability_memo) {
    inputs.options.probability_memo = std::make_shared<ProbabilityMemo>();
  }
  return inputs;
}

PowerCurve CurveShell(const detail::CurveInputs& inputs, const RandomSource& random) {
  PowerCurve curve;
  const int max_k = detail::MaxCurveK(inputs);
  for (int k = 0; k <= max_k; ++k) curve.k_values.push_back(k);
  curve.combiner = inputs.combiner->name();
  curve.scorer = inputs.scorer->name();
  curve.seed = random.seed();
  curve.reference_raters = inputs.options.reference_raters;
  return curve;
}

}  // namespace

PowerCurve Spc(const RatingMatrix& matrix, const Combiner& combiner, const Scorer& scorer,
               const RandomSource& random, const SpcOptions& options) {
  const auto inputs = MakeInputs(matrix, combiner, scorer, random, options);
  PowerCurve curve = CurveShell(inputs, random);
  curve.means = detail::CurveOnRows(inputs, matrix.canonical_order(), stream_tag::kPointSample,
                                    curve.k_values, &curve.coverage);
  return curve;
}

BootstrapCurves BootstrapPowerCurves(const RatingMatrix& matrix, const Combiner& combiner,
                                     const Scorer& scorer, const RandomSource& random,
                                     const SpcOptions& options,
                                     const BootstrapOptions& bootstrap) {
  if (bootstrap.samples < 1) throw UsageError("bootstrap needs at least 1 sample");
  const auto inputs = MakeInputs(matrix, combiner, scorer, random, options);
  BootstrapCurves out;
  out.point = CurveShell(inputs, random);
  out.point.bootstrap_samples = bootstrap.samples;
  out.point.means = detail::CurveOnRows(inputs, matrix.canonical_order(),
                                        stream_tag::kPointSample, out.point.k_values,
                                        &out.point.coverage);
  out.sample_means.resize(bootstrap.samples);
  detail::ParallelFor(bootstrap.samples, options.jobs, [&](std::size_t s) {
    const auto rows = detail::SampleRows(matrix, random, s, bootstrap.resample);
    // An identity sample shares the point curve's streams, so its bands collapse.
    const std::uint64_t key = bootstrap.resample ? s : stream_tag::kPointSample;
    out.sample_means[s] = detail::CurveOnRows(inputs, rows, key, out.point.k_values);
  });
  std::vector<double> low, high;
  for (std::size_t k = 0; k < out.point.k_values.size(); ++k) {
    std::vector<double> column;
    column.reserve(bootstrap.samples);
    for (const auto& m : out.sample_means) column.push_back(m[k]);
    low.push_back(Percentile(column, 0.025));
    high.push_back(Percentile(column, 0.975));
  }
  out.point.ci_low = std::move(low);
  out.point.ci_high = std::move(high);
  return out;
}

}  // namespace surveq
