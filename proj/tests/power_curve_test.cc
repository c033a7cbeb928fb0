#include <algorithm>
#include <random>
#include <set>

#include "gtest/gtest.h"
#include "surveq/errors.h"
#include "surveq/power_curve.h"
#include "surveq/subsets.h"
#include "test_util.h"

namespace surveq {
namespace {

using testing::Matrix;

TEST(RaterSubsetsTest, EnumeratesBelowCap) {
  Rng rng(1);
  const SubsetPlan plan = RaterSubsets(5, 2, rng);
  EXPECT_EQ(plan.subsets.size(), 10u);
  EXPECT_EQ(std::set<std::vector<int>>(plan.subsets.begin(), plan.subsets.end()).size(), 10u);
}

TEST(RaterSubsetsTest, SamplesCapAbove) {
  Rng rng(1);
  const SubsetPlan plan = RaterSubsets(10, 5, rng);
  ASSERT_EQ(plan.subsets.size(), 200u);
  EXPECT_EQ(std::set<std::vector<int>>(plan.subsets.begin(), plan.subsets.end()).size(), 200u);
  for (const auto& s : plan.subsets) {
    EXPECT_EQ(s.size(), 5u);
    EXPECT_TRUE(std::is_sorted(s.begin(), s.end()));
  }
  Rng again(1);
  EXPECT_EQ(RaterSubsets(10, 5, again).subsets, plan.subsets);
}

TEST(RaterSubsetsTest, EmptySubset) {
  Rng rng(1);
  const SubsetPlan plan = RaterSubsets(7, 0, rng);
  ASSERT_EQ(plan.subsets.size(), 1u);
  EXPECT_TRUE(plan.subsets[0].empty());
  EXPECT_THROW(RaterSubsets(3, 4, rng), UsageError);
}

TEST(SpcTest, UnanimousMajorityAgreement) {
  const RatingMatrix m = Matrix({{"a", "CCCCC"}, {"b", "DDDDD"}, {"c", "CCCCC"}, {"d", "DDDDD"}});
  const auto combiner = MakeCombiner("majority", m.label_space());
  const auto scorer = MakeScorer("agreement", m.label_space());
  const PowerCurve c = Spc(m, *combiner, *scorer, RandomSource(1));
  ASSERT_EQ(c.k_values, (std::vector<int>{0, 1, 2, 3, 4}));
  for (int k = 1; k <= 4; ++k) EXPECT_DOUBLE_EQ(c.means[k], 1.0);
  EXPECT_NO_THROW(c.Validate());
}

TEST(SpcTest, NeverScoresAgainstUsedSlots) {
  // Slot j always holds label j, so a prediction built from a subset can
  // only match a reference from one of the subset's own slots.
  const std::vector<std::string> labels = {"A", "B", "C", "D", "E", "F"};
  std::vector<std::pair<std::string, std::string>> rows;
  for (int i = 0; i < 8; ++i) rows.push_back({"i" + std::to_string(i), "ABCDEF"});
  const RatingMatrix m = Matrix(rows, labels);
  const auto combiner = MakeCombiner("plurality", m.label_space());
  const auto scorer = MakeScorer("agreement", m.label_space());
  const PowerCurve c = Spc(m, *combiner, *scorer, RandomSource(3));
  for (int k = 1; k <= 5; ++k) EXPECT_DOUBLE_EQ(c.means[k], 0.0) << "k=" << k;
}

// Power curve computed the slow way: every subset, predictions from the
// combiner, each unused slot scored through Scorer::Score.
std::vector<double> NaiveCurve(const RatingMatrix& m, const Combiner& combiner,
                               const Scorer& scorer) {
  const int K = static_cast<int>(m.max_row_length());
  AbcCache abc(m, AbcCache::Options{false, nullptr});
  std::vector<double> out;
  for (int k = 0; k < K; ++k) {
    Rng unused(0);
    const SubsetPlan plan = RaterSubsets(K, k, unused, 1000000);
    double total = 0.0;
    int defined = 0;
    for (const auto& subset : plan.subsets) {
      double unit_total = 0.0;
      int units = 0;
      for (int j = 0; j < K; ++j) {
        if (std::count(subset.begin(), subset.end(), j)) continue;
        std::vector<ScoredPair> pairs;
        for (std::size_t i : m.canonical_order()) {
          const auto row = m.row(i);
          if (!subset.empty() && subset.back() >= static_cast<int>(row.size())) continue;
          if (j >= static_cast<int>(row.size())) continue;
          std::vector<int> counts(m.num_labels(), 0);
          for (int s : subset) ++counts[row[s]];
          CombineContext context{&abc, m.row_counts(i)};
          pairs.push_back({combiner.Combine(counts, context, unused), row[j]});
        }
        if (pairs.empty()) continue;
        const ScoreValue v = scorer.Score(pairs);
        if (!v.defined) continue;
        unit_total += v.value;
        ++units;
      }
      if (units == 0) continue;
      total += unit_total / units;
      ++defined;
    }
    out.push_back(total / defined);
  }
  return out;
}

RatingMatrix RandomRagged(std::mt19937& gen, int items, int min_len, int max_len) {
  std::vector<std::pair<std::string, std::string>> rows;
  for (int i = 0; i < items; ++i) {
    const int len = min_len + static_cast<int>(gen() % (max_len - min_len + 1));
    // Items lean one way or the other so that curves have some shape.
    const double p = gen() % 2 ? 0.8 : 0.3;
    std::string text;
    for (int j = 0; j < len; ++j) text += (gen() % 1000) / 1000.0 < p ? 'C' : 'D';
    rows.push_back({"i" + std::to_string(i), text});
  }
  return Matrix(rows);
}

TEST(SpcTest, MatchesNaiveComputation) {
  std::mt19937 gen(8);
  for (int trial = 0; trial < 6; ++trial) {
    const RatingMatrix m = RandomRagged(gen, 80, trial < 3 ? 6 : 4, 6);
    const LabelSpace& space = m.label_space();
    for (const auto& [comb, score] : std::vector<std::pair<std::string, std::string>>{
             {"frequency", "cross-entropy"},
             {"abc", "dmi"},
             {"frequency", "dmi"},
             {"abc", "auc"}}) {
      const auto combiner = MakeCombiner(comb, space);
      const auto scorer = MakeScorer(score, space, LabelIndex{0});
      SpcOptions options;
      options.subset_cap = 1000000;
      const PowerCurve c = Spc(m, *combiner, *scorer, RandomSource(1), options);
      const auto expected = NaiveCurve(m, *combiner, *scorer);
      ASSERT_EQ(c.means.size(), expected.size());
      for (std::size_t k = 0; k < expected.size(); ++k) {
        EXPECT_NEAR(c.means[k], expected[k], 1e-12) << comb << "+" << score << " k=" << k;
      }
    }
  }
}

TEST(SpcTest, ShuffledRowsGiveIdenticalCurves) {
  std::mt19937 gen(12);
  const RatingMatrix m = RandomRagged(gen, 200, 5, 7);
  auto raw = m.ToRaw();
  std::shuffle(raw.begin(), raw.end(), gen);
  const RatingMatrix shuffled = ValidateMatrix(raw, m.label_space());
  for (const auto& [comb, score] : std::vector<std::pair<std::string, std::string>>{
           {"abc", "dmi"}, {"majority", "agreement"}, {"plurality", "f1"}}) {
    const auto combiner = MakeCombiner(comb, m.label_space());
    const auto scorer = MakeScorer(score, m.label_space(), LabelIndex{0});
    SpcOptions options;
    options.subset_cap = 20;
    const auto a = BootstrapPowerCurves(m, *combiner, *scorer, RandomSource(5), options, {5, true});
    const auto b =
        BootstrapPowerCurves(shuffled, *combiner, *scorer, RandomSource(5), options, {5, true});
    EXPECT_EQ(a.point.means, b.point.means) << comb;
    EXPECT_EQ(a.sample_means, b.sample_means) << comb;
  }
}

TEST(SpcTest, AbcZeroProbabilityReachesCrossEntropy) {
  // No other row mixes labels, so after a C the ABC gives D probability 0,
  // and item a's other rater says D.
  const RatingMatrix m = Matrix({{"a", "CD"}, {"b", "CC"}, {"c", "DD"}, {"d", "DD"}});
  const auto combiner = MakeCombiner("abc", m.label_space());
  const auto scorer = MakeScorer("cross-entropy", m.label_space());
  try {
    Spc(m, *combiner, *scorer, RandomSource(1));
    FAIL();
  } catch (const ScoreError& e) {
    EXPECT_EQ(e.code(), ScoreError::Code::kZeroProbabilityLabel);
  }
}

TEST(SpcTest, CoverageOnRaggedRows) {
  const RatingMatrix m = Matrix({{"a", "CCCC"}, {"b", "CD"}, {"c", "DDC"}});
  const auto combiner = MakeCombiner("frequency", m.label_space());
  const auto scorer = MakeScorer("cross-entropy", m.label_space());
  const PowerCurve c = Spc(m, *combiner, *scorer, RandomSource(1));
  EXPECT_DOUBLE_EQ(c.coverage[0], 1.0);
  EXPECT_LT(c.coverage[3], 1.0);
}

TEST(SpcTest, IncompatibleScorer) {
  const RatingMatrix m = Matrix({{"a", "CCC"}, {"b", "CDD"}});
  const auto combiner = MakeCombiner("frequency", m.label_space());
  const auto scorer = MakeScorer("f1", m.label_space(), LabelIndex{0});
  EXPECT_THROW(Spc(m, *combiner, *scorer, RandomSource(1)), UsageError);
}

TEST(SpcTest, ReferencePluralityShortensCurve) {
  std::mt19937 gen(2);
  const RatingMatrix m = RandomRagged(gen, 30, 6, 6);
  const auto combiner = MakeCombiner("abc", m.label_space());
  const auto scorer = MakeScorer("cross-entropy", m.label_space());
  SpcOptions options;
  options.reference_raters = 3;
  const PowerCurve c = Spc(m, *combiner, *scorer, RandomSource(1), options);
  EXPECT_EQ(c.k_values.back(), 3);
  EXPECT_EQ(c.reference_raters, 3);
}

TEST(BootstrapTest, IdentitySampleCollapsesBand) {
  std::mt19937 gen(3);
  const RatingMatrix m = RandomRagged(gen, 30, 5, 5);
  const auto combiner = MakeCombiner("majority", m.label_space());
  const auto scorer = MakeScorer("agreement", m.label_space());
  const auto out =
      BootstrapPowerCurves(m, *combiner, *scorer, RandomSource(9), {}, BootstrapOptions{1, false});
  EXPECT_EQ(*out.point.ci_low, out.point.means);
  EXPECT_EQ(*out.point.ci_high, out.point.means);
}

TEST(BootstrapTest, DeterministicAcrossRunsAndJobs) {
  std::mt19937 gen(4);
  const RatingMatrix m = RandomRagged(gen, 150, 5, 6);
  const auto combiner = MakeCombiner("abc", m.label_space());
  const auto scorer = MakeScorer("dmi", m.label_space());
  SpcOptions one, four;
  four.jobs = 4;
  const auto a = BootstrapPowerCurves(m, *combiner, *scorer, RandomSource(7), one, {20, true});
  const auto b = BootstrapPowerCurves(m, *combiner, *scorer, RandomSource(7), four, {20, true});
  EXPECT_EQ(a.sample_means, b.sample_means);
  EXPECT_EQ(*a.point.ci_low, *b.point.ci_low);
  EXPECT_EQ(*a.point.ci_high, *b.point.ci_high);
  const auto c = BootstrapPowerCurves(m, *combiner, *scorer, RandomSource(8), one, {20, true});
  EXPECT_NE(a.sample_means, c.sample_means);
}

TEST(BootstrapTest, SamplesDrawRowsWithReplacement) {
  std::mt19937 gen(5);
  const RatingMatrix m = RandomRagged(gen, 200, 3, 3);
  const auto rows = detail::SampleRows(m, RandomSource(1), 0, true);
  EXPECT_EQ(rows.size(), 200u);
  const std::set<std::size_t> distinct(rows.begin(), rows.end());
  // About 1 - 1/e of rows appear.
  EXPECT_GT(distinct.size(), 100u);
  EXPECT_LT(distinct.size(), 150u);
}

TEST(AbcMemoTest, EvaluationsBoundedByDistinctKeys) {
  std::mt19937 gen(6);
  const RatingMatrix m = RandomRagged(gen, 300, 6, 8);
  const auto combiner = MakeCombiner("abc", m.label_space());
  const auto scorer = MakeScorer("auc", m.label_space(), LabelIndex{0});
  SpcOptions options;
  options.probability_memo = std::make_shared<ProbabilityMemo>();
  Spc(m, *combiner, *scorer, RandomSource(1), options);
  const ProbabilityMemo& memo = *options.probability_memo;
  EXPECT_GT(memo.evaluations(), 0u);
  EXPECT_LE(memo.evaluations(), m.num_items() * memo.distinct_sequences());
}

}  // namespace
}  // namespace surveq
