#include <algorithm>
#include <cmath>
#include <random>

#include "gtest/gtest.h"
#include "surveq/errors.h"
#include "surveq/hscore.h"
#include "surveq/krippendorff.h"
#include "surveq/scorers.h"
#include "test_util.h"

namespace surveq {
namespace {

using testing::Matrix;

constexpr LabelIndex C = 0;
constexpr LabelIndex D = 1;

std::vector<ScoredPair> HardPairs(const std::vector<std::pair<LabelIndex, LabelIndex>>& v) {
  std::vector<ScoredPair> out;
  for (auto [p, y] : v) out.push_back({Prediction::Hard(p), y});
  return out;
}

std::vector<ScoredPair> SoftPairs(const std::vector<std::pair<double, LabelIndex>>& v) {
  std::vector<ScoredPair> out;
  for (auto [p, y] : v) out.push_back({Prediction::Soft({p, 1.0 - p}), y});
  return out;
}

// Ten-item example: ratings matrix plus hard and soft classifier outputs.
struct Example {
  RatingMatrix ratings = Matrix({{"x", "CC"}});
  PredictionSet hard{LabelSpace({"C", "D"}), PredictionKind::kHard};
  PredictionSet soft{LabelSpace({"C", "D"}), PredictionKind::kSoft};
};

Example RunningExample() {
  Example e;
  std::vector<std::pair<std::string, std::string>> rows;
  for (const auto& [item, text] : testing::RunningExampleRows()) {
    rows.emplace_back(item, text.substr(1));
    const LabelIndex h = text[0] == 'C' ? C : D;
    e.hard.Add(item, Prediction::Hard(h));
    e.soft.Add(item, h == C ? Prediction::Soft({0.77, 0.23}) : Prediction::Soft({0.32, 0.68}));
  }
  e.ratings = Matrix(rows);
  return e;
}

// Pairs of predictions with the last rater's labels.
std::vector<ScoredPair> AgainstLastRater(const Example& e, const PredictionSet& set) {
  std::vector<ScoredPair> pairs;
  for (std::size_t i = 0; i < e.ratings.num_items(); ++i) {
    const auto row = e.ratings.row(i);
    pairs.push_back({set.at(e.ratings.item(i)), row.back()});
  }
  return pairs;
}

TEST(AgreementTest, Examples) {
  EXPECT_DOUBLE_EQ(AgreementScore(HardPairs({{C, C}, {D, C}})).value, 0.5);
  EXPECT_DOUBLE_EQ(AgreementScore(HardPairs({{C, C}, {D, D}})).value, 1.0);
  EXPECT_THROW(AgreementScore({}), ScoreError);
}

TEST(AgreementTest, RunningExampleLastRater) {
  const Example e = RunningExample();
  EXPECT_NEAR(AgreementScore(AgainstLastRater(e, e.hard)).value, 0.9, 1e-12);
}

TEST(F1Test, Examples) {
  EXPECT_DOUBLE_EQ(F1Score(HardPairs({{C, C}, {D, D}}), C).value, 1.0);
  EXPECT_DOUBLE_EQ(F1Score(HardPairs({{D, C}, {D, D}}), C).value, 0.0);
  EXPECT_DOUBLE_EQ(F1Score(HardPairs({{C, C}, {C, D}, {D, C}}), C).value, 0.5);
  const ScoreValue none = F1Score(HardPairs({{D, D}, {D, D}}), C);
  EXPECT_DOUBLE_EQ(none.value, 0.0);
  EXPECT_TRUE(none.degenerate);
}

TEST(CrossEntropyTest, Uniform) {
  EXPECT_DOUBLE_EQ(CrossEntropyScore(SoftPairs({{0.5, C}, {0.5, D}, {0.5, C}})).value, -1.0);
}

TEST(CrossEntropyTest, RunningExampleLastRater) {
  const Example e = RunningExample();
  EXPECT_NEAR(CrossEntropyScore(AgainstLastRater(e, e.soft)).value, -0.54, 0.005);
  // Constant prior prediction.
  PredictionSet prior(LabelSpace({"C", "D"}), PredictionKind::kSoft);
  for (const auto& item : e.ratings.items()) prior.Add(item, Prediction::Soft({0.63, 0.37}));
  EXPECT_NEAR(CrossEntropyScore(AgainstLastRater(e, prior)).value, -0.82, 0.005);
}

TEST(CrossEntropyTest, ZeroProbabilityLabel) {
  try {
    CrossEntropyScore(SoftPairs({{1.0, D}}));
    FAIL();
  } catch (const ScoreError& e) {
    EXPECT_EQ(e.code(), ScoreError::Code::kZeroProbabilityLabel);
  }
}

TEST(CrossEntropyTest, EmpiricalFrequencyIsBestConstant) {
  std::mt19937 gen(3);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 5 + trial;
    std::vector<std::pair<double, LabelIndex>> labels;
    int c_count = 0;
    for (int i = 0; i < n; ++i) {
      const LabelIndex y = gen() % 3 == 0 ? D : C;
      c_count += y == C;
      labels.push_back({0.0, y});
    }
    double best = -INFINITY, best_p = 0.0;
    for (int g = 1; g < 1000; ++g) {
      for (auto& l : labels) l.first = g / 1000.0;
      const double s = CrossEntropyScore(SoftPairs(labels)).value;
      if (s > best) best = s, best_p = g / 1000.0;
    }
    const double freq = std::clamp(static_cast<double>(c_count) / n, 0.001, 0.999);
    EXPECT_NEAR(best_p, freq, 0.0011);
  }
}

TEST(AucTest, Examples) {
  EXPECT_DOUBLE_EQ(AucScore(SoftPairs({{0.9, C}, {0.8, C}, {0.2, D}}), C).value, 1.0);
  EXPECT_DOUBLE_EQ(AucScore(SoftPairs({{0.5, C}, {0.5, C}, {0.5, D}}), C).value, 0.5);
  EXPECT_DOUBLE_EQ(AucScore(SoftPairs({{0.9, C}, {0.4, C}, {0.6, D}, {0.1, D}}), C).value, 0.75);
  EXPECT_FALSE(AucScore(SoftPairs({{0.9, C}, {0.4, C}}), C).defined);
}

TEST(DmiTest, Examples) {
  // Independent: predictions and labels balanced and crossed evenly.
  EXPECT_NEAR(DmiScore(HardPairs({{C, C}, {C, D}, {D, C}, {D, D}}), 2).value, 0.0, 1e-15);
  EXPECT_NEAR(DmiScore(HardPairs({{C, C}, {D, D}}), 2).value, 0.25, 1e-15);
  EXPECT_NEAR(DmiScore(HardPairs({{C, D}, {D, C}}), 2).value, 0.25, 1e-15);
}

TEST(DmiTest, SoftUsesProbabilityMass) {
  // M = [[.8+.3, .1], [.2+.7, .9]] / 3 for references C, C, D.
  const auto pairs = SoftPairs({{0.8, C}, {0.3, C}, {0.1, D}});
  const double m00 = 1.1 / 3, m01 = 0.1 / 3, m10 = 0.9 / 3, m11 = 0.9 / 3;
  EXPECT_NEAR(DmiScore(pairs, 2).value, std::abs(m00 * m11 - m01 * m10), 1e-12);
}

TEST(DmiTest, LabelPermutationInvariant) {
  std::mt19937 gen(11);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<std::pair<LabelIndex, LabelIndex>> v, swapped;
    for (int i = 0; i < 30; ++i) {
      const auto p = static_cast<LabelIndex>(gen() % 3), y = static_cast<LabelIndex>(gen() % 3);
      v.push_back({p, y});
      // Relabel 0 <-> 2 in both prediction and reference.
      auto relabel = [](LabelIndex l) { return static_cast<LabelIndex>(l == 0 ? 2 : l == 2 ? 0 : 1); };
      swapped.push_back({relabel(p), relabel(y)});
    }
    EXPECT_NEAR(DmiScore(HardPairs(v), 3).value, DmiScore(HardPairs(swapped), 3).value, 1e-15);
  }
}

TEST(ScorerTest, PermutationInvariance) {
  std::mt19937 gen(5);
  std::vector<std::pair<double, LabelIndex>> v;
  for (int i = 0; i < 40; ++i) v.push_back({0.05 + 0.9 * (gen() % 100) / 100.0, gen() % 2 ? C : D});
  auto shuffled = v;
  std::shuffle(shuffled.begin(), shuffled.end(), gen);
  EXPECT_NEAR(CrossEntropyScore(SoftPairs(v)).value, CrossEntropyScore(SoftPairs(shuffled)).value,
              1e-12);
  EXPECT_DOUBLE_EQ(AucScore(SoftPairs(v), C).value, AucScore(SoftPairs(shuffled), C).value);
  std::vector<std::pair<LabelIndex, LabelIndex>> h, hs;
  for (const auto& [p, y] : v) h.push_back({p > 0.5 ? C : D, y});
  hs = h;
  std::shuffle(hs.begin(), hs.end(), gen);
  EXPECT_DOUBLE_EQ(AgreementScore(HardPairs(h)).value, AgreementScore(HardPairs(hs)).value);
  EXPECT_DOUBLE_EQ(F1Score(HardPairs(h), C).value, F1Score(HardPairs(hs), C).value);
}

TEST(MakeScorerTest, NeedsPositiveLabel) {
  const LabelSpace space({"C", "D"});
  EXPECT_THROW(MakeScorer("f1", space), UsageError);
  EXPECT_THROW(MakeScorer("nope", space), UsageError);
  EXPECT_EQ(MakeScorer("f1", space, C)->name(), "f1");
  EXPECT_TRUE(MakeScorer("cross-entropy", space)->Accepts(PredictionKind::kSoft));
  EXPECT_FALSE(MakeScorer("cross-entropy", space)->Accepts(PredictionKind::kHard));
}

TEST(HScoreTest, TwoSlotExample) {
  const RatingMatrix m = Matrix({{"i1", "CD"}, {"i2", "CC"}});
  PredictionSet set(m.label_space(), PredictionKind::kHard);
  set.Add("i1", Prediction::Hard(C));
  set.Add("i2", Prediction::Hard(C));
  const auto scorer = MakeScorer("agreement", m.label_space());
  const HScoreResult r = HScore(set, m, *scorer);
  EXPECT_DOUBLE_EQ(r.value, 0.75);
  ASSERT_EQ(r.references.size(), 2u);
  EXPECT_DOUBLE_EQ(r.references[0].score.value, 1.0);
  EXPECT_DOUBLE_EQ(r.references[1].score.value, 0.5);
}

TEST(HScoreTest, UnanimousAgreementIsOne) {
  const RatingMatrix m = Matrix({{"a", "CCCC"}, {"b", "DDDD"}, {"c", "CCCC"}});
  PredictionSet set(m.label_space(), PredictionKind::kHard);
  set.Add("a", Prediction::Hard(C));
  set.Add("b", Prediction::Hard(D));
  set.Add("c", Prediction::Hard(C));
  EXPECT_DOUBLE_EQ(HScore(set, m, *MakeScorer("agreement", m.label_space())).value, 1.0);
  // r = 3 on a unanimous matrix matches r = 1.
  EXPECT_DOUBLE_EQ(
      HScoreR(set, m, *MakeScorer("agreement", m.label_space()), 3, RandomSource(1)).value, 1.0);
}

TEST(HScoreTest, RaggedSlotsUseItemsThatHaveThem) {
  const RatingMatrix m = Matrix({{"a", "CCD"}, {"b", "DD"}});
  PredictionSet set(m.label_space(), PredictionKind::kHard);
  set.Add("a", Prediction::Hard(C));
  set.Add("b", Prediction::Hard(D));
  const HScoreResult r = HScore(set, m, *MakeScorer("agreement", m.label_space()));
  // Slots: {1, 1} -> 1, {1, 1} -> 1, {0} -> 0.
  EXPECT_DOUBLE_EQ(r.value, 2.0 / 3.0);
  EXPECT_EQ(r.references[2].items, 1u);
  EXPECT_DOUBLE_EQ(r.coverage()[2], 0.5);
}

TEST(HScoreTest, SlotErrorsNameItemAndSlot) {
  const RatingMatrix m = Matrix({{"a", "CD"}, {"b", "CC"}});
  PredictionSet set(m.label_space(), PredictionKind::kSoft);
  set.Add("a", Prediction::Soft({1.0, 0.0}));
  set.Add("b", Prediction::Soft({0.5, 0.5}));
  try {
    HScore(set, m, *MakeScorer("cross-entropy", m.label_space()));
    FAIL();
  } catch (const ScoreError& e) {
    EXPECT_EQ(e.code(), ScoreError::Code::kZeroProbabilityLabel);
    EXPECT_NE(std::string(e.what()).find("item a"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("slot 1"), std::string::npos);
  }
}

TEST(HScoreTest, KindMismatch) {
  const RatingMatrix m = Matrix({{"a", "CD"}});
  PredictionSet set(m.label_space(), PredictionKind::kHard);
  set.Add("a", Prediction::Hard(C));
  EXPECT_THROW(HScore(set, m, *MakeScorer("cross-entropy", m.label_space())), ScoreError);
}

TEST(HScoreTest, SlotMeanMatchesPerSlotScores) {
  std::mt19937 gen(9);
  std::vector<std::pair<std::string, std::string>> rows;
  for (int i = 0; i < 30; ++i) {
    std::string text;
    for (int j = 0; j < 5; ++j) text += gen() % 2 ? 'C' : 'D';
    rows.push_back({"i" + std::to_string(i), text});
  }
  const RatingMatrix m = Matrix(rows);
  PredictionSet set(m.label_space(), PredictionKind::kSoft);
  for (const auto& [item, text] : rows) set.Add(item, Prediction::Soft({0.7, 0.3}));
  const auto scorer = MakeScorer("cross-entropy", m.label_space());
  const HScoreResult all = HScore(set, m, *scorer);
  double total = 0.0;
  for (int j = 0; j < 5; ++j) {
    std::vector<ScoredPair> pairs;
    for (std::size_t i = 0; i < m.num_items(); ++i) {
      pairs.push_back({set.at(m.item(i)), m.row(i)[j]});
    }
    total += CrossEntropyScore(pairs).value;
  }
  EXPECT_NEAR(all.value, total / 5, 1e-12);
  // Dropping the last slot leaves the mean of the remaining four.
  std::vector<std::pair<std::string, std::string>> trimmed;
  for (const auto& [item, text] : rows) trimmed.push_back({item, text.substr(0, 4)});
  const double four = HScore(set, Matrix(trimmed), *scorer).value;
  EXPECT_NEAR(all.value, (4 * four + all.references[4].score.value) / 5, 1e-12);
}

TEST(HScoreRTest, ROneEqualsHScore) {
  std::mt19937 gen(21);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<std::pair<std::string, std::string>> rows;
    for (int i = 0; i < 25; ++i) {
      std::string text;
      const int len = 2 + gen() % 5;
      for (int j = 0; j < len; ++j) text += "ABC"[gen() % 3];
      rows.push_back({"i" + std::to_string(i), text});
    }
    const RatingMatrix m = Matrix(rows, {"A", "B", "C"});
    PredictionSet set(m.label_space(), PredictionKind::kHard);
    for (const auto& [item, text] : rows) {
      set.Add(item, Prediction::Hard(static_cast<LabelIndex>(gen() % 3)));
    }
    const auto scorer = MakeScorer("agreement", m.label_space());
    EXPECT_EQ(HScoreR(set, m, *scorer, 1, RandomSource(trial)).value, HScore(set, m, *scorer).value);
  }
}

TEST(HScoreRTest, InsufficientRaters) {
  const RatingMatrix m = Matrix({{"a", "CDC"}, {"b", "CC"}});
  PredictionSet set(m.label_space(), PredictionKind::kHard);
  set.Add("a", Prediction::Hard(C));
  set.Add("b", Prediction::Hard(C));
  try {
    HScoreR(set, m, *MakeScorer("agreement", m.label_space()), 3, RandomSource(1));
    FAIL();
  } catch (const ScoreError& e) {
    EXPECT_EQ(e.code(), ScoreError::Code::kInsufficientRaters);
    EXPECT_NE(std::string(e.what()).find("InsufficientRaters(b)"), std::string::npos);
  }
}

TEST(HScoreRTest, PluralityOfThree) {
  // Reference subsets of 3 slots out of 3: one unit with plurality C, D.
  const RatingMatrix m = Matrix({{"a", "CCD"}, {"b", "DDC"}});
  PredictionSet set(m.label_space(), PredictionKind::kHard);
  set.Add("a", Prediction::Hard(C));
  set.Add("b", Prediction::Hard(C));
  EXPECT_DOUBLE_EQ(
      HScoreR(set, m, *MakeScorer("agreement", m.label_space()), 3, RandomSource(1)).value, 0.5);
}

TEST(KrippendorffTest, Unanimous) {
  const RatingMatrix m = Matrix({{"a", "CCC"}, {"b", "DDD"}, {"c", "CC"}});
  const AlphaResult r = KrippendorffAlpha(m);
  EXPECT_DOUBLE_EQ(r.alpha, 1.0);
  EXPECT_FALSE(r.degenerate);
}

TEST(KrippendorffTest, HandComputed) {
  // Coincidences: o_CC = 2, o_CD = o_DC = 1; n = 4, n_C = 3, n_D = 1.
  // alpha = 1 - (n - 1) * 2 / (2 * 3 * 1) = 0.
  EXPECT_NEAR(KrippendorffAlpha(Matrix({{"a", "CC"}, {"b", "CD"}})).alpha, 0.0, 1e-15);
  // Items AAB (m=3), BB (m=2): ordered pairs AA:2/2, AB:2/2, BA:2/2, BB:2/1.
  // o = {AA:1, AB:1, BA:1, BB:2}; n_A = 2, n_B = 3, n = 5.
  // alpha = 1 - 4 * 2 / (2 * 2 * 3) = 1/3.
  EXPECT_NEAR(KrippendorffAlpha(Matrix({{"a", "AAB"}, {"b", "BB"}}, {"A", "B", "C"})).alpha,
              1.0 / 3.0, 1e-12);
}

TEST(KrippendorffTest, RandomLabelsNearZero) {
  std::mt19937 gen(4);
  std::vector<std::pair<std::string, std::string>> rows;
  for (int i = 0; i < 1000; ++i) {
    std::string text;
    for (int j = 0; j < 10; ++j) text += gen() % 2 ? 'C' : 'D';
    rows.push_back({"i" + std::to_string(i), text});
  }
  EXPECT_LT(std::abs(KrippendorffAlpha(Matrix(rows)).alpha), 0.02);
}

TEST(KrippendorffTest, Degenerate) {
  const AlphaResult r = KrippendorffAlpha(Matrix({{"a", "CC"}, {"b", "CCC"}}));
  EXPECT_TRUE(r.degenerate);
  EXPECT_DOUBLE_EQ(r.alpha, 1.0);
}

}  // namespace
}  // namespace surveq
