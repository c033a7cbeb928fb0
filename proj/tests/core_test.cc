#include <algorithm>
#include <set>

#include "gtest/gtest.h"
#include "surveq/errors.h"
#include "surveq/label_space.h"
#include "surveq/prediction.h"
#include "surveq/random.h"
#include "surveq/rating_matrix.h"
#include "surveq/results.h"
#include "test_util.h"

namespace surveq {
namespace {

using testing::Matrix;

TEST(LabelSpaceTest, RejectsBadSpaces) {
  EXPECT_THROW(LabelSpace({"C"}), UsageError);
  EXPECT_THROW(LabelSpace({"C", "D", "C"}), UsageError);
  const LabelSpace space({"C", "D"});
  EXPECT_EQ(space.IndexOf("D"), 1);
  EXPECT_FALSE(space.Find("X"));
}

TEST(ValidateMatrixTest, WellFormed) {
  const RatingMatrix m = Matrix({{"i1", "CD"}, {"i2", "CC"}});
  EXPECT_EQ(m.num_items(), 2u);
  EXPECT_EQ(m.max_row_length(), 2u);
  EXPECT_EQ(m.row_counts(0), (LabelCounts{1, 1}));
}

TEST(ValidateMatrixTest, UnknownLabel) {
  try {
    Matrix({{"i1", "CX"}});
    FAIL();
  } catch (const MatrixValidationError& e) {
    ASSERT_EQ(e.diagnostics().size(), 1u);
    EXPECT_EQ(e.diagnostics()[0].ToString(), "UnknownLabel(i1, 1, X)");
  }
}

TEST(ValidateMatrixTest, RowTooShort) {
  try {
    Matrix({{"i1", "C"}});
    FAIL();
  } catch (const MatrixValidationError& e) {
    ASSERT_EQ(e.diagnostics().size(), 1u);
    EXPECT_EQ(e.diagnostics()[0].ToString(), "RowTooShort(i1, 1)");
  }
}

TEST(ValidateMatrixTest, ListsEveryViolation) {
  try {
    Matrix({{"i1", "C"}, {"i1", "CD"}, {"i2", "XY"}});
    FAIL();
  } catch (const MatrixValidationError& e) {
    EXPECT_EQ(e.diagnostics().size(), 4u);
  }
}

TEST(ValidateMatrixTest, RoundTrip) {
  const RatingMatrix m = Matrix({{"b", "CDC"}, {"a", "DD"}, {"c", "CCDDC"}});
  const auto raw = m.ToRaw();
  EXPECT_EQ(ValidateMatrix(raw, m.label_space()), m);
}

TEST(RatingMatrixTest, CanonicalOrderSortsIds) {
  const RatingMatrix m = Matrix({{"b", "CD"}, {"a", "DD"}, {"c", "CC"}});
  const auto order = m.canonical_order();
  EXPECT_EQ(std::vector<std::size_t>(order.begin(), order.end()),
            (std::vector<std::size_t>{1, 0, 2}));
}

TEST(PredictionTest, SoftNormalization) {
  EXPECT_NO_THROW(Prediction::Soft({0.77, 0.23}));
  EXPECT_THROW(Prediction::Soft({0.6, 0.6}), PredictionError);
  EXPECT_THROW(Prediction::Soft({0.5, 0.5 + 2e-9}), PredictionError);
  EXPECT_NO_THROW(Prediction::Soft({0.5, 0.5 + 5e-10}));
  EXPECT_THROW(Prediction::Soft({1.5, -0.5}), PredictionError);
}

TEST(PredictionSetTest, KindAndCoverage) {
  const LabelSpace space({"C", "D"});
  PredictionSet set(space, PredictionKind::kHard);
  set.Add("i1", Prediction::Hard(0));
  EXPECT_THROW(set.Add("i1", Prediction::Hard(1)), PredictionError);
  EXPECT_THROW(set.Add("i2", Prediction::Soft({0.5, 0.5})), PredictionError);
  EXPECT_THROW(set.Add("i3", Prediction::Hard(7)), PredictionError);
  const RatingMatrix m = Matrix({{"i1", "CD"}, {"i2", "CC"}});
  try {
    set.AlignTo(m);
    FAIL();
  } catch (const PredictionError& e) {
    EXPECT_NE(std::string(e.what()).find("MissingItem(i2)"), std::string::npos);
  }
}

TEST(RandomSourceTest, StreamsAreReproducibleAndDistinct) {
  const RandomSource a(42), b(42);
  Rng x = a.Stream({1, 2, 3});
  Rng y = b.Stream({1, 2, 3});
  Rng z = a.Stream({1, 2, 4});
  bool differs = false;
  for (int i = 0; i < 100; ++i) {
    const auto vx = x(), vz = z();
    EXPECT_EQ(vx, y());
    differs |= vx != vz;
  }
  EXPECT_TRUE(differs);
  EXPECT_NE(a.Derive({1}).seed(), a.Derive({2}).seed());
}

TEST(RandomSourceTest, UniformIndexCoversRange) {
  Rng rng(7);
  std::vector<int> hist(5, 0);
  for (int i = 0; i < 50000; ++i) ++hist[rng.UniformIndex(5)];
  for (int h : hist) EXPECT_NEAR(h, 10000, 400);
}

TEST(EquivalenceValueTest, Rendering) {
  EXPECT_EQ(EquivalenceValue::Fraction(4.77).ToString(), "4.77");
  EXPECT_EQ(EquivalenceValue::Fraction(4.77).Interpretation(), "4.77 = 0.77 * 5 + 0.23 * 4");
  EXPECT_EQ(EquivalenceValue::Fraction(3.0).Interpretation(), "3.00 = a survey of 3 raters");
  EXPECT_EQ(EquivalenceValue::LessThanZero().ToString(), "less than 0");
  EXPECT_EQ(EquivalenceValue::MoreThanK().ToString(), "more than K");
}

TEST(PercentileTest, Interpolates) {
  EXPECT_DOUBLE_EQ(Percentile({3, 1, 2, 4}, 0.5), 2.5);
  EXPECT_DOUBLE_EQ(Percentile({1, 2, 3, 4, 5}, 0.0), 1.0);
  EXPECT_DOUBLE_EQ(Percentile({1, 2, 3, 4, 5}, 1.0), 5.0);
  EXPECT_DOUBLE_EQ(Percentile({1, 2, 3, 4, 5}, 0.25), 2.0);
}

TEST(PowerCurveTest, Validate) {
  PowerCurve c;
  c.k_values = {0, 1, 2};
  c.means = {0.5, 0.6, 0.7};
  EXPECT_NO_THROW(c.Validate());
  c.k_values = {0, 2, 3};
  EXPECT_THROW(c.Validate(), UsageError);
}

}  // namespace
}  // namespace surveq
