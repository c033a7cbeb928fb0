#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "surveq/label_space.h"
#include "surveq/prediction.h"
#include "surveq/rating_matrix.h"
#include "surveq/synthetic.h"

namespace surveq {

// Soft prediction rows read from CSV must sum to 1 within this.
inline constexpr double kCsvSumTolerance = 1e-6;

// Ratings CSV: header `item,r1,...,rK`, then one row per item. Empty cells
// are missing labels and may only trail. Without `labels` the label space
// is the sorted set of labels seen. Throws ParseError on format problems
// and MatrixValidationError on invalid rows.
RatingMatrix ReadRatingsCsv(std::istream& in, const std::optional<LabelSpace>& labels = {});
RatingMatrix LoadRatingsCsv(const std::string& path,
                            const std::optional<LabelSpace>& labels = {});

// Predictions CSV, hard `item,label` or soft `item,p_<l1>,...,p_<lN>` with
// columns in label space order. Soft rows summing to 1 within 1e-6 are
// renormalized. When `matrix` is given every one of its items must have a
// prediction (PredictionError "MissingItem(id)").
PredictionSet ReadPredictionsCsv(std::istream& in, const LabelSpace& labels,
                                 const RatingMatrix* matrix = nullptr);
PredictionSet LoadPredictionsCsv(const std::string& path, const LabelSpace& labels,
                                 const RatingMatrix* matrix = nullptr);

void WriteRatingsCsv(std::ostream& out, const RatingMatrix& matrix);
// Rows in the order the items were added.
void WritePredictionsCsv(std::ostream& out, const PredictionSet& predictions);
void WriteTraceCsv(std::ostream& out, const GroundTruthTrace& trace);

}  // namespace surveq
