#include "surveq/rating_matrix.h"

#include <algorithm>
#include <numeric>
#include <unordered_set>

#include "surveq/errors.h"

namespace surveq {
namespace {

void CheckShape(const std::vector<std::string>& items,
                const std::vector<std::vector<LabelIndex>>& rows,
                std::vector<MatrixDiagnostic>& diagnostics) {
  std::unordered_set<std::string_view> seen;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (rows[i].size() < 2) {
      diagnostics.push_back({MatrixDiagnostic::Code::kRowTooShort, items[i], 0, "",
                             rows[i].size()});
    }
    if (!seen.insert(items[i]).second) {
      diagnostics.push_back({MatrixDiagnostic::Code::kDuplicateItemId, items[i], 0, "", 0});
    }
  }
}

}  // namespace

RatingMatrix::RatingMatrix(LabelSpace label_space, std::vector<std::string> items,
                           std::vector<std::vector<LabelIndex>> rows)
    : label_space_(std::move(label_space)), items_(std::move(items)) {
  if (rows.size() != items_.size()) {
    throw UsageError("item and row counts differ");
  }
  std::vector<MatrixDiagnostic> diagnostics;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows[i].size(); ++j) {
      if (rows[i][j] >= label_space_.size()) {
        diagnostics.push_back({MatrixDiagnostic::Code::kUnknownLabel, items_[i], j,
                               "#" + std::to_string(rows[i][j]), 0});
      }
    }
  }
  CheckShape(items_, rows, diagnostics);
  if (!diagnostics.empty()) throw MatrixValidationError(std::move(diagnostics));

  offsets_.reserve(rows.size() + 1);
  offsets_.push_back(0);
  row_counts_.reserve(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    labels_.insert(labels_.end(), rows[i].begin(), rows[i].end());
    offsets_.push_back(labels_.size());
    row_counts_.push_back(CountLabels(rows[i], label_space_.size()));
    max_row_length_ = std::max(max_row_length_, rows[i].size());
    index_.emplace(items_[i], i);
  }
  canonical_order_.resize(items_.size());
  std::iota(canonical_order_.begin(), canonical_order_.end(), std::size_t{0});
  std::sort(canonical_order_.begin(), canonical_order_.end(),
            [this](std::size_t a, std::size_t b) { return items_[a] < items_[b]; });
}

std::optional<std::size_t> RatingMatrix::FindItem(std::string_view id) const {
  auto it = index_.find(std::string(id));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::vector<RawRow> RatingMatrix::ToRaw() const {
  std::vector<RawRow> out;
  out.reserve(items_.size());
  for (std::size_t i = 0; i < items_.size(); ++i) {
    RawRow raw{items_[i], {}};
    for (LabelIndex l : row(i)) raw.labels.push_back(label_space_.label(l));
    out.push_back(std::move(raw));
  }
  return out;
}

bool RatingMatrix::operator==(const RatingMatrix& other) const {
  return label_space_ == other.label_space_ && items_ == other.items_ &&
         labels_ == other.labels_ && offsets_ == other.offsets_;
}

RatingMatrix ValidateMatrix(std::span<const RawRow> rows, const LabelSpace& label_space) {
  std::vector<MatrixDiagnostic> diagnostics;
  std::vector<std::string> items;
  std::vector<std::vector<LabelIndex>> indexed;
  items.reserve(rows.size());
  indexed.reserve(rows.size());
  for (const RawRow& raw : rows) {
    std::vector<LabelIndex> row;
    row.reserve(raw.labels.size());
    for (std::size_t j = 0; j < raw.labels.size(); ++j) {
      auto index = label_space.Find(raw.labels[j]);
      if (!index) {
        diagnostics.push_back(
            {MatrixDiagnostic::Code::kUnknownLabel, raw.item, j, raw.labels[j], 0});
        continue;
      }
      row.push_back(*index);
    }
    items.push_back(raw.item);
    indexed.push_back(std::move(row));
  }
  // Length is judged on the raw row so an unknown label does not also
  // produce a spurious short-row report.
  std::vector<std::vector<LabelIndex>> shape(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) shape[i].resize(rows[i].labels.size());
  CheckShape(items, shape, diagnostics);
  if (!diagnostics.empty()) throw MatrixValidationError(std::move(diagnostics));
  return RatingMatrix(label_space, std::move(items), std::move(indexed));
}

}  // namespace surveq
