#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "surveq/label_space.h"

namespace surveq {

// An unvalidated row: item id plus its labels as text.
struct RawRow {
  std::string item;
  std::vector<std::string> labels;
};

// Items by anonymous rater slots. Rows are ragged: slot j of a row exists
// only when the row has more than j labels. Immutable once built.
class RatingMatrix {
 public:
  // Builds from already-indexed rows. Applies the same checks as
  // ValidateMatrix and throws MatrixValidationError on violations.
  RatingMatrix(LabelSpace label_space, std::vector<std::string> items,
               std::vector<std::vector<LabelIndex>> rows);

  const LabelSpace& label_space() const { return label_space_; }
  std::size_t num_labels() const { return label_space_.size(); }
  std::size_t num_items() const { return items_.size(); }
  // Longest row; the number of rater slots K.
  std::size_t max_row_length() const { return max_row_length_; }

  const std::string& item(std::size_t row) const { return items_.at(row); }
  const std::vector<std::string>& items() const { return items_; }
  std::span<const LabelIndex> row(std::size_t i) const {
    return {labels_.data() + offsets_[i], offsets_[i + 1] - offsets_[i]};
  }
  std::size_t row_length(std::size_t i) const { return offsets_[i + 1] - offsets_[i]; }
  const LabelCounts& row_counts(std::size_t i) const { return row_counts_[i]; }

  std::optional<std::size_t> FindItem(std::string_view id) const;

  // Row indices sorted by item id. Computations iterate rows in this order so
  // results do not depend on the order rows were supplied in.
  std::span<const std::size_t> canonical_order() const { return canonical_order_; }

  std::vector<RawRow> ToRaw() const;

  bool operator==(const RatingMatrix& other) const;

 private:
  LabelSpace label_space_;
  std::vector<std::string> items_;
  std::vector<LabelIndex> labels_;
  std::vector<std::size_t> offsets_;
  std::vector<LabelCounts> row_counts_;
  std::vector<std::size_t> canonical_order_;
  std::unordered_map<std::string, std::size_t> index_;
  std::size_t max_row_length_ = 0;
};

// Validates raw rows against a label space. On failure throws
// MatrixValidationError listing every unknown label, short row and
// duplicate id.
RatingMatrix ValidateMatrix(std::span<const RawRow> rows, const LabelSpace& label_space);

}  // namespace surveq
