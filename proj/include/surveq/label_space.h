#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace surveq {

using LabelIndex = std::uint16_t;

// Per-label occurrence counts, indexed in LabelSpace order.
using LabelCounts = std::vector<int>;

// Ordered set of distinct label symbols. The declaration order fixes the
// index of every label in probability vectors and count vectors.
class LabelSpace {
 public:
  // Throws UsageError on fewer than two labels or duplicates.
  explicit LabelSpace(std::vector<std::string> labels);

  std::size_t size() const { return labels_.size(); }
  const std::string& label(LabelIndex index) const { return labels_.at(index); }
  const std::vector<std::string>& labels() const { return labels_; }

  std::optional<LabelIndex> Find(std::string_view symbol) const;
  // Throws UsageError for an unknown symbol.
  LabelIndex IndexOf(std::string_view symbol) const;

  bool operator==(const LabelSpace& other) const = default;

 private:
  std::vector<std::string> labels_;
};

LabelCounts CountLabels(std::span<const LabelIndex> labels, std::size_t num_labels);

}  // namespace surveq
