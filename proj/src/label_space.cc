#include "surveq/label_space.h"

#include <algorithm>
#include <unordered_set>

#include "surveq/errors.h"

namespace surveq {

LabelSpace::LabelSpace(std::vector<std::string> labels) : labels_(std::move(labels)) {
  if (labels_.size() < 2) {
    throw UsageError("a label space needs at least 2 labels");
  }
  if (labels_.size() > 0xFFFF) {
    throw UsageError("too many labels");
  }
  std::unordered_set<std::string_view> seen;
  for (const auto& l : labels_) {
    if (!seen.insert(l).second) throw UsageError("duplicate label '" + l + "'");
  }
}

std::optional<LabelIndex> LabelSpace::Find(std::string_view symbol) const {
  auto it = std::find(labels_.begin(), labels_.end(), symbol);
  if (it == labels_.end()) return std::nullopt;
  return static_cast<LabelIndex>(it - labels_.begin());
}

LabelIndex LabelSpace::IndexOf(std::string_view symbol) const {
  auto index = Find(symbol);
  if (!index) throw UsageError("unknown label '" + std::string(symbol) + "'");
  return *index;
}

LabelCounts CountLabels(std::span<const LabelIndex> labels, std::size_t num_labels) {
  LabelCounts counts(num_labels, 0);
  for (LabelIndex l : labels) ++counts.at(l);
  return counts;
}

}  // namespace surveq
