#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "surveq/equivalence.h"
#include "surveq/results.h"

namespace surveq {

inline constexpr const char* kResultSchemaVersion = "surveq.curve/1";

// Settings of one `curve` run, echoed into the result document. The thread
// count is left out on purpose: it must not change the output.
struct RunConfig {
  std::string ratings;
  std::string predictions;  // Empty when no classifier was given.
  std::string combiner = "abc";
  std::string scorer = "cross-entropy";
  std::size_t bootstrap = 500;
  std::size_t subset_cap = 200;
  std::uint64_t seed = 0;
  std::optional<std::string> positive_label;
  int ref_r = 1;
  std::vector<std::string> labels;
};

// Result document. `equivalence` is absent when no classifier was scored.
nlohmann::json ResultJson(const RunConfig& config, const PowerCurve& curve,
                          const std::optional<EquivalenceResult>& equivalence,
                          std::int64_t runtime_ms);

// `k,mean,ci_low,ci_high` rows, then a `classifier,<score>` trailer when
// the curve carries a classifier score.
void WritePlotCsv(std::ostream& out, const PowerCurve& curve);

}  // namespace surveq
