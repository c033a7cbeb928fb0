#include "surveq/report.h"

#include <iomanip>
#include <ostream>

#include "surveq/errors.h"

namespace surveq {
namespace {

nlohmann::json OptionalNumber(const std::optional<double>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

const char* KindName(EquivalenceValue::Kind kind) {
  switch (kind) {
    case EquivalenceValue::Kind::kFraction:
      return "fraction";
    case EquivalenceValue::Kind::kLessThanZero:
      return "less_than_zero";
    case EquivalenceValue::Kind::kMoreThanK:
      return "more_than_k";
  }
  return "";
}

}  // namespace

nlohmann::json ResultJson(const RunConfig& config, const PowerCurve& curve,
                          const std::optional<EquivalenceResult>& equivalence,
                          std::int64_t runtime_ms) {
  using nlohmann::json;
  json doc;
  doc["schema"] = kResultSchemaVersion;
  doc["config"] = {
      {"ratings", config.ratings},
      {"predictions", config.predictions.empty() ? json(nullptr) : json(config.predictions)},
      {"combiner", config.combiner},
      {"scorer", config.scorer},
      {"bootstrap", config.bootstrap},
      {"subset_cap", config.subset_cap},
      {"seed", config.seed},
      {"positive_label", config.positive_label ? json(*config.positive_label) : json(nullptr)},
      {"ref_r", config.ref_r},
      {"labels", config.labels},
  };
  doc["k_values"] = curve.k_values;
  doc["means"] = curve.means;
  doc["ci_low"] = curve.ci_low ? json(*curve.ci_low) : json(nullptr);
  doc["ci_high"] = curve.ci_high ? json(*curve.ci_high) : json(nullptr);
  doc["coverage"] = curve.coverage;
  doc["classifier_score"] = OptionalNumber(curve.classifier_score);

  json classifier_ci = nullptr;
  json seq = nullptr;
  if (equivalence) {
    const auto& e = *equivalence;
    if (!e.bootstrap_classifier_scores.empty()) {
      classifier_ci = {Percentile(e.bootstrap_classifier_scores, 0.025),
                       Percentile(e.bootstrap_classifier_scores, 0.975)};
    }
    seq = {
        {"point", e.value.is_fraction() ? json(e.value.value()) : json(nullptr)},
        {"point_kind", KindName(e.value.kind())},
        {"text", e.value.ToString()},
        {"interpretation", e.value.Interpretation()},
        {"bootstrap_mean", OptionalNumber(e.bootstrap_mean)},
        {"ci", e.ci_low ? json{*e.ci_low, *e.ci_high} : json(nullptr)},
        {"sentinel_counts",
         {{"less_than_zero", e.less_than_zero_count}, {"more_than_k", e.more_than_k_count}}},
    };
  }
  doc["classifier_ci"] = classifier_ci;
  doc["survey_equivalence"] = seq;
  doc["runtime_ms"] = runtime_ms;
  return doc;
}

void WritePlotCsv(std::ostream& out, const PowerCurve& curve) {
  out << std::setprecision(17);
  out << "k,mean,ci_low,ci_high\n";
  for (std::size_t k = 0; k < curve.k_values.size(); ++k) {
    out << curve.k_values[k] << ',' << curve.means[k] << ',';
    if (curve.ci_low) out << (*curve.ci_low)[k];
    out << ',';
    if (curve.ci_high) out << (*curve.ci_high)[k];
    out << '\n';
  }
  if (curve.classifier_score) out << "classifier," << *curve.classifier_score << '\n';
}

}  // namespace surveq
