#include "surveq/results.h"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "surveq/errors.h"

namespace surveq {
namespace {

std::string Fixed2(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

}  // namespace

void PowerCurve::Validate() const {
  if (k_values.size() != means.size() || k_values.empty()) {
    throw UsageError("power curve needs one mean per k");
  }
  for (std::size_t i = 0; i < k_values.size(); ++i) {
    if (k_values[i] != static_cast<int>(i)) throw UsageError("k values must be 0,1,2,...");
    if (!std::isfinite(means[i])) throw UsageError("power curve mean is not finite");
  }
}

std::string EquivalenceValue::ToString() const {
  switch (kind_) {
    case Kind::kLessThanZero:
      return "less than 0";
    case Kind::kMoreThanK:
      return "more than K";
    case Kind::kFraction:
      break;
  }
  return Fixed2(value_);
}

std::string EquivalenceValue::Interpretation() const {
  if (!is_fraction()) return ToString();
  const double lower = std::floor(value_);
  const double frac = value_ - lower;
  const auto n = static_cast<long>(lower);
  if (frac == 0.0) return Fixed2(value_) + " = a survey of " + std::to_string(n) + " raters";
  return Fixed2(value_) + " = " + Fixed2(frac) + " * " + std::to_string(n + 1) + " + " +
         Fixed2(1.0 - frac) + " * " + std::to_string(n);
}

double Percentile(std::vector<double> values, double q) {
  if (values.empty()) throw UsageError("percentile of an empty sample");
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  const double w = pos - static_cast<double>(lo);
  return values[lo] * (1.0 - w) + values[hi] * w;
}

}  // namespace surveq
