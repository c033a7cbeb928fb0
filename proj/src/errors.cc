#include "surveq/errors.h"

namespace surveq {
namespace {

std::string JoinDiagnostics(const std::vector<MatrixDiagnostic>& diagnostics) {
  std::string out = "invalid rating matrix:";
  for (const auto& d : diagnostics) out += "\n  " + d.ToString();
  return out;
}

}  // namespace

std::string MatrixDiagnostic::ToString() const {
  switch (code) {
    case Code::kUnknownLabel:
      return "UnknownLabel(" + item + ", " + std::to_string(position) + ", " + symbol + ")";
    case Code::kRowTooShort:
      return "RowTooShort(" + item + ", " + std::to_string(length) + ")";
    case Code::kDuplicateItemId:
      return "DuplicateItemId(" + item + ")";
  }
  return "?";
}

MatrixValidationError::MatrixValidationError(std::vector<MatrixDiagnostic> diagnostics)
    : Error(JoinDiagnostics(diagnostics)), diagnostics_(std::move(diagnostics)) {}

ParseError::ParseError(std::size_t line, std::size_t column, const std::string& message)
    : Error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " +
            message),
      line_(line),
      column_(column) {}

}  // namespace surveq
