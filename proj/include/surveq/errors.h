#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace surveq {

// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// One problem found while validating a rating matrix.
struct MatrixDiagnostic {
  enum class Code { kUnknownLabel, kRowTooShort, kDuplicateItemId };

  Code code;
  std::string item;
  std::size_t position = 0;  // kUnknownLabel: slot index of the bad label.
  std::string symbol;        // kUnknownLabel: the offending label text.
  std::size_t length = 0;    // kRowTooShort: the row length.

  std::string ToString() const;
};

// Raised by ValidateMatrix with every violation found, not only the first.
class MatrixValidationError : public Error {
 public:
  explicit MatrixValidationError(std::vector<MatrixDiagnostic> diagnostics);
  const std::vector<MatrixDiagnostic>& diagnostics() const { return diagnostics_; }

 private:
  std::vector<MatrixDiagnostic> diagnostics_;
};

// Bad prediction values: probabilities out of range or not normalized,
// unknown labels, missing items.
class PredictionError : public Error {
 public:
  using Error::Error;
};

class ScoreError : public Error {
 public:
  enum class Code {
    kEmptyInput,
    kZeroProbabilityLabel,
    kKindMismatch,
    kInsufficientRaters,
    kNoDefinedScore,
    kNonUniformNoiseModel,
  };
  ScoreError(Code code, const std::string& message) : Error(message), code_(code) {}
  Code code() const { return code_; }

 private:
  Code code_;
};

class CombinerError : public Error {
 public:
  enum class Code { kTooFewEligibleItems, kZeroDenominator, kUnsupportedLabelSpace };
  CombinerError(Code code, const std::string& message) : Error(message), code_(code) {}
  Code code() const { return code_; }

 private:
  Code code_;
};

// Malformed input files.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& message);
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

// Invalid configuration or command line usage.
class UsageError : public Error {
 public:
  using Error::Error;
};

}  // namespace surveq
