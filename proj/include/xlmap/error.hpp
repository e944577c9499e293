#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace xlmap {

enum class ErrorCode {
  // numeric
  NonFinite,
  NoConvergence,
  NotOrthogonal,
  ZeroNormColumn,
  ConstantInput,
  ConstantScores,
  // shapes and contracts
  ShapeMismatch,
  DimMismatch,
  InvalidParameter,
  PivotMismatch,
  SizeExceedsCorpus,
  // data / format
  BadHeader,
  DimensionMismatch,
  NonFiniteValue,
  GapInSentenceIndex,
  LineCountMismatch,
  MalformedLine,
  EmptyCorpus,
  EmptyDictionary,
  EmptySentence,
  EmptyGold,
  AllTokensOOV,
  SentenceIndexOutOfRange,
  TooFewPairs,
  Io,
};

/// Broad grouping used by the CLI to choose an exit status.
enum class ErrorCategory { Usage, DataFormat, Numeric };

const char* error_name(ErrorCode code);
ErrorCategory error_category(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what);
  Error(ErrorCode code, std::size_t line, const std::string& what);

  ErrorCode code() const { return code_; }
  std::optional<std::size_t> line() const { return line_; }
  const char* name() const { return error_name(code_); }

 private:
  ErrorCode code_;
  std::optional<std::size_t> line_;
};

}  // namespace xlmap
