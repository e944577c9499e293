#include "xlmap/error.hpp"

namespace xlmap {

const char* error_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::NotOrthogonal: return "NotOrthogonal";
    case ErrorCode::ZeroNormColumn: return "ZeroNormColumn";
    case ErrorCode::ConstantInput: return "ConstantInput";
    case ErrorCode::ConstantScores: return "ConstantScores";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::DimMismatch: return "DimMismatch";
    case ErrorCode::InvalidParameter: return "InvalidParameter";
    case ErrorCode::PivotMismatch: return "PivotMismatch";
    case ErrorCode::SizeExceedsCorpus: return "SizeExceedsCorpus";
    case ErrorCode::BadHeader: return "BadHeader";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NonFiniteValue: return "NonFiniteValue";
    case ErrorCode::GapInSentenceIndex: return "GapInSentenceIndex";
    case ErrorCode::LineCountMismatch: return "LineCountMismatch";
    case ErrorCode::MalformedLine: return "MalformedLine";
    case ErrorCode::EmptyCorpus: return "EmptyCorpus";
    case ErrorCode::EmptyDictionary: return "EmptyDictionary";
    case ErrorCode::EmptySentence: return "EmptySentence";
    case ErrorCode::EmptyGold: return "EmptyGold";
    case ErrorCode::AllTokensOOV: return "AllTokensOOV";
    case ErrorCode::SentenceIndexOutOfRange: return "SentenceIndexOutOfRange";
    case ErrorCode::TooFewPairs: return "TooFewPairs";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

ErrorCategory error_category(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonFinite:
    case ErrorCode::NoConvergence:
    case ErrorCode::NotOrthogonal:
    case ErrorCode::ZeroNormColumn:
    case ErrorCode::ConstantInput:
    case ErrorCode::ConstantScores:
      return ErrorCategory::Numeric;
    case ErrorCode::InvalidParameter:
    case ErrorCode::SizeExceedsCorpus:
    case ErrorCode::Io:
      return ErrorCategory::Usage;
    default:
      return ErrorCategory::DataFormat;
  }
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(error_name(code)) + ": " + what), code_(code) {}

Error::Error(ErrorCode code, std::size_t line, const std::string& what)
    : std::runtime_error(std::string(error_name(code)) + " (line " + std::to_string(line) +
                         "): " + what),
      code_(code),
      line_(line) {}

}  // namespace xlmap
