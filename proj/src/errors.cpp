#include "bitalign/errors.hpp"

namespace bitalign {

const char* error_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::FileNotReadable: return "FileNotReadable";
    case ErrorCode::FileNotWritable: return "FileNotWritable";
    case ErrorCode::ConfigInvalid: return "ConfigInvalid";
    case ErrorCode::UsageError: return "UsageError";
    case ErrorCode::MissingApiKey: return "MissingApiKey";
    case ErrorCode::PlaceholderMissing: return "PlaceholderMissing";
    case ErrorCode::PromptBudgetExceeded: return "PromptBudgetExceeded";
    case ErrorCode::NotUtf8: return "NotUtf8";
    case ErrorCode::BlankLine: return "BlankLine";
    case ErrorCode::EmptyDocument: return "EmptyDocument";
    case ErrorCode::SyntaxError: return "SyntaxError";
    case ErrorCode::BothSidesEmpty: return "BothSidesEmpty";
    case ErrorCode::LadderInvalid: return "LadderInvalid";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::MissingPair: return "MissingPair";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::DuplicateCoverage: return "DuplicateCoverage";
    case ErrorCode::TransportExhausted: return "TransportExhausted";
    case ErrorCode::ReplayMiss: return "ReplayMiss";
    case ErrorCode::MockFixtureMissing: return "MockFixtureMissing";
    case ErrorCode::JsonNotFound: return "JsonNotFound";
    case ErrorCode::SchemaInvalid: return "SchemaInvalid";
    case ErrorCode::EmptyResult: return "EmptyResult";
    case ErrorCode::Internal: return "Internal";
  }
  return "Unknown";
}

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::FileNotReadable:
    case ErrorCode::FileNotWritable:
    case ErrorCode::ConfigInvalid:
    case ErrorCode::UsageError:
    case ErrorCode::MissingApiKey:
    case ErrorCode::PlaceholderMissing:
    case ErrorCode::PromptBudgetExceeded:
      return 2;
    case ErrorCode::NotUtf8:
    case ErrorCode::BlankLine:
    case ErrorCode::EmptyDocument:
    case ErrorCode::SyntaxError:
    case ErrorCode::BothSidesEmpty:
    case ErrorCode::LadderInvalid:
    case ErrorCode::ShapeMismatch:
    case ErrorCode::MissingPair:
    case ErrorCode::EmptyInput:
    case ErrorCode::IndexOutOfRange:
    case ErrorCode::DuplicateCoverage:
      return 3;
    default:
      return 1;
  }
}

}  // namespace bitalign
