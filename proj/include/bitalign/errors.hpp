#ifndef BITALIGN_ERRORS_HPP
#define BITALIGN_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace bitalign {

enum class ErrorCode {
  // io / usage / configuration
  FileNotReadable,
  FileNotWritable,
  ConfigInvalid,
  UsageError,
  MissingApiKey,
  PlaceholderMissing,
  PromptBudgetExceeded,
  // input validation and shape
  NotUtf8,
  BlankLine,
  EmptyDocument,
  SyntaxError,
  BothSidesEmpty,
  LadderInvalid,
  ShapeMismatch,
  MissingPair,
  EmptyInput,
  IndexOutOfRange,
  DuplicateCoverage,
  // pipeline
  TransportExhausted,
  ReplayMiss,
  MockFixtureMissing,
  JsonNotFound,
  SchemaInvalid,
  EmptyResult,
  Internal,
};

const char* error_name(ErrorCode code);

/// Exit code contract: 0 success, 1 pipeline error, 2 io/usage, 3 validation/shape.
int exit_code_for(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}
  Error(ErrorCode code, const std::string& message, int line_no)
      : std::runtime_error(message), code_(code), line_no_(line_no) {}

  ErrorCode code() const { return code_; }
  /// 1-based input line, or 0 when not tied to a line.
  int line_no() const { return line_no_; }
  /// 0-based chunk that raised the error, or -1 outside chunked alignment.
  int chunk_index() const { return chunk_index_; }
  void set_chunk_index(int idx) { chunk_index_ = idx; }

 private:
  ErrorCode code_;
  int line_no_ = 0;
  int chunk_index_ = -1;
};

}  // namespace bitalign

#endif
