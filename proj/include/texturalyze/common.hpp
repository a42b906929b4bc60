#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace texturalyze {

enum class ErrorCode {
  // ingest / file-level
  MalformedHeader,
  NonMonotonicTime,
  NonNumericCell,
  TooFewRows,
  DuplicatePair,
  OutOfRangeLikert,
  UnknownCataAttribute,
  MissingColumn,
  NoInput,
  IoError,
  // configuration
  ConfigInvalid,
  MissingConfigKey,
  // curve analysis
  CycleCountMismatch,
  DurationMismatch,
  DegenerateCycle,
  NonPositivePeak,
  InsufficientSamples,
  NoTimeOverlap,
  // aggregation
  EmptyTable,
  UnknownQuestion,
  ZeroVariance,
  // correspondence analysis
  DegenerateTable,
  SupplementaryMismatch,
  // statistical fitting
  LengthMismatch,
  TooFewPoints,
  NonConvergence,
  CollinearPredictors,
  SingularDesign,
  UnfittedModel,
};

// Drives the CLI exit-code contract: 0 success, 1 analysis, 2 input, 3 config.
enum class ErrorCategory { Input, Config, Analysis };

ErrorCategory category_of(ErrorCode code);
const char* name_of(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message, std::string file = {},
        long row = -1, std::string column = {});

  ErrorCode code() const { return code_; }
  ErrorCategory category() const { return category_of(code_); }
  const std::string& message() const { return message_; }  // without context
  const std::string& file() const { return file_; }
  long row() const { return row_; }  // 1-based data row, -1 when not applicable
  const std::string& column() const { return column_; }

 private:
  ErrorCode code_;
  std::string message_;
  std::string file_;
  long row_;
  std::string column_;
};

// Fixed reduction scheme for every order-sensitive accumulation, so that a
// parallel map over samples cannot change results.
double pairwise_sum(std::span<const double> values);

double mean(std::span<const double> values);
double sample_variance(std::span<const double> values);  // n-1 denominator
double sample_sd(std::span<const double> values);

// Shortest representation that round-trips through a double.
std::string format_double(double v);

// Lowercase, trim, collapse internal whitespace. Applied to attribute names
// before any vocabulary matching.
std::string normalize_attribute(std::string_view name);

}  // namespace texturalyze
