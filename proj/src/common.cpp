#include "texturalyze/common.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>

namespace texturalyze {

ErrorCategory category_of(ErrorCode code) {
  switch (code) {
    case ErrorCode::MalformedHeader:
    case ErrorCode::NonMonotonicTime:
    case ErrorCode::NonNumericCell:
    case ErrorCode::TooFewRows:
    case ErrorCode::DuplicatePair:
    case ErrorCode::OutOfRangeLikert:
    case ErrorCode::UnknownCataAttribute:
    case ErrorCode::MissingColumn:
    case ErrorCode::NoInput:
    case ErrorCode::IoError:
      return ErrorCategory::Input;
    case ErrorCode::ConfigInvalid:
    case ErrorCode::MissingConfigKey:
      return ErrorCategory::Config;
    default:
      return ErrorCategory::Analysis;
  }
}

const char* name_of(ErrorCode code) {
  switch (code) {
    case ErrorCode::MalformedHeader: return "MalformedHeader";
    case ErrorCode::NonMonotonicTime: return "NonMonotonicTime";
    case ErrorCode::NonNumericCell: return "NonNumericCell";
    case ErrorCode::TooFewRows: return "TooFewRows";
    case ErrorCode::DuplicatePair: return "DuplicatePair";
    case ErrorCode::OutOfRangeLikert: return "OutOfRangeLikert";
    case ErrorCode::UnknownCataAttribute: return "UnknownCataAttribute";
    case ErrorCode::MissingColumn: return "MissingColumn";
    case ErrorCode::NoInput: return "NoInput";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::ConfigInvalid: return "ConfigInvalid";
    case ErrorCode::MissingConfigKey: return "MissingConfigKey";
    case ErrorCode::CycleCountMismatch: return "CycleCountMismatch";
    case ErrorCode::DurationMismatch: return "DurationMismatch";
    case ErrorCode::DegenerateCycle: return "DegenerateCycle";
    case ErrorCode::NonPositivePeak: return "NonPositivePeak";
    case ErrorCode::InsufficientSamples: return "InsufficientSamples";
    case ErrorCode::NoTimeOverlap: return "NoTimeOverlap";
    case ErrorCode::EmptyTable: return "EmptyTable";
    case ErrorCode::UnknownQuestion: return "UnknownQuestion";
    case ErrorCode::ZeroVariance: return "ZeroVariance";
    case ErrorCode::DegenerateTable: return "DegenerateTable";
    case ErrorCode::SupplementaryMismatch: return "SupplementaryMismatch";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::TooFewPoints: return "TooFewPoints";
    case ErrorCode::NonConvergence: return "NonConvergence";
    case ErrorCode::CollinearPredictors: return "CollinearPredictors";
    case ErrorCode::SingularDesign: return "SingularDesign";
    case ErrorCode::UnfittedModel: return "UnfittedModel";
  }
  return "UnknownError";
}

namespace {
std::string compose_message(ErrorCode code, const std::string& message,
                            const std::string& file, long row,
                            const std::string& column) {
  std::string out = name_of(code);
  out += ": ";
  out += message;
  if (!file.empty()) out += " [file " + file;
  if (row >= 0) out += (file.empty() ? " [" : ", ") + ("row " + std::to_string(row));
  if (!column.empty())
    out += (file.empty() && row < 0 ? " [" : ", ") + ("column " + column);
  if (!file.empty() || row >= 0 || !column.empty()) out += "]";
  return out;
}
}  // namespace

Error::Error(ErrorCode code, const std::string& message, std::string file,
             long row, std::string column)
    : std::runtime_error(compose_message(code, message, file, row, column)),
      code_(code),
      message_(message),
      file_(std::move(file)),
      row_(row),
      column_(std::move(column)) {}

namespace {
double pairwise_sum_impl(const double* data, size_t n) {
  if (n <= 32) {
    double s = 0.0;
    for (size_t i = 0; i < n; ++i) s += data[i];
    return s;
  }
  size_t half = n / 2;
  return pairwise_sum_impl(data, half) + pairwise_sum_impl(data + half, n - half);
}
}  // namespace

double pairwise_sum(std::span<const double> values) {
  return pairwise_sum_impl(values.data(), values.size());
}

double mean(std::span<const double> values) {
  if (values.empty()) return 0.0;
  return pairwise_sum(values) / static_cast<double>(values.size());
}

double sample_variance(std::span<const double> values) {
  size_t n = values.size();
  if (n < 2) return 0.0;
  double m = mean(values);
  std::vector<double> sq(n);
  for (size_t i = 0; i < n; ++i) {
    double d = values[i] - m;
    sq[i] = d * d;
  }
  return pairwise_sum(sq) / static_cast<double>(n - 1);
}

double sample_sd(std::span<const double> values) {
  return std::sqrt(sample_variance(values));
}

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string normalize_attribute(std::string_view name) {
  std::string out;
  out.reserve(name.size());
  bool pending_space = false;
  for (char c : name) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      if (!out.empty()) pending_space = true;
      continue;
    }
    if (pending_space) {
      out.push_back(' ');
      pending_space = false;
    }
    out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  return out;
}

}  // namespace texturalyze
