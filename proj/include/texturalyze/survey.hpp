#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "texturalyze/types.hpp"

namespace texturalyze::survey {

// Burgers x CATA attributes selection counts, zero rows/columns pruned.
struct ContingencyTable {
  std::vector<std::string> row_labels;  // burgers
  std::vector<std::string> col_labels;  // attributes
  std::vector<long long> counts;        // row-major
  long long total = 0;
  std::vector<std::string> pruned_rows;
  std::vector<std::string> pruned_cols;

  size_t rows() const { return row_labels.size(); }
  size_t cols() const { return col_labels.size(); }
  long long at(size_t i, size_t j) const { return counts[i * cols() + j]; }
  long long& at(size_t i, size_t j) { return counts[i * cols() + j]; }
};

ContingencyTable build_contingency(std::span<const SurveyRecord> records,
                                   const StudyConfig& config);

// Drops all-zero rows and columns; throws EmptyTable when nothing remains.
// Exposed so tables built directly (not from records) get the same pruning.
ContingencyTable prune_table(ContingencyTable table);

struct LikertSummaryRow {
  std::string burger_id;
  double mean = 0.0;
  double sd = 0.0;  // sample sd, 0 when count < 2
  long count = 0;
};

struct LikertSummary {
  std::string question;
  std::vector<LikertSummaryRow> rows;  // sorted by burger_id
};

// question is one of overall_liking / flavor_liking / texture_liking or a
// configured 5-point attribute name.
LikertSummary likert_summary(std::span<const SurveyRecord> records,
                             const std::string& question,
                             const StudyConfig& config);

struct RatingObservation {
  std::string participant_id;
  std::string burger_id;
  double value = 0.0;
};

struct RatingsMatrix {
  std::string question;
  std::vector<RatingObservation> observations;
  std::optional<ZTransform> transform;  // set on the z-scored variant
};

RatingsMatrix ratings_matrix(std::span<const SurveyRecord> records,
                             const std::string& question,
                             const StudyConfig& config);

// Standardizes against the pooled mean and sample sd across all
// observations; records the transform for the inverse mapping.
RatingsMatrix zscore(const RatingsMatrix& matrix);
RatingsMatrix zscore_inverse(const RatingsMatrix& matrix);

// Per-burger aggregate used by the correlation screen: selection counts for
// a CATA attribute, in sorted burger order.
std::vector<double> cata_counts_by_burger(std::span<const SurveyRecord> records,
                                          const std::string& attribute,
                                          std::span<const std::string> burgers);

std::vector<std::string> burger_ids(std::span<const SurveyRecord> records);

}  // namespace texturalyze::survey
