#include "texturalyze/survey.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "texturalyze/common.hpp"

namespace texturalyze::survey {

namespace {

// Index of a question among the configured ones; fixed 7-point questions
// come first, then the 5-point attributes.
int question_slot(const std::string& question, const StudyConfig& config) {
  if (question == "overall_liking") return 0;
  if (question == "flavor_liking") return 1;
  if (question == "texture_liking") return 2;
  auto it = std::find(config.likert_attributes.begin(),
                      config.likert_attributes.end(),
                      normalize_attribute(question));
  if (it == config.likert_attributes.end())
    throw Error(ErrorCode::UnknownQuestion, "no question named '" + question + "'");
  return 3 + static_cast<int>(it - config.likert_attributes.begin());
}

double question_value(const SurveyRecord& rec, int slot) {
  switch (slot) {
    case 0: return rec.overall_liking;
    case 1: return rec.flavor_liking;
    case 2: return rec.texture_liking;
    default: return rec.attribute_ratings.at(static_cast<size_t>(slot - 3));
  }
}

}  // namespace

std::vector<std::string> burger_ids(std::span<const SurveyRecord> records) {
  std::set<std::string> ids;
  for (const auto& rec : records) ids.insert(rec.burger_id);
  return {ids.begin(), ids.end()};
}

ContingencyTable prune_table(ContingencyTable table) {
  size_t r = table.rows(), c = table.cols();
  std::vector<bool> keep_row(r, false), keep_col(c, false);
  for (size_t i = 0; i < r; ++i)
    for (size_t j = 0; j < c; ++j)
      if (table.at(i, j) > 0) keep_row[i] = keep_col[j] = true;

  ContingencyTable out;
  for (size_t i = 0; i < r; ++i)
    (keep_row[i] ? out.row_labels : out.pruned_rows).push_back(table.row_labels[i]);
  for (size_t j = 0; j < c; ++j)
    (keep_col[j] ? out.col_labels : out.pruned_cols).push_back(table.col_labels[j]);
  if (out.row_labels.empty() || out.col_labels.empty())
    throw Error(ErrorCode::EmptyTable, "all selection counts are zero");

  out.counts.reserve(out.rows() * out.cols());
  out.total = 0;
  for (size_t i = 0; i < r; ++i) {
    if (!keep_row[i]) continue;
    for (size_t j = 0; j < c; ++j) {
      if (!keep_col[j]) continue;
      out.counts.push_back(table.at(i, j));
      out.total += table.at(i, j);
    }
  }
  return out;
}

ContingencyTable build_contingency(std::span<const SurveyRecord> records,
                                   const StudyConfig& config) {
  if (records.empty())
    throw Error(ErrorCode::EmptyTable, "no survey records");

  ContingencyTable table;
  table.row_labels = burger_ids(records);
  table.col_labels = config.cata_vocabulary;
  table.counts.assign(table.rows() * table.cols(), 0);

  std::map<std::string, size_t> row_of, col_of;
  for (size_t i = 0; i < table.rows(); ++i) row_of[table.row_labels[i]] = i;
  for (size_t j = 0; j < table.cols(); ++j) col_of[table.col_labels[j]] = j;

  for (const auto& rec : records) {
    size_t i = row_of.at(rec.burger_id);
    for (const auto& attr : rec.cata_selections) {
      auto it = col_of.find(attr);
      if (it == col_of.end())
        throw Error(ErrorCode::UnknownCataAttribute,
                    "'" + attr + "' not in the configured vocabulary");
      ++table.at(i, it->second);
    }
  }
  table.total = 0;
  for (long long v : table.counts) table.total += v;
  return prune_table(std::move(table));
}

LikertSummary likert_summary(std::span<const SurveyRecord> records,
                             const std::string& question,
                             const StudyConfig& config) {
  int slot = question_slot(question, config);
  std::map<std::string, std::vector<double>> by_burger;
  for (const auto& rec : records)
    by_burger[rec.burger_id].push_back(question_value(rec, slot));

  LikertSummary out;
  out.question = question;
  for (auto& [burger, values] : by_burger) {
    LikertSummaryRow row;
    row.burger_id = burger;
    row.count = static_cast<long>(values.size());
    row.mean = mean(values);
    row.sd = sample_sd(values);
    out.rows.push_back(std::move(row));
  }
  return out;
}

RatingsMatrix ratings_matrix(std::span<const SurveyRecord> records,
                             const std::string& question,
                             const StudyConfig& config) {
  int slot = question_slot(question, config);
  RatingsMatrix out;
  out.question = question;
  out.observations.reserve(records.size());
  for (const auto& rec : records)
    out.observations.push_back(
        {rec.participant_id, rec.burger_id, question_value(rec, slot)});
  return out;
}

RatingsMatrix zscore(const RatingsMatrix& matrix) {
  std::vector<double> values;
  values.reserve(matrix.observations.size());
  for (const auto& obs : matrix.observations) values.push_back(obs.value);
  double m = mean(values);
  double sd = sample_sd(values);
  if (!(sd > 0.0))
    throw Error(ErrorCode::ZeroVariance,
                "question '" + matrix.question + "' has constant ratings");

  RatingsMatrix out;
  out.question = matrix.question;
  out.transform = ZTransform{m, sd};
  out.observations = matrix.observations;
  for (auto& obs : out.observations) obs.value = out.transform->apply(obs.value);
  return out;
}

RatingsMatrix zscore_inverse(const RatingsMatrix& matrix) {
  if (!matrix.transform)
    throw Error(ErrorCode::ZeroVariance,
                "matrix carries no standardization to invert");
  RatingsMatrix out;
  out.question = matrix.question;
  out.observations = matrix.observations;
  for (auto& obs : out.observations)
    obs.value = matrix.transform->invert(obs.value);
  return out;
}

std::vector<double> cata_counts_by_burger(std::span<const SurveyRecord> records,
                                          const std::string& attribute,
                                          std::span<const std::string> burgers) {
  std::string attr = normalize_attribute(attribute);
  std::map<std::string, double> counts;
  for (const auto& b : burgers) counts[b] = 0.0;
  for (const auto& rec : records) {
    auto it = counts.find(rec.burger_id);
    if (it == counts.end()) continue;
    if (std::find(rec.cata_selections.begin(), rec.cata_selections.end(),
                  attr) != rec.cata_selections.end())
      it->second += 1.0;
  }
  std::vector<double> out;
  out.reserve(burgers.size());
  for (const auto& b : burgers) out.push_back(counts.at(b));
  return out;
}

}  // namespace texturalyze::survey
