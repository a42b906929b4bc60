#include "texturalyze/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "texturalyze/common.hpp"
#include "texturalyze/csvio.hpp"

namespace texturalyze {

double CompressionProtocol::downstroke_duration_s() const {
  return std::abs(strain_amplitude / strain_rate);
}

double CompressionProtocol::cycle_duration_s() const {
  return 2.0 * downstroke_duration_s();
}

double CompressionProtocol::crosshead_speed_mm_s() const {
  if (!specimen_height_mm)
    throw Error(ErrorCode::MissingConfigKey, "specimen_height_mm is required");
  return std::abs(strain_rate) * *specimen_height_mm;
}

StudyConfig StudyConfig::defaults() {
  StudyConfig cfg;
  cfg.cata_vocabulary = {
      "chewy",   "sticky",         "firm",   "holds together",
      "fatty",   "tough",          "dry",    "crumbly/grainy",
      "brittle", "springy",        "gummy",  "mushy",
      "crispy/crunchy"};
  cfg.likert_attributes = {"softness", "hardness", "fattiness", "moistness",
                           "fibrousness"};
  return cfg;
}

}  // namespace texturalyze

namespace texturalyze::ingest {

namespace {

constexpr size_t kMinCurveRows = 16;

double require_double(const std::string& field, const std::string& source,
                      long row, const std::string& column) {
  double v;
  if (!csvio::parse_double(field, v) || !std::isfinite(v))
    throw Error(ErrorCode::NonNumericCell,
                "expected a finite number, got '" + field + "'", source, row,
                column);
  return v;
}

int require_likert(const std::string& field, int lo, int hi,
                   const std::string& source, long row,
                   const std::string& column) {
  long v;
  if (!csvio::parse_int(field, v))
    throw Error(ErrorCode::NonNumericCell,
                "expected an integer rating, got '" + field + "'", source, row,
                column);
  if (v < lo || v > hi)
    throw Error(ErrorCode::OutOfRangeLikert,
                column + " = " + std::to_string(v) + " outside [" +
                    std::to_string(lo) + ", " + std::to_string(hi) + "]",
                source, row, column);
  return static_cast<int>(v);
}

}  // namespace

CurveFile parse_curve_file(std::string_view text, std::string burger_id,
                           std::string sample_id,
                           const std::string& source_name) {
  auto lines = csvio::split_lines(text);
  if (lines.empty())
    throw Error(ErrorCode::MalformedHeader, "empty file", source_name);
  if (lines.front() != "time_s,force_N")
    throw Error(ErrorCode::MalformedHeader,
                "expected header 'time_s,force_N', got '" + lines.front() + "'",
                source_name, 0);

  CurveFile curve;
  curve.burger_id = std::move(burger_id);
  curve.sample_id = std::move(sample_id);
  curve.rows.reserve(lines.size() - 1);

  for (size_t i = 1; i < lines.size(); ++i) {
    long row = static_cast<long>(i);  // 1-based over data rows
    if (lines[i].empty()) continue;
    auto fields = csvio::split_fields(lines[i]);
    if (fields.size() != 2)
      throw Error(ErrorCode::NonNumericCell,
                  "expected 2 cells, got " + std::to_string(fields.size()),
                  source_name, row);
    CurvePoint pt;
    pt.time_s = require_double(fields[0], source_name, row, "time_s");
    pt.force_n = require_double(fields[1], source_name, row, "force_N");
    if (!curve.rows.empty() && pt.time_s <= curve.rows.back().time_s)
      throw Error(ErrorCode::NonMonotonicTime,
                  "time must be strictly increasing", source_name, row,
                  "time_s");
    curve.rows.push_back(pt);
  }

  if (curve.rows.size() < kMinCurveRows)
    throw Error(ErrorCode::TooFewRows,
                "need at least " + std::to_string(kMinCurveRows) +
                    " rows, got " + std::to_string(curve.rows.size()),
                source_name);
  return curve;
}

std::string serialize_curve(const CurveFile& curve) {
  std::string out = "time_s,force_N\n";
  for (const auto& pt : curve.rows) {
    out += format_double(pt.time_s);
    out.push_back(',');
    out += format_double(pt.force_n);
    out.push_back('\n');
  }
  return out;
}

std::vector<std::string> survey_header(const StudyConfig& config) {
  std::vector<std::string> header = {"participant_id", "burger_id",
                                     "overall_liking", "flavor_liking",
                                     "texture_liking"};
  header.insert(header.end(), config.likert_attributes.begin(),
                config.likert_attributes.end());
  header.push_back("cata");
  return header;
}

std::vector<SurveyRecord> parse_survey_file(std::string_view text,
                                            const StudyConfig& config,
                                            const std::string& source_name) {
  auto lines = csvio::split_lines(text);
  if (lines.empty())
    throw Error(ErrorCode::MalformedHeader, "empty file", source_name);

  auto expected = survey_header(config);
  auto got = csvio::split_fields(lines.front());
  for (auto& cell : got) cell = normalize_attribute(cell);
  {
    auto want = expected;
    for (auto& cell : want) cell = normalize_attribute(cell);
    if (got != want) {
      // Report the first expected column that is absent, else the mismatch.
      for (const auto& col : want)
        if (std::find(got.begin(), got.end(), col) == got.end())
          throw Error(ErrorCode::MissingColumn, "column '" + col + "' missing",
                      source_name, 0, col);
      throw Error(ErrorCode::MissingColumn,
                  "header columns out of order or extra columns present",
                  source_name, 0);
    }
  }

  std::set<std::string> vocab(config.cata_vocabulary.begin(),
                              config.cata_vocabulary.end());
  size_t n_attr = config.likert_attributes.size();
  std::vector<SurveyRecord> records;
  std::set<std::pair<std::string, std::string>> seen;

  for (size_t i = 1; i < lines.size(); ++i) {
    long row = static_cast<long>(i);
    if (lines[i].empty()) continue;
    auto fields = csvio::split_fields(lines[i]);
    if (fields.size() != expected.size())
      throw Error(ErrorCode::MissingColumn,
                  "expected " + std::to_string(expected.size()) +
                      " cells, got " + std::to_string(fields.size()),
                  source_name, row);

    SurveyRecord rec;
    rec.participant_id = fields[0];
    rec.burger_id = fields[1];
    if (rec.participant_id.empty() || rec.burger_id.empty())
      throw Error(ErrorCode::NonNumericCell, "empty identifier", source_name,
                  row, fields[0].empty() ? "participant_id" : "burger_id");
    if (!seen.emplace(rec.participant_id, rec.burger_id).second)
      throw Error(ErrorCode::DuplicatePair,
                  "(" + rec.participant_id + ", " + rec.burger_id +
                      ") appears more than once",
                  source_name, row);

    rec.overall_liking =
        require_likert(fields[2], 1, 7, source_name, row, "overall_liking");
    rec.flavor_liking =
        require_likert(fields[3], 1, 7, source_name, row, "flavor_liking");
    rec.texture_liking =
        require_likert(fields[4], 1, 7, source_name, row, "texture_liking");
    rec.attribute_ratings.reserve(n_attr);
    for (size_t a = 0; a < n_attr; ++a)
      rec.attribute_ratings.push_back(require_likert(
          fields[5 + a], 1, 5, source_name, row, config.likert_attributes[a]));

    const std::string& cata_cell = fields[5 + n_attr];
    if (!cata_cell.empty()) {
      std::set<std::string> selections;
      size_t start = 0;
      while (start <= cata_cell.size()) {
        size_t pos = cata_cell.find('|', start);
        std::string token = (pos == std::string::npos)
                                ? cata_cell.substr(start)
                                : cata_cell.substr(start, pos - start);
        std::string norm = normalize_attribute(token);
        if (!norm.empty()) {
          if (!vocab.count(norm))
            throw Error(ErrorCode::UnknownCataAttribute,
                        "'" + norm + "' not in the configured vocabulary",
                        source_name, row, "cata");
          selections.insert(norm);
        }
        if (pos == std::string::npos) break;
        start = pos + 1;
      }
      rec.cata_selections.assign(selections.begin(), selections.end());
    }
    records.push_back(std::move(rec));
  }

  std::sort(records.begin(), records.end(),
            [](const SurveyRecord& a, const SurveyRecord& b) {
              return std::tie(a.participant_id, a.burger_id) <
                     std::tie(b.participant_id, b.burger_id);
            });
  return records;
}

std::string serialize_survey(const std::vector<SurveyRecord>& records,
                             const StudyConfig& config) {
  std::string out = csvio::join(survey_header(config)) + "\n";
  for (const auto& rec : records) {
    std::vector<std::string> fields = {rec.participant_id, rec.burger_id,
                                       std::to_string(rec.overall_liking),
                                       std::to_string(rec.flavor_liking),
                                       std::to_string(rec.texture_liking)};
    for (int v : rec.attribute_ratings) fields.push_back(std::to_string(v));
    std::string cata;
    for (size_t i = 0; i < rec.cata_selections.size(); ++i) {
      if (i) cata.push_back('|');
      cata += rec.cata_selections[i];
    }
    fields.push_back(cata);
    out += csvio::join(fields) + "\n";
  }
  return out;
}

namespace {

std::vector<std::string> parse_name_list(const std::string& value,
                                         const std::string& key,
                                         const std::string& source) {
  std::vector<std::string> out;
  std::set<std::string> seen;
  for (const auto& raw : csvio::split_fields(value)) {
    std::string norm = normalize_attribute(raw);
    if (norm.empty())
      throw Error(ErrorCode::ConfigInvalid, key + " contains an empty name",
                  source);
    if (!seen.insert(norm).second)
      throw Error(ErrorCode::ConfigInvalid,
                  key + " contains duplicate '" + norm + "'", source);
    out.push_back(norm);
  }
  if (out.empty())
    throw Error(ErrorCode::ConfigInvalid, key + " must be non-empty", source);
  return out;
}

double config_double(const std::string& value, const std::string& key,
                     const std::string& source) {
  double v;
  if (!csvio::parse_double(value, v) || !std::isfinite(v))
    throw Error(ErrorCode::ConfigInvalid,
                key + " must be a finite number, got '" + value + "'", source);
  return v;
}

}  // namespace

StudyConfig parse_config(std::string_view text,
                         const std::string& source_name) {
  StudyConfig cfg = StudyConfig::defaults();
  for (const auto& [key, value] : csvio::parse_flat_kv(text, source_name)) {
    if (key == "cata_vocabulary") {
      cfg.cata_vocabulary = parse_name_list(value, key, source_name);
    } else if (key == "likert_attributes") {
      cfg.likert_attributes = parse_name_list(value, key, source_name);
    } else if (key == "strain_amplitude") {
      cfg.protocol.strain_amplitude = config_double(value, key, source_name);
    } else if (key == "strain_rate") {
      cfg.protocol.strain_rate = config_double(value, key, source_name);
    } else if (key == "n_cycles") {
      long v;
      if (!csvio::parse_int(value, v))
        throw Error(ErrorCode::ConfigInvalid, "n_cycles must be an integer",
                    source_name);
      cfg.protocol.n_cycles = static_cast<int>(v);
    } else if (key == "specimen_height_mm") {
      cfg.protocol.specimen_height_mm = config_double(value, key, source_name);
    } else if (key == "specimen_diameter_mm") {
      cfg.protocol.specimen_diameter_mm = config_double(value, key, source_name);
    } else if (key == "significance_alpha") {
      cfg.significance_alpha = config_double(value, key, source_name);
    } else if (key == "ci_level") {
      cfg.ci_level = config_double(value, key, source_name);
    } else {
      throw Error(ErrorCode::ConfigInvalid, "unknown key '" + key + "'",
                  source_name);
    }
  }

  if (!(cfg.significance_alpha > 0.0 && cfg.significance_alpha < 1.0))
    throw Error(ErrorCode::ConfigInvalid, "significance_alpha must be in (0, 1)",
                source_name);
  if (!(cfg.ci_level > 0.0 && cfg.ci_level < 1.0))
    throw Error(ErrorCode::ConfigInvalid, "ci_level must be in (0, 1)",
                source_name);
  if (!(cfg.protocol.strain_amplitude > -1.0 &&
        cfg.protocol.strain_amplitude < 0.0))
    throw Error(ErrorCode::ConfigInvalid, "strain_amplitude must be in (-1, 0)",
                source_name);
  if (!(cfg.protocol.strain_rate < 0.0))
    throw Error(ErrorCode::ConfigInvalid, "strain_rate must be negative",
                source_name);
  if (cfg.protocol.n_cycles != 2)
    throw Error(ErrorCode::ConfigInvalid, "n_cycles must be 2 for TPA",
                source_name);
  if (cfg.protocol.specimen_height_mm && *cfg.protocol.specimen_height_mm <= 0.0)
    throw Error(ErrorCode::ConfigInvalid, "specimen_height_mm must be positive",
                source_name);
  if (cfg.protocol.specimen_diameter_mm <= 0.0)
    throw Error(ErrorCode::ConfigInvalid, "specimen_diameter_mm must be positive",
                source_name);
  return cfg;
}

std::string serialize_config(const StudyConfig& cfg) {
  std::string out;
  out += "cata_vocabulary = " + csvio::join(cfg.cata_vocabulary) + "\n";
  out += "likert_attributes = " + csvio::join(cfg.likert_attributes) + "\n";
  out += "strain_amplitude = " + format_double(cfg.protocol.strain_amplitude) + "\n";
  out += "strain_rate = " + format_double(cfg.protocol.strain_rate) + "\n";
  out += "n_cycles = " + std::to_string(cfg.protocol.n_cycles) + "\n";
  if (cfg.protocol.specimen_height_mm)
    out += "specimen_height_mm = " +
           format_double(*cfg.protocol.specimen_height_mm) + "\n";
  out += "specimen_diameter_mm = " +
         format_double(cfg.protocol.specimen_diameter_mm) + "\n";
  out += "significance_alpha = " + format_double(cfg.significance_alpha) + "\n";
  out += "ci_level = " + format_double(cfg.ci_level) + "\n";
  return out;
}

}  // namespace texturalyze::ingest
