#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "texturalyze/types.hpp"

namespace texturalyze::ingest {

// Curve CSV: header exactly `time_s,force_N`, decimal point '.', no
// thousands separators. Row numbers in diagnostics are 1-based over data
// rows (the header is row 0).
CurveFile parse_curve_file(std::string_view text, std::string burger_id,
                           std::string sample_id,
                           const std::string& source_name = "<memory>");

std::string serialize_curve(const CurveFile& curve);

// Survey CSV: header
//   participant_id,burger_id,overall_liking,flavor_liking,texture_liking,
//   <likert attributes...>,cata
// with the attribute columns taken from config.likert_attributes and the
// `cata` cell holding `|`-joined vocabulary tokens (or empty).
// Records come back sorted by (participant_id, burger_id) so the result is
// independent of row order.
std::vector<SurveyRecord> parse_survey_file(std::string_view text,
                                            const StudyConfig& config,
                                            const std::string& source_name = "<memory>");

std::string serialize_survey(const std::vector<SurveyRecord>& records,
                             const StudyConfig& config);

std::vector<std::string> survey_header(const StudyConfig& config);

// Flat key = value study configuration, '#' comments. Unset keys keep the
// defaults from StudyConfig::defaults(); specimen_height_mm has no default.
StudyConfig parse_config(std::string_view text,
                         const std::string& source_name = "<memory>");

std::string serialize_config(const StudyConfig& config);

}  // namespace texturalyze::ingest
