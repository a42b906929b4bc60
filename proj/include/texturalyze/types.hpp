#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace texturalyze {

struct CurvePoint {
  double time_s;
  double force_n;
};

// One sample's force-time trace from a double-compression test.
struct CurveFile {
  std::string burger_id;
  std::string sample_id;
  std::vector<CurvePoint> rows;  // time strictly increasing, >= 16 rows
};

// One participant x one burger.
struct SurveyRecord {
  std::string participant_id;
  std::string burger_id;
  int overall_liking = 0;  // 1..7
  int flavor_liking = 0;   // 1..7
  int texture_liking = 0;  // 1..7
  // Parallel to StudyConfig::likert_attributes, each 1..5.
  std::vector<int> attribute_ratings;
  // Normalized attribute names, sorted, unique, subset of the vocabulary.
  std::vector<std::string> cata_selections;
};

struct CompressionProtocol {
  double strain_amplitude = -0.50;  // in (-1, 0)
  double strain_rate = -0.25;       // per second, < 0
  int n_cycles = 2;
  std::optional<double> specimen_height_mm;  // required for TPA, no default
  double specimen_diameter_mm = 8.0;

  // Nominal timing implied by amplitude and rate.
  double downstroke_duration_s() const;
  double cycle_duration_s() const;
  // Crosshead speed in mm/s, needs specimen height.
  double crosshead_speed_mm_s() const;
};

struct StudyConfig {
  std::vector<std::string> cata_vocabulary;    // normalized, non-empty, unique
  std::vector<std::string> likert_attributes;  // normalized, non-empty, unique
  CompressionProtocol protocol;
  double significance_alpha = 0.05;
  double ci_level = 0.95;

  static StudyConfig defaults();
};

// Parameters of a z-score standardization, kept so fits and predictions can
// map back to the raw scale.
struct ZTransform {
  double mean = 0.0;
  double sd = 1.0;
  double apply(double raw) const { return (raw - mean) / sd; }
  double invert(double z) const { return z * sd + mean; }
};

}  // namespace texturalyze
