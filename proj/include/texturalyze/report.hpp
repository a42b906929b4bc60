#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "texturalyze/inference.hpp"
#include "texturalyze/types.hpp"

namespace texturalyze::report {

inline constexpr const char* kToolVersion = "0.1.0";

struct Options {
  std::filesystem::path config_path;
  std::filesystem::path out_dir;
  std::optional<double> alpha;  // overrides config.significance_alpha
  inference::LmmMethod method = inference::LmmMethod::Reml;
};

struct RunResult {
  std::vector<std::filesystem::path> outputs;  // paths under out_dir
  std::vector<std::string> warnings;
};

RunResult cmd_tpa(const std::filesystem::path& curves_dir, const Options& opts);

RunResult cmd_ca(const std::filesystem::path& survey_csv,
                 const std::filesystem::path& tpa_csv, const Options& opts);

RunResult cmd_correlate(const std::filesystem::path& survey_csv,
                        const std::filesystem::path& tpa_csv,
                        const Options& opts);

RunResult cmd_lmm(const std::filesystem::path& survey_csv, const Options& opts,
                  const std::string& response,
                  const std::vector<std::string>& predictors);

// Runs every stage (tpa, ca, correlate, the two mixed models, survey
// summaries) and writes manifest.json; the first failing stage aborts.
RunResult cmd_report(const std::filesystem::path& curves_dir,
                     const std::filesystem::path& survey_csv,
                     const Options& opts);

RunResult cmd_synth_curve(const std::filesystem::path& spec_path,
                          const std::filesystem::path& out_dir,
                          std::optional<std::uint64_t> seed);

RunResult cmd_synth_survey(const std::filesystem::path& spec_path,
                           const std::filesystem::path& out_dir,
                           std::optional<std::uint64_t> seed);

}  // namespace texturalyze::report
