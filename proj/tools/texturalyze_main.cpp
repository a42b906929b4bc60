#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "texturalyze/common.hpp"
#include "texturalyze/report.hpp"

namespace {

int exit_code_for(const texturalyze::Error& e) {
  switch (e.category()) {
    case texturalyze::ErrorCategory::Input: return 2;
    case texturalyze::ErrorCategory::Config: return 3;
    case texturalyze::ErrorCategory::Analysis: return 1;
  }
  return 1;
}

void print_result(const texturalyze::report::RunResult& result) {
  for (const auto& w : result.warnings)
    std::cerr << "warning: " << w << "\n";
  std::cout << result.outputs.size() << " file(s) written\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Texture profile analysis and sensory survey statistics"};
  app.require_subcommand(1);
  app.set_version_flag("--version", texturalyze::report::kToolVersion);

  texturalyze::report::Options opts;
  std::string curves_dir, survey_csv, tpa_csv, spec_path, out_dir;
  std::string response = "overall_liking";
  std::vector<std::string> predictors = {"flavor_liking", "texture_liking"};
  std::string method = "reml";
  double alpha = -1.0;
  std::optional<std::uint64_t> seed;
  std::uint64_t seed_value = 0;

  auto add_common = [&](CLI::App* cmd, bool needs_config = true) {
    if (needs_config)
      cmd->add_option("--config", opts.config_path, "Study configuration file")
          ->required();
    cmd->add_option("--out", out_dir, "Output directory")->required();
    cmd->add_option("--alpha", alpha, "Significance level override");
  };

  auto* tpa = app.add_subcommand("tpa", "Extract TPA parameters from curves");
  tpa->add_option("--curves", curves_dir, "Directory of curve CSVs grouped by burger")
      ->required();
  add_common(tpa);

  auto* ca = app.add_subcommand("ca", "Correspondence analysis of CATA data");
  ca->add_option("--survey", survey_csv, "Survey CSV")->required();
  ca->add_option("--tpa", tpa_csv, "tpa_parameters.csv for supplementary variables")
      ->required();
  add_common(ca);

  auto* corr = app.add_subcommand("correlate", "TPA vs sensory correlation screen");
  corr->add_option("--survey", survey_csv, "Survey CSV")->required();
  corr->add_option("--tpa", tpa_csv, "tpa_parameters.csv")->required();
  add_common(corr);

  auto* lmm = app.add_subcommand("lmm", "Random-intercept mixed-effects model");
  lmm->add_option("--survey", survey_csv, "Survey CSV")->required();
  lmm->add_option("--response", response, "Response question");
  lmm->add_option("--predictors", predictors, "Predictor questions")
      ->delimiter(',');
  lmm->add_option("--method", method, "reml or ml")
      ->check(CLI::IsMember({"reml", "ml"}));
  add_common(lmm);

  auto* rep = app.add_subcommand("report", "Run the full analysis pipeline");
  rep->add_option("--curves", curves_dir, "Directory of curve CSVs")->required();
  rep->add_option("--survey", survey_csv, "Survey CSV")->required();
  rep->add_option("--method", method, "reml or ml")
      ->check(CLI::IsMember({"reml", "ml"}));
  add_common(rep);

  auto* synth = app.add_subcommand("synth", "Generate synthetic fixtures");
  synth->require_subcommand(1);
  auto* synth_curve = synth->add_subcommand("curve", "Synthetic curve corpus");
  synth_curve->add_option("--spec", spec_path, "Generator spec file")->required();
  synth_curve->add_option("--out", out_dir, "Output directory")->required();
  synth_curve->add_option("--seed", seed_value, "Seed override");
  auto* synth_survey = synth->add_subcommand("survey", "Synthetic survey");
  synth_survey->add_option("--spec", spec_path, "Generator spec file")->required();
  synth_survey->add_option("--out", out_dir, "Output directory")->required();
  synth_survey->add_option("--seed", seed_value, "Seed override");

  CLI11_PARSE(app, argc, argv);

  opts.out_dir = out_dir;
  if (alpha >= 0.0) opts.alpha = alpha;
  opts.method = method == "ml" ? texturalyze::inference::LmmMethod::Ml
                               : texturalyze::inference::LmmMethod::Reml;
  if (synth_curve->count("--seed") || synth_survey->count("--seed"))
    seed = seed_value;

  try {
    texturalyze::report::RunResult result;
    if (tpa->parsed()) {
      result = texturalyze::report::cmd_tpa(curves_dir, opts);
    } else if (ca->parsed()) {
      result = texturalyze::report::cmd_ca(survey_csv, tpa_csv, opts);
    } else if (corr->parsed()) {
      result = texturalyze::report::cmd_correlate(survey_csv, tpa_csv, opts);
    } else if (lmm->parsed()) {
      result = texturalyze::report::cmd_lmm(survey_csv, opts, response, predictors);
    } else if (rep->parsed()) {
      result = texturalyze::report::cmd_report(curves_dir, survey_csv, opts);
    } else if (synth->parsed()) {
      result = synth_curve->parsed()
                   ? texturalyze::report::cmd_synth_curve(spec_path, out_dir, seed)
                   : texturalyze::report::cmd_synth_survey(spec_path, out_dir, seed);
    }
    print_result(result);
  } catch (const texturalyze::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
