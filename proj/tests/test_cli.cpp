#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>

#include <nlohmann/json.hpp>

#include "texturalyze/csvio.hpp"
#include "texturalyze/report.hpp"
#include "texturalyze/sha256.hpp"

namespace fs = std::filesystem;
using namespace texturalyze;

namespace {

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& tag) {
    path = fs::temp_directory_path() /
           ("texturalyze_" + tag + "_" + std::to_string(::getpid()));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

int run_cli(const std::string& args) {
  std::string cmd = std::string(TEXTURALYZE_CLI_PATH) + " " + args +
                    " >/dev/null 2>/dev/null";
  int status = std::system(cmd.c_str());
  REQUIRE(status != -1);
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

void write_config(const fs::path& path) {
  csvio::write_file(path,
                    "specimen_height_mm = 10\n"
                    "significance_alpha = 0.05\n"
                    "ci_level = 0.95\n");
}

// A small but complete corpus: curves for 6 burgers plus a survey.
void build_fixture(const fs::path& dir) {
  csvio::write_file(dir / "curve_spec.txt",
                    "peak_force_1 = 4\n"
                    "cycle2_scale = 0.95\n"
                    "upstroke_ratio = 0.9\n"
                    "noise_sd = 0.02\n"
                    "burgers = 6\n"
                    "samples_per_burger = 4\n"
                    "seed = 11\n");
  csvio::write_file(dir / "survey_spec.txt",
                    "participants = 25\n"
                    "burgers = 6\n"
                    "beta1 = 0.6\n"
                    "beta2 = 0.3\n"
                    "sigma_u = 0.4\n"
                    "sigma = 0.4\n"
                    "seed = 21\n");
  report::cmd_synth_curve(dir / "curve_spec.txt", dir / "fixtures", {});
  report::cmd_synth_survey(dir / "survey_spec.txt", dir / "fixtures", {});
  write_config(dir / "config.txt");
}

std::string slurp(const fs::path& p) { return csvio::read_file(p); }

size_t count_lines(const std::string& text) {
  size_t n = 0;
  for (char c : text)
    if (c == '\n') ++n;
  return n;
}

}  // namespace

TEST_CASE("cli end to end") {
  TempDir tmp("cli");
  build_fixture(tmp.path);
  fs::path curves = tmp.path / "fixtures" / "curves";
  fs::path survey = tmp.path / "fixtures" / "survey.csv";
  fs::path config = tmp.path / "config.txt";

  SUBCASE("tpa subcommand counts one row per burger") {
    fs::path out = tmp.path / "out_tpa";
    int code = run_cli("tpa --curves " + curves.string() + " --config " +
                       config.string() + " --out " + out.string());
    CHECK(code == 0);
    auto table = slurp(out / "tpa_parameters.csv");
    CHECK(count_lines(table) == 7);  // header + 6 burgers
    CHECK(fs::exists(out / "ensemble_burger_01.csv"));
    CHECK(fs::exists(out / "tpa_overview.svg"));

    SUBCASE("downstream subcommands run off the TPA table") {
      fs::path out2 = tmp.path / "out_ca";
      CHECK(run_cli("ca --survey " + survey.string() + " --tpa " +
                    (out / "tpa_parameters.csv").string() + " --config " +
                    config.string() + " --out " + out2.string()) == 0);
      CHECK(fs::exists(out2 / "ca_coordinates.csv"));
      CHECK(fs::exists(out2 / "ca_biplot.svg"));
      CHECK(fs::exists(out2 / "contingency.csv"));

      fs::path out3 = tmp.path / "out_corr";
      CHECK(run_cli("correlate --survey " + survey.string() + " --tpa " +
                    (out / "tpa_parameters.csv").string() + " --config " +
                    config.string() + " --out " + out3.string()) == 0);
      auto corr = slurp(out3 / "correlations.csv");
      // 6 parameters x (13 CATA + 5 likert attributes), plus header.
      CHECK(count_lines(corr) == 1 + 6 * 18);
    }
  }

  SUBCASE("lmm subcommand writes the model table") {
    fs::path out = tmp.path / "out_lmm";
    CHECK(run_cli("lmm --survey " + survey.string() + " --config " +
                  config.string() + " --out " + out.string()) == 0);
    CHECK(fs::exists(out / "lmm_overall_liking.csv"));
    CHECK(fs::exists(out / "lmm_overall_liking_surface.svg"));
    CHECK(fs::exists(out / "ratings_overall_liking.csv"));
    auto table = slurp(out / "lmm_overall_liking.csv");
    CHECK(table.find("beta_flavor_liking") != std::string::npos);
    CHECK(table.find("method,reml") != std::string::npos);
  }

  SUBCASE("exit codes follow the error contract") {
    fs::path out = tmp.path / "out_err";
    fs::path empty = tmp.path / "empty";
    fs::create_directories(empty);
    // Input error: no curves at all.
    CHECK(run_cli("tpa --curves " + empty.string() + " --config " +
                  config.string() + " --out " + out.string()) == 2);
    // Input error: missing survey file.
    CHECK(run_cli("ca --survey " + (tmp.path / "nope.csv").string() +
                  " --tpa " + (tmp.path / "nope2.csv").string() + " --config " +
                  config.string() + " --out " + out.string()) == 2);
    // Config error: invalid alpha.
    fs::path bad_config = tmp.path / "bad.txt";
    csvio::write_file(bad_config, "significance_alpha = 2\n");
    CHECK(run_cli("tpa --curves " + curves.string() + " --config " +
                  bad_config.string() + " --out " + out.string()) == 3);
    // Corrupt curve file.
    fs::path broken = tmp.path / "broken";
    fs::create_directories(broken / "b1");
    csvio::write_file(broken / "b1" / "s1.csv", "time_s,force_N\n0,1\nx,2\n");
    csvio::write_file(broken / "b1" / "s2.csv", "time_s,force_N\n0,1\n1,2\n");
    CHECK(run_cli("tpa --curves " + broken.string() + " --config " +
                  config.string() + " --out " + out.string()) == 2);
  }
}

TEST_CASE("full report bundle") {
  TempDir tmp("report");
  build_fixture(tmp.path);

  report::Options opts;
  opts.config_path = tmp.path / "config.txt";
  opts.out_dir = tmp.path / "out";
  auto result = report::cmd_report(tmp.path / "fixtures" / "curves",
                                   tmp.path / "fixtures" / "survey.csv", opts);

  SUBCASE("bundle contains every advertised artifact") {
    for (const char* name :
         {"tpa_parameters.csv", "contingency.csv", "ca_coordinates.csv",
          "ca_biplot.svg", "correlations.csv", "lmm_overall_liking.csv",
          "lmm_texture_liking.csv", "likert_summary.csv", "manifest.json"})
      CHECK(fs::exists(opts.out_dir / name));
  }

  SUBCASE("manifest lists every output with its true hash") {
    auto manifest = nlohmann::json::parse(slurp(opts.out_dir / "manifest.json"));
    CHECK(manifest["tool_version"] == report::kToolVersion);
    REQUIRE(manifest.contains("outputs"));
    size_t listed = 0;
    for (const auto& entry : manifest["outputs"]) {
      fs::path rel = entry["path"].get<std::string>();
      CHECK(fs::exists(opts.out_dir / rel));
      CHECK(entry["sha256"].get<std::string>() ==
            sha256_hex(slurp(opts.out_dir / rel)));
      ++listed;
    }
    // Everything except the manifest itself is listed.
    CHECK(listed == result.outputs.size() - 1);
  }

  SUBCASE("re-running is byte-identical apart from the manifest timestamp") {
    report::Options opts2 = opts;
    opts2.out_dir = tmp.path / "out2";
    report::cmd_report(tmp.path / "fixtures" / "curves",
                       tmp.path / "fixtures" / "survey.csv", opts2);
    for (const auto& rel : result.outputs) {
      if (rel == fs::path("manifest.json")) continue;
      CHECK(slurp(opts.out_dir / rel) == slurp(opts2.out_dir / rel));
    }
  }
}
