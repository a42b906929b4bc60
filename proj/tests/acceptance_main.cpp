// Acceptance suite. Each criterion prints one PASS/FAIL line; criteria that
// need the released study dataset are skipped with a notice when it is not
// present. Exit code 0 means every runnable criterion passed.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <string>
#include <unistd.h>
#include <vector>

#include "oracles.hpp"
#include "texturalyze/ca.hpp"
#include "texturalyze/common.hpp"
#include "texturalyze/csvio.hpp"
#include "texturalyze/inference.hpp"
#include "texturalyze/ingest.hpp"
#include "texturalyze/report.hpp"
#include "texturalyze/survey.hpp"
#include "texturalyze/synth.hpp"
#include "texturalyze/tpa.hpp"

namespace fs = std::filesystem;
using namespace texturalyze;

namespace {

int g_failures = 0;
int g_checks = 0;

void expect(bool ok, const std::string& detail) {
  ++g_checks;
  if (!ok) {
    ++g_failures;
    std::printf("    check failed: %s\n", detail.c_str());
  }
}

bool run_criterion(int number, const std::string& title,
                   const std::function<void()>& body) {
  int before = g_failures;
  try {
    body();
  } catch (const std::exception& e) {
    ++g_failures;
    std::printf("    exception: %s\n", e.what());
  }
  bool ok = g_failures == before;
  std::printf("[%s] criterion %d: %s\n", ok ? "PASS" : "FAIL", number,
              title.c_str());
  return ok;
}

void skip_criterion(int number, const std::string& title,
                    const std::string& why) {
  std::printf("[SKIP] criterion %d: %s (%s)\n", number, title.c_str(),
              why.c_str());
}

std::vector<std::vector<long long>> random_counts(synth::Rng& rng) {
  while (true) {
    int r = rng.next_int(2, 8);
    int c = rng.next_int(2, 10);
    std::vector<std::vector<long long>> counts(
        static_cast<size_t>(r), std::vector<long long>(static_cast<size_t>(c)));
    for (auto& row : counts)
      for (auto& v : row) v = rng.next_int(0, 20);
    bool ok = true;
    for (const auto& row : counts) {
      long long s = 0;
      for (long long v : row) s += v;
      if (s == 0) ok = false;
    }
    for (size_t j = 0; ok && j < counts[0].size(); ++j) {
      long long s = 0;
      for (const auto& row : counts) s += row[j];
      if (s == 0) ok = false;
    }
    if (ok) return counts;
  }
}

survey::ContingencyTable to_table(const std::vector<std::vector<long long>>& counts) {
  survey::ContingencyTable t;
  for (size_t i = 0; i < counts.size(); ++i)
    t.row_labels.push_back("r" + std::to_string(i));
  for (size_t j = 0; j < counts[0].size(); ++j)
    t.col_labels.push_back("c" + std::to_string(j));
  for (const auto& row : counts)
    for (long long v : row) {
      t.counts.push_back(v);
      t.total += v;
    }
  return survey::prune_table(std::move(t));
}

void criterion_ca_oracle() {
  synth::Rng rng(20250101);
  for (int trial = 0; trial < 200; ++trial) {
    auto counts = random_counts(rng);
    auto model = ca::fit_ca(to_table(counts));

    double n = 0.0;
    for (const auto& row : counts)
      for (long long v : row) n += static_cast<double>(v);
    double chi2 = oracles::chi2_statistic(counts);
    expect(std::fabs(model.total_inertia - chi2 / n) < 1e-10,
           "inertia vs chi2/n at trial " + std::to_string(trial));

    for (long i = 0; i < model.p.rows(); ++i)
      for (long j = i + 1; j < model.p.rows(); ++j) {
        double coord =
            (model.row_coords.row(i) - model.row_coords.row(j)).norm();
        double direct = ca::chi2_distance(model, static_cast<int>(i),
                                          static_cast<int>(j));
        expect(std::fabs(direct - coord) < 1e-9,
               "chi2 distance vs coordinates at trial " + std::to_string(trial));
      }

    for (long long k : {2, 5}) {
      auto scaled = counts;
      for (auto& row : scaled)
        for (auto& v : row) v *= k;
      auto scaled_model = ca::fit_ca(to_table(scaled));
      bool same = scaled_model.dimensions() == model.dimensions() &&
                  (scaled_model.eigenvalues - model.eigenvalues)
                          .cwiseAbs()
                          .maxCoeff() == 0.0 &&
                  (scaled_model.row_coords - model.row_coords)
                          .cwiseAbs()
                          .maxCoeff() == 0.0 &&
                  (scaled_model.col_coords - model.col_coords)
                          .cwiseAbs()
                          .maxCoeff() == 0.0;
      expect(same, "scale invariance k=" + std::to_string(k) + " at trial " +
                       std::to_string(trial));
    }
  }
}

void criterion_pearson_oracle() {
  synth::Rng rng(20250202);
  for (int trial = 0; trial < 500; ++trial) {
    int n = rng.next_int(4, 50);
    std::vector<double> x(static_cast<size_t>(n)), y(x.size());
    for (size_t i = 0; i < x.size(); ++i) {
      x[i] = rng.next_gauss();
      y[i] = 0.4 * x[i] + rng.next_gauss();
    }
    auto res = inference::pearson(x, y, 0.05);
    expect(std::fabs(res.r - oracles::direct_pearson_r(x, y)) < 1e-12,
           "r vs direct formula at trial " + std::to_string(trial));
    double t = res.r * std::sqrt((n - 2) / (1.0 - res.r * res.r));
    expect(std::fabs(res.p_value -
                     oracles::quad_t_two_sided_p(t, n - 2)) < 1e-9,
           "p vs quadrature at trial " + std::to_string(trial));
  }
  synth::Rng rng2(20250203);
  for (int trial = 0; trial < 100; ++trial) {
    double t = 12.0 * (rng2.next_unit() - 0.5);
    double df = 1 + trial % 40;
    expect(std::fabs(inference::t_cdf(t, df) + inference::t_cdf(-t, df) - 1.0) <
               1e-12,
           "t_cdf symmetry");
    double cauchy = 0.5 + std::atan(t) / 3.141592653589793238462643383279;
    expect(std::fabs(inference::t_cdf(t, 1) - cauchy) < 1e-12,
           "df=1 Cauchy closed form");
  }
  expect(std::fabs(inference::t_cdf(1.0, 1) - 0.75) < 1e-12, "t_cdf(1, 1)");
}

inference::LmmData synth_lmm_data(int participants, int items, double sigma_u,
                                  double sigma, std::uint64_t seed) {
  synth::SyntheticSurveySpec spec;
  spec.participants = participants;
  spec.burgers = items;
  spec.beta0 = 0.0;
  spec.beta1 = 0.6;
  spec.beta2 = 0.3;
  spec.sigma_u = sigma_u;
  spec.sigma = sigma;
  spec.seed = seed;
  auto [records, truth] = synth::gen_survey(spec);
  inference::LmmData data;
  data.predictor_names = {"flavor", "texture"};
  long n = static_cast<long>(records.size());
  data.predictors.resize(n, 2);
  data.response.resize(n);
  for (long i = 0; i < n; ++i) {
    const auto& rec = records[static_cast<size_t>(i)];
    data.participant.push_back(rec.participant_id);
    data.predictors(i, 0) = rec.flavor_liking;
    data.predictors(i, 1) = rec.texture_liking;
    data.response(i) = rec.overall_liking;
  }
  return data;
}

std::vector<std::vector<int>> groups_of(const inference::LmmData& data) {
  std::map<std::string, std::vector<int>> by;
  for (long i = 0; i < data.response.size(); ++i)
    by[data.participant[static_cast<size_t>(i)]].push_back(static_cast<int>(i));
  std::vector<std::vector<int>> out;
  for (auto& [k, v] : by) out.push_back(v);
  return out;
}

void criterion_lmm_recovery() {
  // Coverage: fitted fixed effects within 3 SE of the generating values in
  // at least 95 of 100 seeds, at both design sizes. Responses go through the
  // Likert rounding of the survey generator, so the model is mildly
  // misspecified on purpose.
  for (int participants : {40, 200}) {
    int hits = 0;
    for (int seed = 0; seed < 100; ++seed) {
      auto data = synth_lmm_data(participants, 6, 0.5, 0.5,
                                 1000 + static_cast<std::uint64_t>(seed));
      auto fit = inference::fit_lmm(data, inference::LmmMethod::Reml);
      bool ok = std::fabs(fit.beta(1) - 0.6) <= 3.0 * fit.se(1) &&
                std::fabs(fit.beta(2) - 0.3) <= 3.0 * fit.se(2) &&
                std::fabs(fit.beta(0) - 0.0) <= 3.0 * fit.se(0);
      hits += ok ? 1 : 0;
    }
    expect(hits >= 95, "3-SE coverage at " + std::to_string(participants) +
                           " participants: " + std::to_string(hits) + "/100");
  }

  // Profile optimum against the dense grid-search oracle.
  for (std::uint64_t seed : {501u, 502u, 503u}) {
    auto data = synth_lmm_data(40, 6, 0.5, 0.5, seed);
    auto fit = inference::fit_lmm(data, inference::LmmMethod::Reml);
    Eigen::MatrixXd x(data.response.size(), 3);
    x.col(0).setOnes();
    x.rightCols(2) = data.predictors;
    auto grid =
        oracles::lmm_grid_search(x, data.response, groups_of(data), true);
    expect(std::fabs(fit.loglik - grid.best_loglik) < 1e-4,
           "loglik vs grid oracle at seed " + std::to_string(seed) + ": " +
               format_double(fit.loglik - grid.best_loglik));
  }

  // sigma_u = 0 data reduces to OLS (fixture whose boundary estimate
  // collapses; null data yields a spurious positive estimate on about half
  // of all seeds, which is correct REML behavior, not a reduction to OLS).
  auto data = synth_lmm_data(50, 6, 0.0, 0.5, 600);
  auto fit = inference::fit_lmm(data, inference::LmmMethod::Reml);
  Eigen::MatrixXd x(data.response.size(), 3);
  x.col(0).setOnes();
  x.rightCols(2) = data.predictors;
  auto ols = oracles::ols_fit(x, data.response);
  expect(fit.sigma_u2 <= 1e-6, "sigma_u2 collapses to zero");
  for (int j = 0; j < 3; ++j)
    expect(std::fabs(fit.beta(j) - ols(j)) < 1e-6,
           "OLS agreement for beta_" + std::to_string(j));
}

void criterion_tpa_closed_form() {
  CompressionProtocol protocol;
  protocol.specimen_height_mm = 10.0;

  // Noise-free closed forms at 1e-9 relative.
  for (auto [peak, scale2, rho] :
       {std::tuple{10.0, 0.5, 0.75}, std::tuple{0.33, 0.8, 0.6},
        std::tuple{23.67, 0.95, 0.9}, std::tuple{5.0, 1.0, 1.0}}) {
    synth::SyntheticCurveSpec spec;
    spec.protocol = protocol;
    spec.peak_force_1 = peak;
    spec.cycle2_scale = scale2;
    spec.upstroke_ratio = rho;
    auto [curve, expected] = synth::gen_curve(spec);
    auto params = tpa::compute_tpa(
        curve, tpa::segment_cycles(curve, protocol), protocol);
    auto got = params.as_array();
    auto want = expected.as_array();
    for (size_t p = 0; p < 6; ++p)
      expect(std::fabs(got[p] - want[p]) <= 1e-9 * std::fabs(want[p]),
             std::string("closed form for ") + tpa::kParameterNames[p]);
  }

  // Homogeneity (exact for power-of-two scaling) and time-shift invariance.
  {
    synth::SyntheticCurveSpec spec;
    spec.protocol = protocol;
    spec.peak_force_1 = 6.0;
    spec.cycle2_scale = 0.7;
    spec.upstroke_ratio = 0.8;
    auto [curve, expected] = synth::gen_curve(spec);
    auto base = tpa::compute_tpa(curve, tpa::segment_cycles(curve, protocol),
                                 protocol);
    CurveFile doubled = curve;
    for (auto& row : doubled.rows) row.force_n *= 2.0;
    auto d2 = tpa::compute_tpa(doubled, tpa::segment_cycles(doubled, protocol),
                               protocol);
    expect(d2.hardness_n == 2.0 * base.hardness_n &&
               d2.stiffness_n_per_mm == 2.0 * base.stiffness_n_per_mm &&
               d2.chewiness_n == 2.0 * base.chewiness_n &&
               d2.cohesiveness == base.cohesiveness &&
               d2.springiness == base.springiness &&
               d2.resilience == base.resilience,
           "homogeneity under force doubling");

    CurveFile moved = curve;
    for (auto& row : moved.rows) row.time_s += 4.0;
    auto shifted = tpa::compute_tpa(moved, tpa::segment_cycles(moved, protocol),
                                    protocol);
    expect(shifted.as_array() == base.as_array(), "time-shift invariance");
  }

  // 1% noise: mean relative error over 100 seeds within 2% per parameter.
  {
    synth::SyntheticCurveSpec spec;
    spec.protocol = protocol;
    spec.peak_force_1 = 10.0;
    spec.cycle2_scale = 0.85;
    spec.upstroke_ratio = 1.0;
    spec.noise_sd = 0.1;
    // 64 Hz balances the two noise channels: the stiffness band needs
    // enough samples, while denser grids let the refined peak jitter and
    // blur the resilience split.
    spec.sample_rate_hz = 64.0;
    std::array<double, 6> err{};
    for (int seed = 0; seed < 100; ++seed) {
      spec.seed = static_cast<std::uint64_t>(seed);
      auto [curve, expected] = synth::gen_curve(spec);
      auto params = tpa::compute_tpa(
          curve, tpa::segment_cycles(curve, protocol), protocol);
      auto got = params.as_array();
      auto want = expected.as_array();
      for (size_t p = 0; p < 6; ++p)
        err[p] += std::fabs(got[p] - want[p]) / std::fabs(want[p]);
    }
    for (size_t p = 0; p < 6; ++p)
      expect(err[p] / 100.0 < 0.02,
             std::string("noise recovery for ") + tpa::kParameterNames[p] +
                 ": mean rel err " + format_double(err[p] / 100.0));
  }
}

void criterion_determinism() {
  fs::path tmp = fs::temp_directory_path() /
                 ("texturalyze_acceptance_" + std::to_string(::getpid()));
  fs::remove_all(tmp);
  fs::create_directories(tmp);
  csvio::write_file(tmp / "curve_spec.txt",
                    "peak_force_1 = 4\ncycle2_scale = 0.95\n"
                    "upstroke_ratio = 0.9\nnoise_sd = 0.02\nburgers = 6\n"
                    "samples_per_burger = 4\nseed = 11\n");
  csvio::write_file(tmp / "survey_spec.txt",
                    "participants = 25\nburgers = 6\nbeta1 = 0.6\n"
                    "beta2 = 0.3\nsigma_u = 0.4\nsigma = 0.4\nseed = 21\n");
  csvio::write_file(tmp / "config.txt",
                    "specimen_height_mm = 10\nsignificance_alpha = 0.05\n"
                    "ci_level = 0.95\n");
  report::cmd_synth_curve(tmp / "curve_spec.txt", tmp / "fixtures", {});
  report::cmd_synth_survey(tmp / "survey_spec.txt", tmp / "fixtures", {});

  report::Options opts;
  opts.config_path = tmp / "config.txt";
  opts.out_dir = tmp / "run1";
  auto first = report::cmd_report(tmp / "fixtures" / "curves",
                                  tmp / "fixtures" / "survey.csv", opts);
  opts.out_dir = tmp / "run2";
  report::cmd_report(tmp / "fixtures" / "curves",
                     tmp / "fixtures" / "survey.csv", opts);

  expect(first.outputs.size() > 10, "report produced a full bundle");
  for (const auto& rel : first.outputs) {
    std::string a = csvio::read_file(tmp / "run1" / rel);
    std::string b = csvio::read_file(tmp / "run2" / rel);
    if (rel == fs::path("manifest.json")) {
      // Timestamps live only here; strip that line before comparing.
      auto strip = [](std::string s) {
        auto pos = s.find("\"timestamp_utc\"");
        if (pos == std::string::npos) return s;
        auto end = s.find('\n', pos);
        s.erase(pos, end - pos);
        return s;
      };
      expect(strip(a) == strip(b), "manifest identical up to timestamp");
    } else {
      expect(a == b, "byte-identical " + rel.generic_string());
    }
  }
  fs::remove_all(tmp);
}

// ---------------------------------------------------------------------------
// Conditional reproduction against the released study dataset, expected as
//   <dataset>/config.txt, <dataset>/survey.csv, <dataset>/curves/<burger>/*.csv
// (see README). Skipped when the directory is absent.

struct Dataset {
  StudyConfig config;
  std::vector<SurveyRecord> records;
  fs::path curves_dir;
  fs::path root;
};

Dataset load_dataset(const fs::path& root) {
  Dataset d;
  d.root = root;
  d.config = ingest::parse_config(csvio::read_file(root / "config.txt"),
                                  (root / "config.txt").string());
  d.records = ingest::parse_survey_file(csvio::read_file(root / "survey.csv"),
                                        d.config, (root / "survey.csv").string());
  d.curves_dir = root / "curves";
  return d;
}

std::map<std::string, std::array<double, 6>> dataset_tpa(const Dataset& d) {
  std::map<std::string, std::array<double, 6>> out;
  for (const auto& entry : fs::directory_iterator(d.curves_dir)) {
    if (!entry.is_directory()) continue;
    std::vector<CurveFile> curves;
    std::vector<fs::path> files;
    for (const auto& f : fs::directory_iterator(entry.path()))
      if (f.path().extension() == ".csv") files.push_back(f.path());
    std::sort(files.begin(), files.end());
    for (const auto& f : files)
      curves.push_back(ingest::parse_curve_file(
          csvio::read_file(f), entry.path().filename().string(),
          f.stem().string(), f.string()));
    auto ens = tpa::ensemble_stats(curves, d.config.ci_level);
    auto mean_curve =
        tpa::ensemble_mean_curve(ens, entry.path().filename().string());
    auto params = tpa::compute_tpa(
        mean_curve, tpa::segment_cycles(mean_curve, d.config.protocol),
        d.config.protocol);
    out[entry.path().filename().string()] = params.as_array();
  }
  return out;
}

void criterion_dataset_ca(const Dataset& d) {
  auto table = survey::build_contingency(d.records, d.config);
  auto model = ca::fit_ca(table);
  expect(std::fabs(100.0 * model.inertia_share(0) - 65.59) <= 0.5,
         "PC1 inertia share " + format_double(100.0 * model.inertia_share(0)));
  expect(std::fabs(100.0 * model.inertia_share(1) - 23.95) <= 0.5,
         "PC2 inertia share " + format_double(100.0 * model.inertia_share(1)));
}

void criterion_dataset_correlations(const Dataset& d) {
  auto params = dataset_tpa(d);
  auto burgers = survey::burger_ids(d.records);
  auto series_for = [&](size_t p) {
    std::vector<double> v;
    for (const auto& b : burgers) v.push_back(params.at(b)[p]);
    return v;
  };
  auto cata = [&](const std::string& attr) {
    return survey::cata_counts_by_burger(d.records, attr, burgers);
  };
  auto likert_mean = [&](const std::string& attr) {
    auto summary = survey::likert_summary(d.records, attr, d.config);
    std::map<std::string, double> m;
    for (const auto& row : summary.rows) m[row.burger_id] = row.mean;
    std::vector<double> v;
    for (const auto& b : burgers) v.push_back(m.at(b));
    return v;
  };
  // Parameter order: stiffness=0 hardness=1 cohesiveness=2 springiness=3
  // resilience=4 chewiness=5.
  auto check_r = [&](const std::vector<double>& x, const std::vector<double>& y,
                     double want, const std::string& label) {
    auto res = inference::pearson(x, y, d.config.significance_alpha);
    expect(std::fabs(res.r - want) <= 0.02,
           label + ": r = " + format_double(res.r));
    expect(res.significant, label + " flagged significant");
  };
  check_r(series_for(4), cata("tough"), 0.96, "resilience vs tough");
  check_r(series_for(4), cata("mushy"), -0.94, "resilience vs mushy");
  check_r(series_for(4), likert_mean("meatiness"), 0.92,
          "resilience vs meatiness");
  check_r(series_for(2), cata("brittle"), -0.89, "cohesiveness vs brittle");

  for (size_t p : {size_t{0}, size_t{1}}) {
    bool any_significant = false;
    for (const auto& attr : d.config.cata_vocabulary) {
      auto res = inference::pearson(series_for(p), cata(attr),
                                    d.config.significance_alpha);
      any_significant = any_significant || res.significant;
    }
    expect(!any_significant,
           std::string(tpa::kParameterNames[p]) +
               " has no significant attribute correlations");
  }
}

void criterion_dataset_lmm(const Dataset& d) {
  auto zmat = [&](const std::string& q) {
    return survey::zscore(survey::ratings_matrix(d.records, q, d.config));
  };
  auto build = [&](const std::string& response,
                   const std::vector<std::string>& preds) {
    inference::LmmData data;
    data.predictor_names = preds;
    auto rz = zmat(response);
    long n = static_cast<long>(rz.observations.size());
    data.response.resize(n);
    data.predictors.resize(n, static_cast<long>(preds.size()));
    for (long i = 0; i < n; ++i) {
      data.participant.push_back(rz.observations[static_cast<size_t>(i)].participant_id);
      data.response(i) = rz.observations[static_cast<size_t>(i)].value;
    }
    for (size_t p = 0; p < preds.size(); ++p) {
      auto pz = zmat(preds[p]);
      for (long i = 0; i < n; ++i)
        data.predictors(i, static_cast<long>(p)) =
            pz.observations[static_cast<size_t>(i)].value;
    }
    return data;
  };

  auto liking = inference::fit_lmm(
      build("overall_liking", {"flavor_liking", "texture_liking"}),
      inference::LmmMethod::Reml);
  expect(liking.n_observations == 606, "606 observations");
  expect(liking.n_participants == 101, "101 participants");
  expect(std::fabs(liking.beta(1) - 0.65) <= 0.02,
         "beta_flavor = " + format_double(liking.beta(1)));
  expect(std::fabs(liking.beta(2) - 0.28) <= 0.02,
         "beta_texture = " + format_double(liking.beta(2)));

  auto texture = inference::fit_lmm(
      build("texture_liking", d.config.likert_attributes),
      inference::LmmMethod::Reml);
  auto it = std::find(d.config.likert_attributes.begin(),
                      d.config.likert_attributes.end(), "meatiness");
  expect(it != d.config.likert_attributes.end(),
         "meatiness present among configured attributes");
  if (it != d.config.likert_attributes.end()) {
    long idx = 1 + (it - d.config.likert_attributes.begin());
    expect(std::fabs(texture.beta(idx) - 0.59) <= 0.02,
           "beta_meatiness = " + format_double(texture.beta(idx)));
  }
}

void criterion_dataset_tpa_ranges(const Dataset& d) {
  auto params = dataset_tpa(d);
  double hardness_lo = 1e300, hardness_hi = -1e300;
  double chew_lo = 1e300, chew_hi = -1e300;
  for (const auto& [burger, values] : params) {
    hardness_lo = std::min(hardness_lo, values[1]);
    hardness_hi = std::max(hardness_hi, values[1]);
    chew_lo = std::min(chew_lo, values[5]);
    chew_hi = std::max(chew_hi, values[5]);
  }
  expect(std::fabs(hardness_lo - 0.33) <= 0.05 * 0.33,
         "min hardness " + format_double(hardness_lo));
  expect(std::fabs(hardness_hi - 23.67) <= 0.05 * 23.67,
         "max hardness " + format_double(hardness_hi));
  expect(std::fabs(chew_lo - 0.49) <= 0.05 * 0.49,
         "min chewiness " + format_double(chew_lo));
  expect(std::fabs(chew_hi - 37.30) <= 0.05 * 37.30,
         "max chewiness " + format_double(chew_hi));
}

}  // namespace

int main(int argc, char** argv) {
  fs::path dataset_dir = "data/ai4food";
  for (int i = 1; i + 1 < argc; ++i)
    if (std::string(argv[i]) == "--dataset") dataset_dir = argv[i + 1];

  bool all_ok = true;
  all_ok &= run_criterion(1, "CA oracle equivalence", criterion_ca_oracle);
  all_ok &= run_criterion(2, "Pearson / t-distribution oracle",
                          criterion_pearson_oracle);
  all_ok &= run_criterion(3, "LMM recovery", criterion_lmm_recovery);
  all_ok &= run_criterion(4, "TPA closed forms", criterion_tpa_closed_form);
  all_ok &= run_criterion(5, "report determinism", criterion_determinism);

  bool have_dataset = fs::is_directory(dataset_dir) &&
                      fs::exists(dataset_dir / "survey.csv") &&
                      fs::exists(dataset_dir / "config.txt") &&
                      fs::is_directory(dataset_dir / "curves");
  if (have_dataset) {
    try {
      Dataset d = load_dataset(dataset_dir);
      all_ok &= run_criterion(6, "dataset CA inertia",
                              [&] { criterion_dataset_ca(d); });
      all_ok &= run_criterion(7, "dataset correlation screen",
                              [&] { criterion_dataset_correlations(d); });
      all_ok &= run_criterion(8, "dataset mixed-effects coefficients",
                              [&] { criterion_dataset_lmm(d); });
      all_ok &= run_criterion(9, "dataset TPA ranges",
                              [&] { criterion_dataset_tpa_ranges(d); });
    } catch (const std::exception& e) {
      std::printf("[FAIL] dataset present but not ingestible: %s\n", e.what());
      all_ok = false;
    }
  } else {
    const std::string why =
        "dataset not present at " + dataset_dir.string();
    skip_criterion(6, "dataset CA inertia", why);
    skip_criterion(7, "dataset correlation screen", why);
    skip_criterion(8, "dataset mixed-effects coefficients", why);
    skip_criterion(9, "dataset TPA ranges", why);
  }

  std::printf("%d checks, %d failures\n", g_checks, g_failures);
  return all_ok ? 0 : 1;
}
