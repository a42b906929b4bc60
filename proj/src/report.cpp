#include "texturalyze/report.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>

#include <nlohmann/json.hpp>

#include "texturalyze/ca.hpp"
#include "texturalyze/common.hpp"
#include "texturalyze/csvio.hpp"
#include "texturalyze/ingest.hpp"
#include "texturalyze/sha256.hpp"
#include "texturalyze/survey.hpp"
#include "texturalyze/svg.hpp"
#include "texturalyze/synth.hpp"
#include "texturalyze/tpa.hpp"

namespace fs = std::filesystem;

namespace texturalyze::report {

namespace {

StudyConfig load_config(const fs::path& path) {
  return ingest::parse_config(csvio::read_file(path), path.string());
}

std::string sanitize(const std::string& name) {
  std::string out;
  for (char c : name) {
    if ((c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '-' ||
        c == '.')
      out.push_back(c);
    else if (c >= 'A' && c <= 'Z')
      out.push_back(static_cast<char>(c - 'A' + 'a'));
    else
      out.push_back('_');
  }
  return out;
}

void emit(RunResult& result, const Options& opts, const fs::path& rel,
          const std::string& content) {
  csvio::write_file(opts.out_dir / rel, content);
  result.outputs.push_back(rel);
}

// Re-attach the offending file to errors raised while working on it.
template <typename Fn>
auto with_file_context(const fs::path& path, Fn&& fn) {
  try {
    return fn();
  } catch (const Error& e) {
    if (!e.file().empty()) throw;
    throw Error(e.code(), e.message(), path.string(), e.row(), e.column());
  }
}

std::vector<SurveyRecord> load_survey(const fs::path& path,
                                      const StudyConfig& cfg) {
  return ingest::parse_survey_file(csvio::read_file(path), cfg, path.string());
}

constexpr std::array<const char*, 6> kTpaColumns = {
    "stiffness_N_per_mm", "hardness_N", "cohesiveness",
    "springiness",        "resilience", "chewiness_N"};

std::string tpa_table_csv(
    const std::vector<std::pair<std::string, std::array<double, 6>>>& canon,
    const std::vector<std::array<double, 6>>& sds,
    const std::vector<int>& n_samples) {
  std::vector<std::string> header = {"burger_id"};
  for (const char* c : kTpaColumns) header.emplace_back(c);
  for (const char* c : tpa::kParameterNames)
    header.push_back("sd_" + std::string(c));
  header.emplace_back("n_samples");
  std::string out = csvio::join(header) + "\n";
  for (size_t i = 0; i < canon.size(); ++i) {
    std::vector<std::string> row = {canon[i].first};
    for (double v : canon[i].second) row.push_back(format_double(v));
    for (double v : sds[i]) row.push_back(format_double(v));
    row.push_back(std::to_string(n_samples[i]));
    out += csvio::join(row) + "\n";
  }
  return out;
}

std::map<std::string, std::array<double, 6>> read_tpa_csv(const fs::path& path) {
  auto lines = csvio::split_lines(csvio::read_file(path));
  if (lines.empty())
    throw Error(ErrorCode::MalformedHeader, "empty TPA table", path.string());
  auto header = csvio::split_fields(lines[0]);
  std::array<size_t, 6> col{};
  if (header.empty() || header[0] != "burger_id")
    throw Error(ErrorCode::MalformedHeader, "first column must be burger_id",
                path.string(), 0);
  for (size_t p = 0; p < 6; ++p) {
    auto it = std::find(header.begin(), header.end(), kTpaColumns[p]);
    if (it == header.end())
      throw Error(ErrorCode::MissingColumn,
                  "column '" + std::string(kTpaColumns[p]) + "' missing",
                  path.string(), 0, kTpaColumns[p]);
    col[p] = static_cast<size_t>(it - header.begin());
  }
  std::map<std::string, std::array<double, 6>> out;
  for (size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    auto fields = csvio::split_fields(lines[i]);
    if (fields.size() != header.size())
      throw Error(ErrorCode::MissingColumn, "ragged row", path.string(),
                  static_cast<long>(i));
    std::array<double, 6> values{};
    for (size_t p = 0; p < 6; ++p) {
      if (!csvio::parse_double(fields[col[p]], values[p]))
        throw Error(ErrorCode::NonNumericCell,
                    "bad number '" + fields[col[p]] + "'", path.string(),
                    static_cast<long>(i), kTpaColumns[p]);
    }
    out[fields[0]] = values;
  }
  if (out.empty())
    throw Error(ErrorCode::NoInput, "TPA table has no rows", path.string());
  return out;
}

std::string iso8601_utc_now() {
  auto now = std::chrono::system_clock::now();
  std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[72];
  std::snprintf(buf, sizeof(buf), "%04d-%02d-%02dT%02d:%02d:%02dZ",
                tm.tm_year + 1900, tm.tm_mon + 1, tm.tm_mday, tm.tm_hour,
                tm.tm_min, tm.tm_sec);
  return buf;
}

double flat_kv_double(const std::map<std::string, std::string>& kv,
                      const std::string& key, double fallback,
                      const std::string& source) {
  auto it = kv.find(key);
  if (it == kv.end()) return fallback;
  double v;
  if (!csvio::parse_double(it->second, v))
    throw Error(ErrorCode::ConfigInvalid, key + " must be numeric", source);
  return v;
}

long flat_kv_long(const std::map<std::string, std::string>& kv,
                  const std::string& key, long fallback,
                  const std::string& source) {
  auto it = kv.find(key);
  if (it == kv.end()) return fallback;
  long v;
  if (!csvio::parse_int(it->second, v))
    throw Error(ErrorCode::ConfigInvalid, key + " must be an integer", source);
  return v;
}

}  // namespace

RunResult cmd_tpa(const fs::path& curves_dir, const Options& opts) {
  StudyConfig cfg = load_config(opts.config_path);
  RunResult result;

  std::map<std::string, std::vector<fs::path>> groups;
  if (fs::is_directory(curves_dir)) {
    for (const auto& entry : fs::directory_iterator(curves_dir)) {
      if (!entry.is_directory()) continue;
      std::vector<fs::path> files;
      for (const auto& file : fs::directory_iterator(entry.path()))
        if (file.is_regular_file() && file.path().extension() == ".csv")
          files.push_back(file.path());
      if (files.empty()) continue;
      std::sort(files.begin(), files.end());
      groups[entry.path().filename().string()] = std::move(files);
    }
  }
  if (groups.empty())
    throw Error(ErrorCode::NoInput,
                "no curve CSVs found under " + curves_dir.string());

  std::vector<std::pair<std::string, std::array<double, 6>>> canon;
  std::vector<std::array<double, 6>> sds;
  std::vector<int> counts;

  for (const auto& [burger, files] : groups) {
    std::vector<CurveFile> curves;
    for (const auto& file : files)
      curves.push_back(with_file_context(file, [&] {
        return ingest::parse_curve_file(csvio::read_file(file), burger,
                                        file.stem().string(), file.string());
      }));

    tpa::EnsembleCurve ens = tpa::ensemble_stats(curves, cfg.ci_level);
    {
      std::string csv = "time_s,mean_N,ci_low_N,ci_high_N\n";
      for (size_t i = 0; i < ens.time_s.size(); ++i)
        csv += format_double(ens.time_s[i]) + "," +
               format_double(ens.mean_n[i]) + "," +
               format_double(ens.ci_low_n[i]) + "," +
               format_double(ens.ci_high_n[i]) + "\n";
      emit(result, opts, "ensemble_" + sanitize(burger) + ".csv", csv);
    }

    // Headline values come from the ensemble mean curve; per-sample values
    // feed the dispersion columns.
    CurveFile mean_curve = tpa::ensemble_mean_curve(ens, burger);
    tpa::TpaParameters params = tpa::compute_tpa(
        mean_curve, tpa::segment_cycles(mean_curve, cfg.protocol), cfg.protocol);
    for (const auto& w : params.warnings)
      result.warnings.push_back(burger + ": " + w);

    std::array<std::vector<double>, 6> per_sample;
    for (size_t s = 0; s < curves.size(); ++s) {
      tpa::TpaParameters sp = with_file_context(files[s], [&] {
        return tpa::compute_tpa(curves[s],
                                tpa::segment_cycles(curves[s], cfg.protocol),
                                cfg.protocol);
      });
      auto values = sp.as_array();
      for (size_t p = 0; p < 6; ++p) per_sample[p].push_back(values[p]);
    }
    std::array<double, 6> sd{};
    for (size_t p = 0; p < 6; ++p) sd[p] = sample_sd(per_sample[p]);

    canon.emplace_back(burger, params.as_array());
    sds.push_back(sd);
    counts.push_back(static_cast<int>(curves.size()));
  }

  emit(result, opts, "tpa_parameters.csv", tpa_table_csv(canon, sds, counts));

  std::vector<svg::BarPanel> panels;
  std::string data_csv = "parameter,burger_id,value\n";
  for (size_t p = 0; p < 6; ++p) {
    svg::BarPanel panel;
    panel.title = tpa::kParameterNames[p];
    for (const auto& [burger, values] : canon) {
      panel.bars.emplace_back(burger, values[p]);
      data_csv += std::string(tpa::kParameterNames[p]) + "," + burger + "," +
                  format_double(values[p]) + "\n";
    }
    panels.push_back(std::move(panel));
  }
  emit(result, opts, "tpa_overview.svg",
       svg::render_bar_panels("Texture profile analysis parameters", panels,
                              data_csv));
  return result;
}

RunResult cmd_ca(const fs::path& survey_csv, const fs::path& tpa_csv,
                 const Options& opts) {
  StudyConfig cfg = load_config(opts.config_path);
  RunResult result;

  auto records = load_survey(survey_csv, cfg);
  survey::ContingencyTable table = survey::build_contingency(records, cfg);
  for (const auto& r : table.pruned_rows)
    result.warnings.push_back("pruned all-zero burger row: " + r);
  for (const auto& c : table.pruned_cols)
    result.warnings.push_back("pruned all-zero attribute column: " + c);

  {
    std::vector<std::string> header = {"burger_id"};
    header.insert(header.end(), table.col_labels.begin(),
                  table.col_labels.end());
    std::string csv = csvio::join(header) + "\n";
    for (size_t i = 0; i < table.rows(); ++i) {
      std::vector<std::string> row = {table.row_labels[i]};
      for (size_t j = 0; j < table.cols(); ++j)
        row.push_back(std::to_string(table.at(i, j)));
      csv += csvio::join(row) + "\n";
    }
    emit(result, opts, "contingency.csv", csv);
  }

  ca::CaModel model = ca::fit_ca(table);

  auto tpa_map = read_tpa_csv(tpa_csv);
  std::vector<std::pair<std::string, std::vector<double>>> variables;
  for (size_t p = 0; p < 6; ++p) {
    std::vector<double> values;
    for (const auto& burger : model.row_labels) {
      auto it = tpa_map.find(burger);
      if (it == tpa_map.end())
        throw Error(ErrorCode::SupplementaryMismatch,
                    "no TPA row for burger '" + burger + "'",
                    tpa_csv.string());
      values.push_back(it->second[p]);
    }
    variables.emplace_back(tpa::kParameterNames[p], std::move(values));
  }
  ca::SupplementaryProjection proj = ca::project_supplementary(model, variables);

  {
    std::string csv = "kind,label,dim,value\n";
    auto add = [&](const std::string& kind, const std::string& label, long dim,
                   double value) {
      csv += kind + "," + label + "," + std::to_string(dim) + "," +
             format_double(value) + "\n";
    };
    for (long d = 0; d < model.dimensions(); ++d) {
      add("eigenvalue", "", d + 1, model.eigenvalues(d));
      add("inertia_share", "", d + 1, model.inertia_share(d));
    }
    for (size_t i = 0; i < model.row_labels.size(); ++i)
      for (long d = 0; d < model.dimensions(); ++d)
        add("row", model.row_labels[i], d + 1,
            model.row_coords(static_cast<long>(i), d));
    for (size_t j = 0; j < model.col_labels.size(); ++j)
      for (long d = 0; d < model.dimensions(); ++d)
        add("column", model.col_labels[j], d + 1,
            model.col_coords(static_cast<long>(j), d));
    for (size_t v = 0; v < proj.names.size(); ++v)
      for (long d = 0; d < model.dimensions(); ++d)
        add("supplementary", proj.names[v], d + 1,
            proj.loadings(static_cast<long>(v), d));
    emit(result, opts, "ca_coordinates.csv", csv);
  }

  if (model.dimensions() >= 2) {
    std::vector<svg::LabeledPoint> rows, cols;
    for (size_t i = 0; i < model.row_labels.size(); ++i)
      rows.push_back({model.row_coords(static_cast<long>(i), 0),
                      model.row_coords(static_cast<long>(i), 1),
                      model.row_labels[i]});
    for (size_t j = 0; j < model.col_labels.size(); ++j)
      cols.push_back({model.col_coords(static_cast<long>(j), 0),
                      model.col_coords(static_cast<long>(j), 1),
                      model.col_labels[j]});
    std::vector<svg::Arrow> arrows;
    for (size_t v = 0; v < proj.names.size(); ++v)
      arrows.push_back({proj.loadings(static_cast<long>(v), 0),
                        proj.loadings(static_cast<long>(v), 1),
                        proj.names[v]});
    char xl[64], yl[64];
    std::snprintf(xl, sizeof(xl), "PC1 (%.2f%% of inertia)",
                  100.0 * model.inertia_share(0));
    std::snprintf(yl, sizeof(yl), "PC2 (%.2f%% of inertia)",
                  100.0 * model.inertia_share(1));
    std::string data_csv = "kind,label,dim1,dim2\n";
    for (const auto& p : rows)
      data_csv += "row," + p.label + "," + format_double(p.x) + "," +
                  format_double(p.y) + "\n";
    for (const auto& p : cols)
      data_csv += "column," + p.label + "," + format_double(p.x) + "," +
                  format_double(p.y) + "\n";
    for (const auto& a : arrows)
      data_csv += "supplementary," + a.label + "," + format_double(a.dx) +
                  "," + format_double(a.dy) + "\n";
    emit(result, opts, "ca_biplot.svg",
         svg::render_biplot("Correspondence analysis biplot", xl, yl, rows,
                            cols, arrows, data_csv));
  } else {
    result.warnings.push_back(
        "biplot skipped: correspondence analysis has fewer than 2 dimensions");
  }
  return result;
}

RunResult cmd_correlate(const fs::path& survey_csv, const fs::path& tpa_csv,
                        const Options& opts) {
  StudyConfig cfg = load_config(opts.config_path);
  double alpha = opts.alpha.value_or(cfg.significance_alpha);
  RunResult result;

  auto records = load_survey(survey_csv, cfg);
  auto tpa_map = read_tpa_csv(tpa_csv);
  std::vector<std::string> burgers;
  for (const auto& b : survey::burger_ids(records))
    if (tpa_map.count(b)) burgers.push_back(b);
  if (burgers.size() < 3)
    throw Error(ErrorCode::TooFewPoints,
                "correlation screen needs at least 3 burgers present in both "
                "the survey and the TPA table");

  std::array<std::vector<double>, 6> params;
  for (const auto& b : burgers) {
    const auto& values = tpa_map.at(b);
    for (size_t p = 0; p < 6; ++p) params[p].push_back(values[p]);
  }

  struct Attribute {
    std::string family;
    std::string name;
    std::vector<double> values;
  };
  std::vector<Attribute> attributes;
  for (const auto& attr : cfg.cata_vocabulary)
    attributes.push_back(
        {"cata", attr, survey::cata_counts_by_burger(records, attr, burgers)});
  for (const auto& attr : cfg.likert_attributes) {
    survey::LikertSummary summary = survey::likert_summary(records, attr, cfg);
    std::map<std::string, double> means;
    for (const auto& row : summary.rows) means[row.burger_id] = row.mean;
    std::vector<double> values;
    for (const auto& b : burgers) values.push_back(means.at(b));
    attributes.push_back({"likert", attr, std::move(values)});
  }

  size_t cata_tests = 6 * cfg.cata_vocabulary.size();
  size_t likert_tests = 6 * cfg.likert_attributes.size();

  std::string csv = "family,parameter,attribute,n,r,p_value,significant,family_size\n";
  for (size_t p = 0; p < 6; ++p) {
    for (const auto& attr : attributes) {
      size_t family_size = attr.family == "cata" ? cata_tests : likert_tests;
      std::string prefix = attr.family + "," + tpa::kParameterNames[p] + "," +
                           attr.name + "," + std::to_string(burgers.size());
      try {
        auto corr = inference::pearson(params[p], attr.values, alpha);
        csv += prefix + "," + format_double(corr.r) + "," +
               format_double(corr.p_value) + "," +
               (corr.significant ? "true" : "false") + "," +
               std::to_string(family_size) + "\n";
        if (corr.significant) {
          std::vector<svg::LabeledPoint> points;
          std::string data_csv = "burger_id,x,y\n";
          for (size_t i = 0; i < burgers.size(); ++i) {
            points.push_back({params[p][i], attr.values[i], burgers[i]});
            data_csv += burgers[i] + "," + format_double(params[p][i]) + "," +
                        format_double(attr.values[i]) + "\n";
          }
          double sx = sample_sd(params[p]), sy = sample_sd(attr.values);
          double slope = corr.r * sy / sx;
          double intercept = mean(attr.values) - slope * mean(params[p]);
          char ann[96];
          std::snprintf(ann, sizeof(ann), "r = %.3f, p = %.4f, n = %zu",
                        corr.r, corr.p_value, burgers.size());
          std::string name = "scatter_" +
                             sanitize(tpa::kParameterNames[p]) + "_" +
                             sanitize(attr.name) + ".svg";
          emit(result, opts, name,
               svg::render_scatter(std::string(tpa::kParameterNames[p]) +
                                       " vs " + attr.name,
                                   tpa::kParameterNames[p], attr.name, points,
                                   slope, intercept, ann, data_csv));
        }
      } catch (const Error& e) {
        if (e.code() != ErrorCode::ZeroVariance) throw;
        csv += prefix + ",,,false," + std::to_string(family_size) + "\n";
        result.warnings.push_back("skipped " +
                                  std::string(tpa::kParameterNames[p]) + " vs " +
                                  attr.name + ": " + e.message());
      }
    }
  }
  emit(result, opts, "correlations.csv", csv);
  return result;
}

RunResult cmd_lmm(const fs::path& survey_csv, const Options& opts,
                  const std::string& response,
                  const std::vector<std::string>& predictors) {
  StudyConfig cfg = load_config(opts.config_path);
  RunResult result;
  auto records = load_survey(survey_csv, cfg);
  if (predictors.empty())
    throw Error(ErrorCode::ConfigInvalid, "need at least one predictor");

  survey::RatingsMatrix resp_raw =
      survey::ratings_matrix(records, response, cfg);
  survey::RatingsMatrix resp_z = survey::zscore(resp_raw);
  std::vector<survey::RatingsMatrix> pred_raw, pred_z;
  for (const auto& q : predictors) {
    pred_raw.push_back(survey::ratings_matrix(records, q, cfg));
    pred_z.push_back(survey::zscore(pred_raw.back()));
  }

  long n = static_cast<long>(records.size());
  inference::LmmData data;
  data.predictor_names = predictors;
  data.response.resize(n);
  data.predictors.resize(n, static_cast<long>(predictors.size()));
  for (long i = 0; i < n; ++i) {
    data.participant.push_back(records[static_cast<size_t>(i)].participant_id);
    data.response(i) = resp_z.observations[static_cast<size_t>(i)].value;
    for (size_t p = 0; p < predictors.size(); ++p)
      data.predictors(i, static_cast<long>(p)) =
          pred_z[p].observations[static_cast<size_t>(i)].value;
  }

  inference::LmmFit fit = inference::fit_lmm(data, opts.method);
  fit.response_transform = *resp_z.transform;
  for (const auto& m : pred_z) fit.predictor_transforms.push_back(*m.transform);
  if (fit.identifiability_limited)
    result.warnings.push_back(
        "every participant has a single observation; the random-intercept "
        "variance is not identifiable and was set to 0");

  // Long-form ratings with the standardization actually used by the fit.
  for (size_t q = 0; q <= predictors.size(); ++q) {
    const auto& raw = q == 0 ? resp_raw : pred_raw[q - 1];
    const auto& z = q == 0 ? resp_z : pred_z[q - 1];
    std::string csv = "participant_id,burger_id,raw,z\n";
    for (size_t i = 0; i < raw.observations.size(); ++i)
      csv += raw.observations[i].participant_id + "," +
             raw.observations[i].burger_id + "," +
             format_double(raw.observations[i].value) + "," +
             format_double(z.observations[i].value) + "\n";
    emit(result, opts, "ratings_" + sanitize(raw.question) + ".csv", csv);
  }

  {
    std::string csv = "term,value,se\n";
    auto add = [&](const std::string& term, const std::string& value,
                   const std::string& se) {
      csv += term + "," + value + "," + se + "\n";
    };
    add("intercept", format_double(fit.beta(0)), format_double(fit.se(0)));
    for (size_t p = 0; p < predictors.size(); ++p)
      add("beta_" + predictors[p], format_double(fit.beta(p + 1)),
          format_double(fit.se(p + 1)));
    // Raw-scale slope implied by the standardized coefficient.
    for (size_t p = 0; p < predictors.size(); ++p) {
      double slope = fit.beta(p + 1) * resp_z.transform->sd /
                     pred_z[p].transform->sd;
      add("raw_slope_" + predictors[p], format_double(slope), "");
    }
    add("sigma_u2", format_double(fit.sigma_u2), "");
    add("sigma2", format_double(fit.sigma2), "");
    add("log_likelihood", format_double(fit.loglik), "");
    add("log_lambda", format_double(fit.log_lambda), "");
    add("method",
        fit.method == inference::LmmMethod::Reml ? "reml" : "ml", "");
    add("n_observations", std::to_string(fit.n_observations), "");
    add("n_participants", std::to_string(fit.n_participants), "");
    add("converged", fit.converged ? "true" : "false", "");
    add("iterations", std::to_string(fit.iterations), "");
    emit(result, opts, "lmm_" + sanitize(response) + ".csv", csv);
  }

  if (predictors.size() == 2) {
    // Predicted response over the raw predictor grid, one line per level of
    // the first predictor.
    auto raw_range = [&](const survey::RatingsMatrix& m) {
      double lo = m.observations.front().value, hi = lo;
      for (const auto& o : m.observations) {
        lo = std::min(lo, o.value);
        hi = std::max(hi, o.value);
      }
      return std::pair{static_cast<int>(std::floor(lo)),
                       static_cast<int>(std::ceil(hi))};
    };
    auto [lo1, hi1] = raw_range(pred_raw[0]);
    auto [lo2, hi2] = raw_range(pred_raw[1]);
    std::vector<svg::Series> series;
    std::string data_csv = predictors[0] + "," + predictors[1] + "," +
                           response + ",ci_low,ci_high\n";
    for (int l1 = lo1; l1 <= hi1; ++l1) {
      svg::Series ser;
      ser.name = predictors[0] + " = " + std::to_string(l1);
      for (int l2 = lo2; l2 <= hi2; ++l2) {
        std::array<double, 2> x = {static_cast<double>(l1),
                                   static_cast<double>(l2)};
        auto pred = inference::lmm_predict(fit, x, true, cfg.ci_level, true);
        ser.points.push_back({static_cast<double>(l2), pred.value, ""});
        data_csv += std::to_string(l1) + "," + std::to_string(l2) + "," +
                    format_double(pred.value) + "," +
                    format_double(pred.ci_low) + "," +
                    format_double(pred.ci_high) + "\n";
      }
      series.push_back(std::move(ser));
    }
    emit(result, opts, "lmm_" + sanitize(response) + "_surface.svg",
         svg::render_lines("Predicted " + response + " (population level)",
                           predictors[1], response, series, data_csv));
  }
  return result;
}

RunResult cmd_report(const fs::path& curves_dir, const fs::path& survey_csv,
                     const Options& opts) {
  StudyConfig cfg = load_config(opts.config_path);
  RunResult result;
  auto absorb = [&](RunResult stage) {
    result.outputs.insert(result.outputs.end(), stage.outputs.begin(),
                          stage.outputs.end());
    result.warnings.insert(result.warnings.end(), stage.warnings.begin(),
                           stage.warnings.end());
  };

  absorb(cmd_tpa(curves_dir, opts));
  fs::path tpa_csv = opts.out_dir / "tpa_parameters.csv";
  absorb(cmd_ca(survey_csv, tpa_csv, opts));
  absorb(cmd_correlate(survey_csv, tpa_csv, opts));
  absorb(cmd_lmm(survey_csv, opts, "overall_liking",
                 {"flavor_liking", "texture_liking"}));
  absorb(cmd_lmm(survey_csv, opts, "texture_liking", cfg.likert_attributes));

  {
    auto records = load_survey(survey_csv, cfg);
    std::vector<std::string> questions = {"overall_liking", "flavor_liking",
                                          "texture_liking"};
    questions.insert(questions.end(), cfg.likert_attributes.begin(),
                     cfg.likert_attributes.end());
    std::string csv = "question,burger_id,mean,sd,count\n";
    for (const auto& q : questions) {
      survey::LikertSummary summary = survey::likert_summary(records, q, cfg);
      for (const auto& row : summary.rows)
        csv += q + "," + row.burger_id + "," + format_double(row.mean) + "," +
               format_double(row.sd) + "," + std::to_string(row.count) + "\n";
    }
    emit(result, opts, "likert_summary.csv", csv);
  }

  // The two mixed models can emit the same ratings file; keep one entry.
  std::sort(result.outputs.begin(), result.outputs.end());
  result.outputs.erase(std::unique(result.outputs.begin(), result.outputs.end()),
                       result.outputs.end());

  nlohmann::json manifest;
  manifest["tool_version"] = kToolVersion;
  manifest["subcommand"] = "report";
  manifest["timestamp_utc"] = iso8601_utc_now();
  manifest["config"] = {
      {"path", opts.config_path.string()},
      {"sha256", sha256_hex(csvio::read_file(opts.config_path))}};
  nlohmann::json inputs = nlohmann::json::array();
  std::vector<fs::path> input_files = {survey_csv};
  if (fs::is_directory(curves_dir)) {
    std::vector<fs::path> found;
    for (const auto& entry : fs::recursive_directory_iterator(curves_dir))
      if (entry.is_regular_file() && entry.path().extension() == ".csv")
        found.push_back(entry.path());
    std::sort(found.begin(), found.end());
    input_files.insert(input_files.end(), found.begin(), found.end());
  }
  for (const auto& path : input_files)
    inputs.push_back({{"path", path.string()},
                      {"sha256", sha256_hex(csvio::read_file(path))}});
  manifest["inputs"] = inputs;
  nlohmann::json outputs = nlohmann::json::array();
  for (const auto& rel : result.outputs)
    outputs.push_back(
        {{"path", rel.generic_string()},
         {"sha256", sha256_hex(csvio::read_file(opts.out_dir / rel))}});
  manifest["outputs"] = outputs;
  emit(result, opts, "manifest.json", manifest.dump(2) + "\n");
  return result;
}

RunResult cmd_synth_curve(const fs::path& spec_path, const fs::path& out_dir,
                          std::optional<std::uint64_t> seed) {
  std::map<std::string, std::string> kv;
  for (auto& [k, v] :
       csvio::parse_flat_kv(csvio::read_file(spec_path), spec_path.string()))
    kv[k] = v;
  const std::string src = spec_path.string();

  synth::SyntheticCurveSpec base;
  base.protocol.strain_amplitude =
      flat_kv_double(kv, "strain_amplitude", -0.5, src);
  base.protocol.strain_rate = flat_kv_double(kv, "strain_rate", -0.25, src);
  base.protocol.specimen_height_mm =
      flat_kv_double(kv, "specimen_height_mm", 10.0, src);
  base.protocol.specimen_diameter_mm =
      flat_kv_double(kv, "specimen_diameter_mm", 8.0, src);
  base.peak_force_1 = flat_kv_double(kv, "peak_force_1", 10.0, src);
  base.cycle2_scale = flat_kv_double(kv, "cycle2_scale", 0.9, src);
  base.upstroke_ratio = flat_kv_double(kv, "upstroke_ratio", 0.8, src);
  base.noise_sd = flat_kv_double(kv, "noise_sd", 0.0, src);
  base.sample_rate_hz = flat_kv_double(kv, "sample_rate_hz", 32.0, src);
  long burgers = flat_kv_long(kv, "burgers", 6, src);
  long samples = flat_kv_long(kv, "samples_per_burger", 10, src);
  double peak_step = flat_kv_double(kv, "peak_step", 0.5, src);
  std::uint64_t base_seed =
      seed.value_or(static_cast<std::uint64_t>(flat_kv_long(kv, "seed", 0, src)));
  if (burgers < 1 || samples < 1)
    throw Error(ErrorCode::ConfigInvalid,
                "burgers and samples_per_burger must be at least 1", src);

  Options opts;
  opts.out_dir = out_dir;
  RunResult result;
  std::string truth =
      "burger_id,peak_force_1,cycle2_scale,upstroke_ratio,stiffness_N_per_mm,"
      "hardness_N,cohesiveness,springiness,resilience,chewiness_N\n";
  for (long b = 0; b < burgers; ++b) {
    synth::SyntheticCurveSpec spec = base;
    spec.peak_force_1 = base.peak_force_1 * (1.0 + peak_step * b);
    spec.cycle2_scale =
        std::clamp(base.cycle2_scale * (1.0 - 0.07 * b), 0.05, 1.0);
    spec.upstroke_ratio =
        std::clamp(base.upstroke_ratio * (1.0 - 0.09 * b), 0.05, 1.0);
    char burger_name[32];
    std::snprintf(burger_name, sizeof(burger_name), "burger_%02ld", b + 1);

    tpa::TpaParameters expected;
    for (long s = 0; s < samples; ++s) {
      spec.seed = base_seed + static_cast<std::uint64_t>(b) * 1000 +
                  static_cast<std::uint64_t>(s);
      auto [curve, truth_params] = synth::gen_curve(spec);
      expected = truth_params;
      curve.burger_id = burger_name;
      char sample_name[32];
      std::snprintf(sample_name, sizeof(sample_name), "sample_%02ld", s + 1);
      curve.sample_id = sample_name;
      emit(result, opts,
           fs::path("curves") / burger_name / (std::string(sample_name) + ".csv"),
           ingest::serialize_curve(curve));
    }
    truth += std::string(burger_name) + "," + format_double(spec.peak_force_1) +
             "," + format_double(spec.cycle2_scale) + "," +
             format_double(spec.upstroke_ratio);
    for (double v : expected.as_array()) truth += "," + format_double(v);
    truth += "\n";
  }
  emit(result, opts, "truth.csv", truth);
  return result;
}

RunResult cmd_synth_survey(const fs::path& spec_path, const fs::path& out_dir,
                           std::optional<std::uint64_t> seed) {
  std::map<std::string, std::string> kv;
  for (auto& [k, v] :
       csvio::parse_flat_kv(csvio::read_file(spec_path), spec_path.string()))
    kv[k] = v;
  const std::string src = spec_path.string();

  synth::SyntheticSurveySpec spec;
  spec.participants = static_cast<int>(flat_kv_long(kv, "participants", 20, src));
  spec.burgers = static_cast<int>(flat_kv_long(kv, "burgers", 6, src));
  spec.beta0 = flat_kv_double(kv, "beta0", 0.0, src);
  spec.beta1 = flat_kv_double(kv, "beta1", 0.6, src);
  spec.beta2 = flat_kv_double(kv, "beta2", 0.3, src);
  spec.sigma_u = flat_kv_double(kv, "sigma_u", 0.5, src);
  spec.sigma = flat_kv_double(kv, "sigma", 0.5, src);
  spec.seed =
      seed.value_or(static_cast<std::uint64_t>(flat_kv_long(kv, "seed", 0, src)));

  StudyConfig cfg = StudyConfig::defaults();
  size_t n_cells = static_cast<size_t>(spec.burgers) * cfg.cata_vocabulary.size();
  spec.cata_probabilities.resize(n_cells);
  for (size_t cell = 0; cell < n_cells; ++cell) {
    std::uint64_t bits = synth::splitmix64(spec.seed ^ 0xCA7A5EEDULL, cell);
    double u = static_cast<double>(bits >> 11) * 0x1.0p-53;
    spec.cata_probabilities[cell] = 0.05 + 0.9 * u;
  }

  auto [records, truth] = synth::gen_survey(spec);

  Options opts;
  opts.out_dir = out_dir;
  RunResult result;
  emit(result, opts, "survey.csv", ingest::serialize_survey(records, cfg));

  std::string truth_csv = "kind,key,value\n";
  auto add = [&](const std::string& kind, const std::string& key, double v) {
    truth_csv += kind + "," + key + "," + format_double(v) + "\n";
  };
  add("beta", "beta0", truth.beta0);
  add("beta", "beta1_flavor", truth.beta1);
  add("beta", "beta2_texture", truth.beta2);
  add("sd", "sigma_u", truth.sigma_u);
  add("sd", "sigma", truth.sigma);
  for (size_t i = 0; i < truth.participant_intercepts.size(); ++i) {
    char name[16];
    std::snprintf(name, sizeof(name), "p%04zu", i + 1);
    add("intercept", name, truth.participant_intercepts[i]);
  }
  for (int b = 0; b < spec.burgers; ++b)
    for (size_t a = 0; a < cfg.cata_vocabulary.size(); ++a) {
      char name[64];
      std::snprintf(name, sizeof(name), "burger_%02d|%s", b + 1,
                    cfg.cata_vocabulary[a].c_str());
      add("cata_probability", name,
          truth.cata_probabilities[static_cast<size_t>(b) *
                                       cfg.cata_vocabulary.size() +
                                   a]);
    }
  emit(result, opts, "truth.csv", truth_csv);
  return result;
}

}  // namespace texturalyze::report
