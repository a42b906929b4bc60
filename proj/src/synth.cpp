#include "texturalyze/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>

#include "texturalyze/common.hpp"
#include "texturalyze/ingest.hpp"

namespace texturalyze::synth {

std::uint64_t splitmix64(std::uint64_t seed, std::uint64_t counter) {
  std::uint64_t z = seed + (counter + 1) * 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double Rng::next_unit() {
  // (0, 1]: never returns 0 so logs and Bernoulli(p = 0) behave.
  return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
}

double Rng::next_gauss(double mean, double sd) {
  double u1 = next_unit();
  double u2 = next_unit();
  double z = std::sqrt(-2.0 * std::log(u1)) *
             std::cos(2.0 * 3.141592653589793238462643383279502884 * u2);
  return mean + sd * z;
}

int Rng::next_int(int lo, int hi) {
  std::uint64_t range = static_cast<std::uint64_t>(hi - lo) + 1;
  return lo + static_cast<int>(next_u64() % range);
}

std::pair<CurveFile, tpa::TpaParameters> gen_curve(
    const SyntheticCurveSpec& spec) {
  if (!(spec.peak_force_1 > 0.0))
    throw Error(ErrorCode::ConfigInvalid, "peak_force_1 must be positive");
  if (!(spec.cycle2_scale > 0.0 && spec.cycle2_scale <= 1.0))
    throw Error(ErrorCode::ConfigInvalid, "cycle2_scale must be in (0, 1]");
  if (!(spec.upstroke_ratio > 0.0 && spec.upstroke_ratio <= 1.0))
    throw Error(ErrorCode::ConfigInvalid, "upstroke_ratio must be in (0, 1]");
  if (!(spec.sample_rate_hz > 0.0))
    throw Error(ErrorCode::ConfigInvalid, "sample_rate_hz must be positive");

  const double peak = spec.peak_force_1;
  const double scale2 = spec.cycle2_scale;
  const double rho = spec.upstroke_ratio;
  const double half = spec.protocol.downstroke_duration_s();
  const double cycle = spec.protocol.cycle_duration_s();
  const double total = 2.0 * cycle;
  const double height = spec.protocol.specimen_height_mm
                            ? *spec.protocol.specimen_height_mm
                            : throw Error(ErrorCode::MissingConfigKey,
                                          "specimen_height_mm is required");

  auto force_at = [&](double t) -> double {
    int k = t < cycle ? 0 : 1;
    double local = t - k * cycle;
    double amp = peak * (k == 0 ? 1.0 : scale2);
    if (local <= half) return amp * local / half;
    return std::max(0.0, amp * (1.0 - (local - half) / (rho * half)));
  };

  // Uniform grid plus the exact kink times, so the trapezoidal rule is exact
  // on every cell of the piecewise-linear profile.
  std::set<double> times;
  long n_grid = std::lround(total * spec.sample_rate_hz);
  for (long i = 0; i <= n_grid; ++i)
    times.insert(std::min(total, static_cast<double>(i) / spec.sample_rate_hz));
  for (double kink : {half, half * (1.0 + rho), cycle, cycle + half,
                      cycle + half * (1.0 + rho), total})
    if (kink <= total) times.insert(kink);

  CurveFile curve;
  curve.burger_id = "synthetic";
  curve.sample_id = "synthetic";
  Rng rng(spec.seed);
  double prev = -1.0;
  for (double t : times) {
    if (t - prev < 1e-12) continue;  // collapse kinks that land on the grid
    prev = t;
    double f = force_at(t);
    if (spec.noise_sd > 0.0) f += rng.next_gauss(0.0, spec.noise_sd);
    curve.rows.push_back({t, f});
  }

  tpa::TpaParameters expected;
  expected.hardness_n = peak;
  expected.cohesiveness = scale2;
  expected.springiness = 1.0;
  expected.resilience = rho;
  expected.stiffness_n_per_mm =
      peak / (std::abs(spec.protocol.strain_amplitude) * height);
  expected.chewiness_n =
      expected.hardness_n * expected.cohesiveness * expected.springiness;
  return {std::move(curve), expected};
}

std::pair<std::vector<SurveyRecord>, SurveyTruth> gen_survey(
    const SyntheticSurveySpec& spec) {
  if (spec.participants < 1 || spec.burgers < 1)
    throw Error(ErrorCode::ConfigInvalid,
                "participants and burgers must be at least 1");
  if (spec.sigma_u < 0.0 || spec.sigma < 0.0)
    throw Error(ErrorCode::ConfigInvalid, "standard deviations must be >= 0");

  auto defaults = StudyConfig::defaults();
  const auto& vocab =
      spec.cata_vocabulary.empty() ? defaults.cata_vocabulary : spec.cata_vocabulary;
  const auto& attrs = spec.likert_attributes.empty() ? defaults.likert_attributes
                                                     : spec.likert_attributes;

  size_t n_cells = static_cast<size_t>(spec.burgers) * vocab.size();
  std::vector<double> probs = spec.cata_probabilities;
  if (probs.empty()) probs.assign(n_cells, 0.0);
  if (probs.size() != n_cells)
    throw Error(ErrorCode::LengthMismatch,
                "cata_probabilities must have burgers x vocabulary entries");
  for (double p : probs)
    if (!(p >= 0.0 && p <= 1.0))
      throw Error(ErrorCode::ConfigInvalid,
                  "cata_probabilities must lie in [0, 1]");

  auto participant_name = [&](int i) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "p%04d", i + 1);
    return std::string(buf);
  };
  auto burger_name = [&](int j) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "burger_%02d", j + 1);
    return std::string(buf);
  };

  Rng rng(spec.seed);
  SurveyTruth truth;
  truth.beta0 = spec.beta0;
  truth.beta1 = spec.beta1;
  truth.beta2 = spec.beta2;
  truth.sigma_u = spec.sigma_u;
  truth.sigma = spec.sigma;
  truth.cata_probabilities = probs;
  truth.participant_intercepts.reserve(spec.participants);
  for (int i = 0; i < spec.participants; ++i)
    truth.participant_intercepts.push_back(rng.next_gauss(0.0, spec.sigma_u));

  std::vector<SurveyRecord> records;
  records.reserve(static_cast<size_t>(spec.participants) * spec.burgers);
  for (int i = 0; i < spec.participants; ++i) {
    for (int j = 0; j < spec.burgers; ++j) {
      SurveyRecord rec;
      rec.participant_id = participant_name(i);
      rec.burger_id = burger_name(j);
      rec.flavor_liking = rng.next_int(2, 6);
      rec.texture_liking = rng.next_int(2, 6);
      double eps = rng.next_gauss(0.0, spec.sigma);
      double latent = spec.beta0 + spec.beta1 * rec.flavor_liking +
                      spec.beta2 * rec.texture_liking +
                      truth.participant_intercepts[static_cast<size_t>(i)] + eps;
      truth.latent_response.push_back(latent);
      rec.overall_liking =
          static_cast<int>(std::clamp(std::lround(latent), 1L, 7L));
      rec.attribute_ratings.reserve(attrs.size());
      for (size_t a = 0; a < attrs.size(); ++a)
        rec.attribute_ratings.push_back(rng.next_int(1, 5));
      std::vector<std::string> selected;
      for (size_t a = 0; a < vocab.size(); ++a) {
        double p = probs[static_cast<size_t>(j) * vocab.size() + a];
        if (rng.next_unit() <= p) selected.push_back(vocab[a]);
      }
      std::sort(selected.begin(), selected.end());
      rec.cata_selections = std::move(selected);
      records.push_back(std::move(rec));
    }
  }
  return {std::move(records), std::move(truth)};
}

}  // namespace texturalyze::synth
