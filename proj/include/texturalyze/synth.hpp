#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "texturalyze/tpa.hpp"
#include "texturalyze/types.hpp"

namespace texturalyze::synth {

// splitmix64 as a pure function of (seed, counter): the same pair gives the
// same value on every platform.
std::uint64_t splitmix64(std::uint64_t seed, std::uint64_t counter);

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed) {}
  std::uint64_t next_u64() { return splitmix64(seed_, counter_++); }
  // Uniform in (0, 1], 53-bit resolution.
  double next_unit();
  // Box-Muller; consumes two uniforms per value.
  double next_gauss(double mean = 0.0, double sd = 1.0);
  // Uniform integer in [lo, hi].
  int next_int(int lo, int hi);

 private:
  std::uint64_t seed_;
  std::uint64_t counter_ = 0;
};

struct SyntheticCurveSpec {
  CompressionProtocol protocol;     // specimen_height_mm must be set
  double peak_force_1 = 10.0;       // N, > 0
  double cycle2_scale = 1.0;        // (0, 1], targets cohesiveness
  double upstroke_ratio = 1.0;      // (0, 1], targets resilience
  double noise_sd = 0.0;            // N, additive Gaussian on force
  double sample_rate_hz = 32.0;
  std::uint64_t seed = 0;
};

// Piecewise-linear double-compression profile with exact kink samples, so the
// trapezoidal areas (and therefore all six TPA values) have closed forms:
//   stiffness    = peak / (|amplitude| * height)
//   hardness     = peak
//   cohesiveness = cycle2_scale
//   springiness  = 1
//   resilience   = upstroke_ratio
//   chewiness    = peak * cycle2_scale
std::pair<CurveFile, tpa::TpaParameters> gen_curve(
    const SyntheticCurveSpec& spec);

struct SyntheticSurveySpec {
  int participants = 20;
  int burgers = 6;
  double beta0 = 0.0;   // overall = beta0 + beta1*flavor + beta2*texture + u + eps
  double beta1 = 0.6;
  double beta2 = 0.3;
  double sigma_u = 0.5;
  double sigma = 0.5;
  // burgers x vocabulary, row-major selection probabilities; empty means 0.
  std::vector<double> cata_probabilities;
  std::vector<std::string> cata_vocabulary;    // defaults when empty
  std::vector<std::string> likert_attributes;  // defaults when empty
  std::uint64_t seed = 0;
};

struct SurveyTruth {
  double beta0 = 0.0, beta1 = 0.0, beta2 = 0.0;
  double sigma_u = 0.0, sigma = 0.0;
  std::vector<double> participant_intercepts;  // realized u_i
  std::vector<double> latent_response;         // continuous z before rounding
  std::vector<double> cata_probabilities;      // as used, row-major
};

// Flavor and texture are uniform on {2..6}; overall liking follows the
// random-intercept model, rounded and clamped to 1..7. Attribute ratings are
// uniform on 1..5 and CATA selections are independent Bernoulli draws.
std::pair<std::vector<SurveyRecord>, SurveyTruth> gen_survey(
    const SyntheticSurveySpec& spec);

}  // namespace texturalyze::synth
