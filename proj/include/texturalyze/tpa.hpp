#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

#include "texturalyze/types.hpp"

namespace texturalyze::tpa {

struct CycleBounds {
  long start_idx = 0;  // downstroke: [start_idx, peak_idx]
  long peak_idx = 0;   // upstroke:   [peak_idx, end_idx]
  long end_idx = 0;
};

struct CycleSegmentation {
  std::vector<CycleBounds> cycles;  // exactly protocol.n_cycles entries
};

// The six mechanical descriptors. chewiness is always the exact product
// hardness * cohesiveness * springiness.
struct TpaParameters {
  double stiffness_n_per_mm = 0.0;
  double hardness_n = 0.0;
  double cohesiveness = 0.0;
  double springiness = 0.0;
  double resilience = 0.0;
  double chewiness_n = 0.0;
  std::vector<std::string> warnings;

  std::array<double, 6> as_array() const {
    return {stiffness_n_per_mm, hardness_n,  cohesiveness,
            springiness,        resilience,  chewiness_n};
  }
};

inline constexpr std::array<const char*, 6> kParameterNames = {
    "stiffness", "hardness", "cohesiveness", "springiness", "resilience",
    "chewiness"};

struct EnsembleCurve {
  std::vector<double> time_s;
  std::vector<double> mean_n;
  std::vector<double> ci_low_n;
  std::vector<double> ci_high_n;
  int n_samples = 0;
};

// Places cycle boundaries at the protocol's nominal turning points, then
// refines each to the nearest force extremum within a window of +-10% of
// the cycle duration.
CycleSegmentation segment_cycles(const CurveFile& curve,
                                 const CompressionProtocol& protocol);

TpaParameters compute_tpa(const CurveFile& curve, const CycleSegmentation& seg,
                          const CompressionProtocol& protocol);

// Resamples member curves onto a uniform grid over the common time range and
// forms pointwise means with two-sided t intervals (df = n - 1).
EnsembleCurve ensemble_stats(std::span<const CurveFile> curves,
                             double ci_level);

// The ensemble mean as a curve, for computing TPA on the mean trace.
CurveFile ensemble_mean_curve(const EnsembleCurve& ensemble,
                              std::string burger_id);

}  // namespace texturalyze::tpa
