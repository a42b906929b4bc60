#include "texturalyze/tpa.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "texturalyze/common.hpp"
#include "texturalyze/inference.hpp"

namespace texturalyze::tpa {

namespace {

// Fraction of the cycle duration searched around each nominal turning point.
constexpr double kRefineWindow = 0.10;

long index_at_or_after(const std::vector<CurvePoint>& rows, double t) {
  auto it = std::lower_bound(
      rows.begin(), rows.end(), t,
      [](const CurvePoint& p, double value) { return p.time_s < value; });
  return static_cast<long>(it - rows.begin());
}

// Extremum of force within [t_center - w, t_center + w]; among samples tied
// at the extreme value, the one closest to the nominal time wins.
long refine_extremum(const std::vector<CurvePoint>& rows, double t_center,
                     double w, bool maximum) {
  long lo = index_at_or_after(rows, t_center - w);
  long hi = index_at_or_after(rows, t_center + w);
  if (hi < static_cast<long>(rows.size()) &&
      rows[hi].time_s <= t_center + w)
    ++hi;
  lo = std::clamp(lo, 0L, static_cast<long>(rows.size()) - 1);
  hi = std::clamp(hi, lo + 1, static_cast<long>(rows.size()));
  long best = lo;
  for (long i = lo; i < hi; ++i) {
    double fi = rows[i].force_n, fb = rows[best].force_n;
    bool better = maximum ? fi > fb : fi < fb;
    bool tied = fi == fb;
    if (better ||
        (tied && std::fabs(rows[i].time_s - t_center) <
                     std::fabs(rows[best].time_s - t_center)))
      best = i;
  }
  return best;
}

double positive_force_area(const CurveFile& curve, long from, long to,
                           double speed_mm_s) {
  if (to <= from) return 0.0;
  std::vector<double> cells(static_cast<size_t>(to - from));
  for (long i = from; i < to; ++i) {
    double f0 = std::max(curve.rows[i].force_n, 0.0);
    double f1 = std::max(curve.rows[i + 1].force_n, 0.0);
    double dt = curve.rows[i + 1].time_s - curve.rows[i].time_s;
    cells[static_cast<size_t>(i - from)] = 0.5 * (f0 + f1) * dt;
  }
  return speed_mm_s * pairwise_sum(cells);
}

}  // namespace

CycleSegmentation segment_cycles(const CurveFile& curve,
                                 const CompressionProtocol& protocol) {
  const auto& rows = curve.rows;
  double t0 = rows.front().time_s;
  double duration = rows.back().time_s - t0;
  double cycle_s = protocol.cycle_duration_s();
  double half_s = protocol.downstroke_duration_s();
  int n_cycles = protocol.n_cycles;

  double nominal = n_cycles * cycle_s;
  if (std::fabs(duration - nominal) > 0.2 * nominal) {
    long detected = std::lround(duration / cycle_s);
    if (detected >= 1 && detected != n_cycles &&
        std::fabs(duration - detected * cycle_s) <= 0.2 * (detected * cycle_s))
      throw Error(ErrorCode::CycleCountMismatch,
                  "curve spans " + std::to_string(detected) +
                      " cycle(s), protocol expects " +
                      std::to_string(n_cycles));
    throw Error(ErrorCode::DurationMismatch,
                "curve duration " + format_double(duration) +
                    " s is inconsistent with " + std::to_string(n_cycles) +
                    " cycles of " + format_double(cycle_s) + " s");
  }

  double w = kRefineWindow * cycle_s;
  long last = static_cast<long>(rows.size()) - 1;

  std::vector<long> boundaries(static_cast<size_t>(n_cycles) + 1);
  boundaries.front() = 0;
  boundaries.back() = last;
  for (int k = 1; k < n_cycles; ++k)
    boundaries[static_cast<size_t>(k)] =
        refine_extremum(rows, t0 + k * cycle_s, w, /*maximum=*/false);

  CycleSegmentation seg;
  for (int k = 0; k < n_cycles; ++k) {
    CycleBounds bounds;
    bounds.start_idx = boundaries[static_cast<size_t>(k)];
    bounds.end_idx = boundaries[static_cast<size_t>(k) + 1];
    bounds.peak_idx =
        refine_extremum(rows, t0 + k * cycle_s + half_s, w, /*maximum=*/true);
    if (!(bounds.start_idx < bounds.peak_idx &&
          bounds.peak_idx < bounds.end_idx))
      throw Error(ErrorCode::CycleCountMismatch,
                  "cycle " + std::to_string(k + 1) +
                      " has no internal peak between its boundaries");
    seg.cycles.push_back(bounds);
  }
  return seg;
}

TpaParameters compute_tpa(const CurveFile& curve, const CycleSegmentation& seg,
                          const CompressionProtocol& protocol) {
  if (seg.cycles.size() < 2)
    throw Error(ErrorCode::CycleCountMismatch,
                "TPA needs two compression cycles");
  const CycleBounds& c1 = seg.cycles[0];
  const CycleBounds& c2 = seg.cycles[1];
  const auto& rows = curve.rows;
  double speed = protocol.crosshead_speed_mm_s();

  TpaParameters out;
  // Hardness: peak force during the first downstroke.
  double hardness = rows[c1.start_idx].force_n;
  for (long i = c1.start_idx; i <= c1.peak_idx; ++i)
    hardness = std::max(hardness, rows[i].force_n);
  if (!(hardness > 0.0))
    throw Error(ErrorCode::NonPositivePeak,
                "cycle-1 peak force is not positive");
  out.hardness_n = hardness;

  double area1 = positive_force_area(curve, c1.start_idx, c1.end_idx, speed);
  double area2 = positive_force_area(curve, c2.start_idx, c2.end_idx, speed);
  double down1 = positive_force_area(curve, c1.start_idx, c1.peak_idx, speed);
  double up1 = positive_force_area(curve, c1.peak_idx, c1.end_idx, speed);
  if (!(area1 > 0.0) || !(down1 > 0.0))
    throw Error(ErrorCode::DegenerateCycle,
                "cycle 1 has zero positive-force area");
  out.cohesiveness = area2 / area1;
  out.resilience = up1 / down1;

  double rise1 = rows[c1.peak_idx].time_s - rows[c1.start_idx].time_s;
  double rise2 = rows[c2.peak_idx].time_s - rows[c2.start_idx].time_s;
  if (!(rise1 > 0.0))
    throw Error(ErrorCode::DegenerateCycle, "cycle 1 has zero rise time");
  out.springiness = rise2 / rise1;

  // Stiffness: least-squares slope of force against displacement over the
  // 10%..40% band of the cycle-1 peak force; displacement is reconstructed
  // as crosshead speed times elapsed downstroke time.
  {
    double f_lo = 0.1 * hardness, f_hi = 0.4 * hardness;
    std::vector<double> xs, fs;
    for (long i = c1.start_idx; i <= c1.peak_idx; ++i) {
      double f = rows[i].force_n;
      if (f >= f_lo && f <= f_hi) {
        xs.push_back(speed * (rows[i].time_s - rows[c1.start_idx].time_s));
        fs.push_back(f);
      }
    }
    if (xs.size() >= 2) {
      double mx = mean(xs), mf = mean(fs);
      std::vector<double> xx(xs.size()), xf(xs.size());
      for (size_t i = 0; i < xs.size(); ++i) {
        xx[i] = (xs[i] - mx) * (xs[i] - mx);
        xf[i] = (xs[i] - mx) * (fs[i] - mf);
      }
      double sxx = pairwise_sum(xx);
      if (!(sxx > 0.0))
        throw Error(ErrorCode::DegenerateCycle,
                    "stiffness band has no displacement spread");
      out.stiffness_n_per_mm = pairwise_sum(xf) / sxx;
    } else {
      // Sparse sampling: secant through the interpolated band crossings.
      auto crossing_time = [&](double level) -> double {
        for (long i = c1.start_idx; i < c1.peak_idx; ++i) {
          double f0 = rows[i].force_n, f1 = rows[i + 1].force_n;
          if (f0 <= level && f1 >= level && f1 > f0) {
            double frac = (level - f0) / (f1 - f0);
            return rows[i].time_s + frac * (rows[i + 1].time_s - rows[i].time_s);
          }
        }
        return std::numeric_limits<double>::quiet_NaN();
      };
      double t10 = crossing_time(f_lo), t40 = crossing_time(f_hi);
      if (!std::isfinite(t10) || !std::isfinite(t40) || !(t40 > t10))
        throw Error(ErrorCode::DegenerateCycle,
                    "cannot locate the 10%..40% force band on cycle 1");
      out.stiffness_n_per_mm = (f_hi - f_lo) / (speed * (t40 - t10));
    }
  }

  out.chewiness_n = out.hardness_n * out.cohesiveness * out.springiness;

  for (auto [value, label] :
       {std::pair{out.cohesiveness, "cohesiveness"},
        std::pair{out.springiness, "springiness"},
        std::pair{out.resilience, "resilience"}})
    if (value > 1.2)
      out.warnings.push_back(std::string(label) + " = " +
                             format_double(value) +
                             " exceeds the typical bound of 1.2");
  return out;
}

EnsembleCurve ensemble_stats(std::span<const CurveFile> curves,
                             double ci_level) {
  if (curves.size() < 2)
    throw Error(ErrorCode::InsufficientSamples,
                "ensemble statistics need at least 2 curves, got " +
                    std::to_string(curves.size()));
  double lo = curves[0].rows.front().time_s;
  double hi = curves[0].rows.back().time_s;
  size_t grid_n = curves[0].rows.size();
  for (const auto& c : curves) {
    lo = std::max(lo, c.rows.front().time_s);
    hi = std::min(hi, c.rows.back().time_s);
    grid_n = std::max(grid_n, c.rows.size());
  }
  if (!(hi > lo))
    throw Error(ErrorCode::NoTimeOverlap, "curves share no time range");

  size_t n = curves.size();
  EnsembleCurve out;
  out.n_samples = static_cast<int>(n);
  out.time_s.resize(grid_n);
  out.mean_n.resize(grid_n);
  out.ci_low_n.resize(grid_n);
  out.ci_high_n.resize(grid_n);

  double quantile = inference::t_quantile(1.0 - 0.5 * (1.0 - ci_level),
                                          static_cast<double>(n - 1));
  std::vector<double> values(n);
  for (size_t k = 0; k < grid_n; ++k) {
    double t = lo + (hi - lo) * static_cast<double>(k) /
                        static_cast<double>(grid_n - 1);
    out.time_s[k] = t;
    for (size_t c = 0; c < n; ++c) {
      const auto& rows = curves[c].rows;
      auto it = std::lower_bound(
          rows.begin(), rows.end(), t,
          [](const CurvePoint& p, double v) { return p.time_s < v; });
      if (it == rows.begin()) {
        values[c] = it->force_n;
      } else if (it == rows.end()) {
        values[c] = rows.back().force_n;
      } else {
        const CurvePoint& b = *it;
        const CurvePoint& a = *(it - 1);
        double frac = (t - a.time_s) / (b.time_s - a.time_s);
        values[c] = a.force_n + frac * (b.force_n - a.force_n);
      }
    }
    auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
    if (*lo_it == *hi_it) {
      // Identical samples: zero-width interval, bit-exactly.
      out.mean_n[k] = *lo_it;
      out.ci_low_n[k] = *lo_it;
      out.ci_high_n[k] = *lo_it;
      continue;
    }
    double m = mean(values);
    double half = quantile * sample_sd(values) / std::sqrt(static_cast<double>(n));
    out.mean_n[k] = m;
    out.ci_low_n[k] = m - half;
    out.ci_high_n[k] = m + half;
  }
  return out;
}

CurveFile ensemble_mean_curve(const EnsembleCurve& ensemble,
                              std::string burger_id) {
  CurveFile out;
  out.burger_id = std::move(burger_id);
  out.sample_id = "ensemble_mean";
  out.rows.reserve(ensemble.time_s.size());
  for (size_t i = 0; i < ensemble.time_s.size(); ++i)
    out.rows.push_back({ensemble.time_s[i], ensemble.mean_n[i]});
  return out;
}

}  // namespace texturalyze::tpa
