#include "texturalyze/inference.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "texturalyze/common.hpp"

namespace texturalyze::inference {

namespace {

constexpr double kFpMin = 1e-300;
constexpr double kCfEps = 1e-16;
constexpr int kCfMaxIter = 500;

// Continued fraction for the incomplete beta function, modified Lentz.
double betacf(double a, double b, double x) {
  double qab = a + b;
  double qap = a + 1.0;
  double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kFpMin) d = kFpMin;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kCfMaxIter; ++m) {
    int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kFpMin) d = kFpMin;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kFpMin) c = kFpMin;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kFpMin) d = kFpMin;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kFpMin) c = kFpMin;
    d = 1.0 / d;
    double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < kCfEps) return h;
  }
  return h;  // converged to working precision for all df >= 1 inputs long before
}

}  // namespace

double ibeta(double a, double b, double x) {
  if (!(a > 0.0) || !(b > 0.0) || !(x >= 0.0 && x <= 1.0))
    throw std::invalid_argument("ibeta: requires a, b > 0 and x in [0, 1]");
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;
  double lbt = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
               a * std::log(x) + b * std::log1p(-x);
  double bt = std::exp(lbt);
  if (x < (a + 1.0) / (a + b + 2.0)) return bt * betacf(a, b, x) / a;
  return 1.0 - bt * betacf(b, a, 1.0 - x) / b;
}

double t_cdf(double t, double df) {
  if (!(df >= 1.0)) throw std::invalid_argument("t_cdf: df must be >= 1");
  if (std::isnan(t)) return std::numeric_limits<double>::quiet_NaN();
  if (t == 0.0) return 0.5;
  if (std::isinf(t)) return t > 0 ? 1.0 : 0.0;
  // Two-sided tail mass P(|T| > |t|) through the incomplete beta.
  double x = df / (df + t * t);
  double tail = ibeta(0.5 * df, 0.5, x);
  return t > 0.0 ? 1.0 - 0.5 * tail : 0.5 * tail;
}

double t_quantile(double p, double df) {
  if (!(p > 0.0 && p < 1.0))
    throw std::invalid_argument("t_quantile: p must be in (0, 1)");
  if (p == 0.5) return 0.0;
  bool upper = p > 0.5;
  double target = upper ? p : 1.0 - p;
  double lo = 0.0, hi = 1.0;
  while (t_cdf(hi, df) < target && hi < 1e300) hi *= 2.0;
  for (int i = 0; i < 400; ++i) {
    double mid = 0.5 * (lo + hi);
    if (t_cdf(mid, df) < target)
      lo = mid;
    else
      hi = mid;
    if (hi - lo <= 1e-15 * std::max(1.0, std::fabs(lo))) break;
  }
  double q = 0.5 * (lo + hi);
  return upper ? q : -q;
}

double pearson_p_value(double r, int n) {
  double df = static_cast<double>(n - 2);
  double one_minus_r2 = (1.0 - r) * (1.0 + r);
  if (one_minus_r2 <= 0.0) return 0.0;
  double t2 = r * r * df / one_minus_r2;
  // 2 * (1 - t_cdf(|t|, df)) without the cancellation.
  return ibeta(0.5 * df, 0.5, df / (df + t2));
}

CorrelationResult pearson(std::span<const double> x, std::span<const double> y,
                          double alpha) {
  if (x.size() != y.size())
    throw Error(ErrorCode::LengthMismatch,
                "x has " + std::to_string(x.size()) + " values, y has " +
                    std::to_string(y.size()));
  size_t n = x.size();
  if (n < 3)
    throw Error(ErrorCode::TooFewPoints,
                "need at least 3 pairs, got " + std::to_string(n));

  double mx = mean(x), my = mean(y);
  std::vector<double> xx(n), yy(n), xy(n);
  for (size_t i = 0; i < n; ++i) {
    double dx = x[i] - mx, dy = y[i] - my;
    xx[i] = dx * dx;
    yy[i] = dy * dy;
    xy[i] = dx * dy;
  }
  double sxx = pairwise_sum(xx), syy = pairwise_sum(yy), sxy = pairwise_sum(xy);
  if (sxx <= 0.0 || syy <= 0.0)
    throw Error(ErrorCode::ZeroVariance,
                std::string(sxx <= 0.0 ? "x" : "y") + " is constant");

  CorrelationResult res;
  res.n = static_cast<int>(n);
  res.r = std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
  res.p_value = pearson_p_value(res.r, res.n);
  res.significant = res.p_value < alpha;
  return res;
}

namespace {

struct Group {
  std::vector<int> idx;
};

struct ProfilePoint {
  Eigen::VectorXd beta;
  Eigen::MatrixXd a;  // X' H^-1 X
  double q = 0.0;     // r' H^-1 r
  double logdet_h = 0.0;
  double sigma2 = 0.0;
  double loglik = 0.0;
};

// Profile evaluation in the centered form
//   X' H^-1 X = sum_g [ W_g + (c_g / n_g) s_g s_g' ],  c_g = 1 / (1 + lambda n_g)
// where W_g is the within-group centered cross-product. Every term is
// positive semidefinite, so nothing cancels even as lambda -> infinity where
// the intercept becomes confounded with the random effect.
class ProfileEvaluator {
 public:
  ProfileEvaluator(const Eigen::MatrixXd& x, const Eigen::VectorXd& z,
                   const std::vector<Group>& groups, LmmMethod method)
      : x_(x), z_(z), groups_(groups), method_(method) {
    long p = x.cols();
    for (const auto& g : groups_) {
      PerGroup pg;
      pg.n = static_cast<double>(g.idx.size());
      Eigen::MatrixXd xtx = Eigen::MatrixXd::Zero(p, p);
      Eigen::VectorXd xtz = Eigen::VectorXd::Zero(p);
      pg.xsum = Eigen::VectorXd::Zero(p);
      pg.zsum = 0.0;
      for (int i : g.idx) {
        Eigen::VectorXd xi = x.row(i).transpose();
        xtx += xi * xi.transpose();
        xtz += xi * z(i);
        pg.xsum += xi;
        pg.zsum += z(i);
      }
      pg.w_centered = xtx - (pg.xsum * pg.xsum.transpose()) / pg.n;
      pg.v_centered = xtz - pg.xsum * (pg.zsum / pg.n);
      per_group_.push_back(std::move(pg));
    }
  }

  // Returns a point with loglik = -inf instead of throwing when the system
  // degenerates at an extreme lambda; the search just avoids it.
  ProfilePoint eval(double lambda) const {
    long n = z_.size();
    long p = x_.cols();
    ProfilePoint pt;
    pt.a = Eigen::MatrixXd::Zero(p, p);
    Eigen::VectorXd b = Eigen::VectorXd::Zero(p);
    pt.logdet_h = 0.0;
    for (const auto& pg : per_group_) {
      double c = 1.0 / (1.0 + lambda * pg.n);
      pt.a += pg.w_centered + (c / pg.n) * (pg.xsum * pg.xsum.transpose());
      b += pg.v_centered + (c / pg.n) * pg.xsum * pg.zsum;
      pt.logdet_h += std::log1p(lambda * pg.n);
    }
    Eigen::LDLT<Eigen::MatrixXd> ldlt(pt.a);
    pt.beta = ldlt.solve(b);
    if (ldlt.info() != Eigen::Success || !pt.beta.allFinite()) {
      pt.loglik = -std::numeric_limits<double>::infinity();
      return pt;
    }

    Eigen::VectorXd r = z_ - x_ * pt.beta;
    pt.q = 0.0;
    for (size_t g = 0; g < groups_.size(); ++g) {
      double ng = per_group_[g].n;
      double c = 1.0 / (1.0 + lambda * ng);
      double rs = 0.0;
      for (int i : groups_[g].idx) rs += r(i);
      double rbar = rs / ng;
      double within = 0.0;
      for (int i : groups_[g].idx) within += (r(i) - rbar) * (r(i) - rbar);
      pt.q += within + c * ng * rbar * rbar;
    }
    if (pt.q < 1e-300) pt.q = 1e-300;

    constexpr double kLog2Pi = 1.8378770664093453;
    if (method_ == LmmMethod::Ml) {
      double nn = static_cast<double>(n);
      pt.sigma2 = pt.q / nn;
      pt.loglik =
          -0.5 * (nn * (kLog2Pi + std::log(pt.sigma2)) + pt.logdet_h + nn);
    } else {
      double np = static_cast<double>(n - p);
      pt.sigma2 = pt.q / np;
      double logdet_a = 0.0;
      for (long j = 0; j < p; ++j) {
        double d = ldlt.vectorD()(j);
        if (!(d > 0.0)) {
          pt.loglik = -std::numeric_limits<double>::infinity();
          return pt;
        }
        logdet_a += std::log(d);
      }
      pt.loglik = -0.5 * (np * (kLog2Pi + std::log(pt.sigma2)) + pt.logdet_h +
                          logdet_a + np);
    }
    if (!std::isfinite(pt.loglik))
      pt.loglik = -std::numeric_limits<double>::infinity();
    return pt;
  }

 private:
  struct PerGroup {
    double n;
    Eigen::VectorXd xsum;
    double zsum;
    Eigen::MatrixXd w_centered;  // X'X - ss'/n
    Eigen::VectorXd v_centered;  // X'z - s (sum z)/n
  };
  const Eigen::MatrixXd& x_;
  const Eigen::VectorXd& z_;
  const std::vector<Group>& groups_;
  LmmMethod method_;
  std::vector<PerGroup> per_group_;
};

void check_design(const Eigen::MatrixXd& x,
                  const std::vector<std::string>& names) {
  long n = x.rows(), p = x.cols();
  if (n <= p)
    throw Error(ErrorCode::SingularDesign,
                "need more observations than fixed effects");
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(x);
  qr.setThreshold(1e-10);
  if (qr.rank() == p) return;

  // Distinguish pairwise-collinear predictors from other rank defects.
  for (long j = 1; j < p; ++j) {
    Eigen::VectorXd cj = x.col(j);
    double mj = cj.mean();
    double vj = (cj.array() - mj).square().sum();
    if (vj <= 1e-12 * std::max(1.0, mj * mj) * n)
      throw Error(ErrorCode::CollinearPredictors,
                  "predictor '" + names[j - 1] + "' is constant");
    for (long k = j + 1; k < p; ++k) {
      Eigen::VectorXd ck = x.col(k);
      double mk = ck.mean();
      double vk = (ck.array() - mk).square().sum();
      if (vk <= 0) continue;
      double cov = ((cj.array() - mj) * (ck.array() - mk)).sum();
      if (cov * cov >= (1.0 - 1e-10) * vj * vk)
        throw Error(ErrorCode::CollinearPredictors,
                    "predictors '" + names[j - 1] + "' and '" + names[k - 1] +
                        "' are collinear");
    }
  }
  throw Error(ErrorCode::SingularDesign, "design matrix is rank deficient");
}

}  // namespace

LmmFit fit_lmm(const LmmData& data, LmmMethod method) {
  long n = data.response.size();
  if (data.predictors.rows() != n ||
      static_cast<long>(data.participant.size()) != n)
    throw Error(ErrorCode::LengthMismatch,
                "predictors, response, and participant ids must align");
  long p_pred = data.predictors.cols();
  if (static_cast<long>(data.predictor_names.size()) != p_pred)
    throw Error(ErrorCode::LengthMismatch,
                "predictor_names must match the predictor count");
  long p = p_pred + 1;

  std::map<std::string, Group> by_participant;
  for (long i = 0; i < n; ++i)
    by_participant[data.participant[i]].idx.push_back(static_cast<int>(i));
  if (by_participant.size() < 2)
    throw Error(ErrorCode::SingularDesign, "need at least 2 participants");

  Eigen::MatrixXd x(n, p);
  x.col(0).setOnes();
  x.rightCols(p_pred) = data.predictors;
  check_design(x, data.predictor_names);

  std::vector<Group> groups;
  std::vector<std::string> labels;
  size_t max_group = 0;
  for (auto& [label, g] : by_participant) {
    max_group = std::max(max_group, g.idx.size());
    labels.push_back(label);
    groups.push_back(std::move(g));
  }

  ProfileEvaluator evaluator(x, data.response, groups, method);

  LmmFit fit;
  fit.method = method;
  fit.predictor_names = data.predictor_names;
  fit.participants = labels;
  fit.n_observations = n;
  fit.n_participants = static_cast<long>(groups.size());

  double lambda_hat = 0.0;
  if (max_group < 2) {
    // One observation per participant: sigma_u is not identifiable, fall
    // back to OLS and say so.
    fit.identifiability_limited = true;
    fit.converged = true;
    fit.iterations = 0;
    fit.log_lambda = -std::numeric_limits<double>::infinity();
  } else {
    double lo = -30.0, hi = 30.0;
    double best_l = 0.0, best_f = -std::numeric_limits<double>::infinity();
    auto scan = [&](double a, double b) {
      constexpr int kScanPoints = 121;
      for (int i = 0; i < kScanPoints; ++i) {
        double l = a + (b - a) * i / (kScanPoints - 1);
        double f = evaluator.eval(std::exp(l)).loglik;
        if (f > best_f) {
          best_f = f;
          best_l = l;
        }
      }
    };
    scan(lo, hi);
    // One bracket expansion when the optimum touches a bound.
    if (best_l <= lo + 1e-9 || best_l >= hi - 1e-9) {
      lo = -60.0;
      hi = 60.0;
      scan(lo, hi);
    }

    // Golden-section refinement around the scan winner; the iteration cap
    // applies to this phase.
    double step = (hi - lo) / 120.0;
    double a = std::max(lo, best_l - step);
    double b = std::min(hi, best_l + step);
    constexpr double kInvPhi = 0.6180339887498949;
    double c = b - kInvPhi * (b - a);
    double d = a + kInvPhi * (b - a);
    double fc = evaluator.eval(std::exp(c)).loglik;
    double fd = evaluator.eval(std::exp(d)).loglik;
    int iterations = 2;
    constexpr int kMaxIter = 200;
    while (b - a > 1e-10 * std::max(1.0, std::max(std::fabs(a), std::fabs(b)))) {
      if (iterations >= kMaxIter)
        throw Error(ErrorCode::NonConvergence,
                    "variance-ratio search exceeded the iteration cap");
      if (fc > fd) {
        b = d;
        d = c;
        fd = fc;
        c = b - kInvPhi * (b - a);
        fc = evaluator.eval(std::exp(c)).loglik;
      } else {
        a = c;
        c = d;
        fc = fd;
        d = a + kInvPhi * (b - a);
        fd = evaluator.eval(std::exp(d)).loglik;
      }
      ++iterations;
    }
    double l_hat = 0.5 * (a + b);
    if (evaluator.eval(std::exp(l_hat)).loglik < best_f) l_hat = best_l;
    lambda_hat = std::exp(l_hat);
    fit.log_lambda = l_hat;
    fit.iterations = iterations;
    fit.converged = true;
    fit.at_bound = (l_hat <= lo + 2.0 * step) || (l_hat >= hi - 2.0 * step);
  }

  ProfilePoint pt = evaluator.eval(lambda_hat);
  if (!std::isfinite(pt.loglik))
    throw Error(ErrorCode::SingularDesign,
                "weighted normal equations are singular at the optimum");
  fit.beta = pt.beta;
  fit.sigma2 = pt.sigma2;
  fit.sigma_u2 = fit.identifiability_limited ? 0.0 : lambda_hat * pt.sigma2;
  fit.loglik = pt.loglik;
  Eigen::MatrixXd a_inv = pt.a.ldlt().solve(Eigen::MatrixXd::Identity(p, p));
  fit.beta_cov = pt.sigma2 * a_inv;
  fit.se = fit.beta_cov.diagonal().array().sqrt();

  Eigen::VectorXd resid = data.response - x * pt.beta;
  fit.random_intercepts = Eigen::VectorXd::Zero(fit.n_participants);
  for (long g = 0; g < fit.n_participants; ++g) {
    double rs = 0.0;
    for (int i : groups[g].idx) rs += resid(i);
    double ng = static_cast<double>(groups[g].idx.size());
    fit.random_intercepts(g) =
        lambda_hat * rs / (1.0 + lambda_hat * ng);
  }

  fit.predictor_mean = Eigen::VectorXd::Zero(p_pred);
  fit.predictor_sd = Eigen::VectorXd::Zero(p_pred);
  for (long j = 0; j < p_pred; ++j) {
    Eigen::VectorXd col = data.predictors.col(j);
    fit.predictor_mean(j) = col.mean();
    fit.predictor_sd(j) = std::sqrt(
        (col.array() - fit.predictor_mean(j)).square().sum() / (n - 1));
  }
  fit.response_mean = data.response.mean();
  fit.response_sd = std::sqrt(
      (data.response.array() - fit.response_mean).square().sum() / (n - 1));
  return fit;
}

LmmPrediction lmm_predict(const LmmFit& fit, std::span<const double> predictors,
                          bool population_level, double ci_level,
                          bool raw_scale) {
  if (!fit.fitted())
    throw Error(ErrorCode::UnfittedModel, "model has not been fitted");
  long p_pred = fit.beta.size() - 1;
  if (static_cast<long>(predictors.size()) != p_pred)
    throw Error(ErrorCode::LengthMismatch,
                "expected " + std::to_string(p_pred) + " predictor values");
  if (raw_scale && (fit.response_transform == std::nullopt ||
                    static_cast<long>(fit.predictor_transforms.size()) != p_pred))
    throw Error(ErrorCode::UnfittedModel,
                "fit carries no z-score transforms for raw-scale prediction");

  Eigen::VectorXd c(p_pred + 1);
  c(0) = 1.0;
  LmmPrediction out;
  for (long j = 0; j < p_pred; ++j) {
    double v = predictors[j];
    if (raw_scale) v = fit.predictor_transforms[j].apply(v);
    c(j + 1) = v;
    if (fit.predictor_sd(j) > 0.0 &&
        std::fabs(v - fit.predictor_mean(j)) > 3.0 * fit.predictor_sd(j))
      out.extrapolation_warning = true;
  }

  double mu = c.dot(fit.beta);
  double var = c.dot(fit.beta_cov * c);
  if (!population_level) var += fit.sigma_u2;
  double df = static_cast<double>(fit.n_observations - fit.beta.size());
  if (df < 1.0) df = 1.0;
  double q = t_quantile(1.0 - 0.5 * (1.0 - ci_level), df);
  double half = q * std::sqrt(std::max(0.0, var));
  out.value = mu;
  out.ci_low = mu - half;
  out.ci_high = mu + half;
  if (raw_scale) {
    out.value = fit.response_transform->invert(out.value);
    out.ci_low = fit.response_transform->invert(out.ci_low);
    out.ci_high = fit.response_transform->invert(out.ci_high);
  }
  return out;
}

}  // namespace texturalyze::inference
