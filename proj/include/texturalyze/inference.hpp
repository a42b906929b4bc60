#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "texturalyze/types.hpp"

namespace texturalyze::inference {

// Regularized incomplete beta function I_x(a, b), continued-fraction
// evaluation (modified Lentz).
double ibeta(double a, double b, double x);

// Student-t CDF for df >= 1.
double t_cdf(double t, double df);

// Inverse of t_cdf in its first argument, bisection on the monotone CDF.
double t_quantile(double p, double df);

// Two-sided p-value of a correlation r at sample size n.
double pearson_p_value(double r, int n);

struct CorrelationResult {
  double r = 0.0;
  int n = 0;
  double p_value = 1.0;
  bool significant = false;  // p_value < alpha
};

CorrelationResult pearson(std::span<const double> x, std::span<const double> y,
                          double alpha = 0.05);

enum class LmmMethod { Reml, Ml };

// Long-form observations for the random-intercept model
//   z = beta0 + beta' x + u_participant + eps.
struct LmmData {
  std::vector<std::string> predictor_names;
  std::vector<std::string> participant;  // one entry per observation
  Eigen::MatrixXd predictors;            // n x p, no intercept column
  Eigen::VectorXd response;              // n
};

struct LmmFit {
  LmmMethod method = LmmMethod::Reml;
  std::vector<std::string> predictor_names;
  Eigen::VectorXd beta;      // intercept first, then one per predictor
  Eigen::VectorXd se;        // standard errors of beta
  Eigen::MatrixXd beta_cov;  // sigma2 * (X' H^-1 X)^-1
  double sigma_u2 = 0.0;     // random-intercept variance
  double sigma2 = 0.0;       // residual variance
  double log_lambda = 0.0;   // log(sigma_u2 / sigma2) at the optimum
  double loglik = 0.0;
  std::vector<std::string> participants;    // group labels, sorted
  Eigen::VectorXd random_intercepts;        // BLUPs, aligned to participants
  bool converged = false;
  int iterations = 0;
  bool at_bound = false;
  bool identifiability_limited = false;  // all-singleton groups, sigma_u2 := 0
  long n_observations = 0;
  long n_participants = 0;
  // Training summaries used by lmm_predict.
  Eigen::VectorXd predictor_mean, predictor_sd;
  double response_mean = 0.0, response_sd = 0.0;
  // Populated when the model was fit on standardized inputs and raw-scale
  // predictions are wanted back.
  std::vector<ZTransform> predictor_transforms;
  std::optional<ZTransform> response_transform;

  bool fitted() const { return beta.size() > 0; }
};

LmmFit fit_lmm(const LmmData& data, LmmMethod method = LmmMethod::Reml);

struct LmmPrediction {
  double value = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  bool extrapolation_warning = false;  // any predictor beyond 3 sd of training
};

// Population-level prediction at the given predictor values with a CI from
// the beta covariance (population_level=false widens the interval by the
// random-intercept variance, i.e. for a new participant). When the fit holds
// z-score transforms and raw_scale is true, inputs and outputs are on the
// raw scale.
LmmPrediction lmm_predict(const LmmFit& fit, std::span<const double> predictors,
                          bool population_level = true, double ci_level = 0.95,
                          bool raw_scale = false);

}  // namespace texturalyze::inference
