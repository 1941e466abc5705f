#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "tmlab/params.hpp"

namespace tmlab {

/// Surface area of the unit sphere in R^p, 2 pi^{p/2} / Gamma(p/2), for real p > 0.
double omega(double p);

/// alpha_p = p omega_p^{1/(p-1)}.
double optimal_exponent(double p);
double optimal_exponent(const Params& params);

/// alpha_{p,beta} = alpha_p (1 - beta/p), computed from alpha_p so that beta = 0
/// returns alpha_p bit for bit.
double singular_exponent(const Params& params);

struct LevelResult {
  double value;
  double log_integral;  ///< the integral inside exp(.)
  double error;         ///< quadrature error estimate on log_integral
  bool converged;
};

/// 1 + exp(int_1^inf (s^{p-1} - 1)/(s^p (s - 1)) ds).
LevelResult concentration_level(double p);

/// I_n = n int_0^1 exp(n (t^{p'} - t)) dt.
double lp_sample(double p, double n);

struct LpEstimate {
  double estimate;
  double error;  ///< extrapolation error estimate
  std::pair<double, double> bounds;
  std::vector<double> schedule;
  std::vector<double> samples;
  bool monotone;  ///< samples decrease strictly toward the limit
  bool within_bounds;
};

std::pair<double, double> lp_bounds(double p);

/// Extrapolated L_p. I_n - L_p has one expansion per endpoint: powers
/// n^{-j/(p-1)} from t = 0 (where t^{p'} is not smooth) and n^{-j} from t = 1.
/// The correction model uses the merged exponent set.
LpEstimate lp_constant(double p, const std::vector<double>& schedule = {200, 400, 800, 1600});

/// Correction exponents used by lp_constant, smallest first.
std::vector<double> lp_correction_exponents(double p, std::size_t count);

/// c_bar = (1/p) (alpha_p / alpha0)^{p-1}.
double noncompactness_level(const Params& params, double alpha0);

struct ConstantsTable {
  double omega_p;
  double omega_N;
  double alpha_p;
  double alpha_p_beta;
  double concentration_level;
  std::pair<double, double> L_p_bounds;
  double L_p_estimate;
  double L_p_error;
  std::optional<double> c_bar;
};

ConstantsTable constants_table(const Params& params, std::optional<double> alpha0 = {});

}  // namespace tmlab
