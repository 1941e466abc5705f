#include "tmlab/constants.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "tmlab/numerics/quadrature.hpp"
#include "tmlab/numerics/richardson.hpp"
#include "tmlab/special.hpp"

namespace tmlab {

using numerics::QuadratureSpec;

double omega(double p) {
  if (!(p > 0.0)) throw DomainError("omega requires p > 0");
  return 2.0 * std::pow(std::numbers::pi, 0.5 * p) / gamma_fn(0.5 * p);
}

double optimal_exponent(double p) {
  if (!(p > 1.0)) throw DomainError("optimal_exponent requires p > 1");
  return p * std::pow(omega(p), 1.0 / (p - 1.0));
}

double optimal_exponent(const Params& params) { return optimal_exponent(params.p); }

double singular_exponent(const Params& params) {
  return optimal_exponent(params) * (1.0 - params.beta / params.p);
}

LevelResult concentration_level(double p) {
  if (!(p > 1.0)) throw DomainError("concentration_level requires p > 1");
  constexpr double delta = 1e-3;
  const QuadratureSpec spec{.rel_tol = 1e-13, .abs_tol = 1e-15};
  // Near s = 1, in u = s - 1, with the removable point replaced by its limit.
  auto head = [p](double u) {
    if (std::abs(u) < 1e-8) return (p - 1.0) / std::pow(1.0 + u, p);
    return std::expm1((p - 1.0) * std::log1p(u)) / (std::pow(1.0 + u, p) * u);
  };
  // s = 1/x maps [1 + delta, inf) to (0, 1/(1 + delta)] with integrand
  // (1 - x^{p-1})/(1 - x).
  auto tail = [p](double x) {
    if (x <= 0.0) return 1.0;
    return -std::expm1((p - 1.0) * std::log(x)) / (1.0 - x);
  };
  const auto h = numerics::integrate(head, 0.0, delta, spec);
  const auto t = numerics::integrate(tail, 0.0, 1.0 / (1.0 + delta), spec);
  const double integral = h.value + t.value;
  return {1.0 + std::exp(integral), integral, h.error + t.error, h.converged && t.converged};
}

double lp_sample(double p, double n) {
  if (!(p > 1.0) || !(n > 0.0)) throw DomainError("lp_sample requires p > 1, n > 0");
  const double pp = p / (p - 1.0);
  auto log_f = [&](double t) { return n * (std::pow(t, pp) - t); };
  // Both endpoints carry an O(1/n) boundary layer; the t = 1 layer has width (p-1)/n.
  std::vector<double> bp{0.0, 1.0};
  for (double m : {1.0, 8.0, 40.0, 200.0}) {
    bp.push_back(m / n);
    bp.push_back(1.0 - m * (p - 1.0) / n);
  }
  std::erase_if(bp, [](double x) { return x < 0.0 || x > 1.0; });
  std::sort(bp.begin(), bp.end());
  bp.erase(std::unique(bp.begin(), bp.end()), bp.end());
  const auto r = numerics::integrate_log_pieces(log_f, bp, {.rel_tol = 1e-13});
  return std::exp(r.log_value + std::log(n));
}

std::pair<double, double> lp_bounds(double p) {
  const double pp = p / (p - 1.0);
  return {p, p * std::pow(pp, p - 1.0)};
}

std::vector<double> lp_correction_exponents(double p, std::size_t count) {
  std::vector<double> ex;
  const double a = 1.0 / (p - 1.0);
  for (std::size_t j = 1; j <= count; ++j) {
    ex.push_back(a * j);
    ex.push_back(double(j));
  }
  std::sort(ex.begin(), ex.end());
  std::vector<double> merged;
  for (double e : ex)
    if (merged.empty() || e - merged.back() > 1e-9 * e) merged.push_back(e);
  merged.resize(count);
  return merged;
}

LpEstimate lp_constant(double p, const std::vector<double>& schedule) {
  if (!(p > 1.0)) throw DomainError("lp_constant requires p > 1");
  if (schedule.size() < 3) throw DomainError("lp_constant needs at least 3 schedule points");
  for (std::size_t i = 1; i < schedule.size(); ++i)
    if (!(schedule[i] > schedule[i - 1])) throw DomainError("lp schedule must be increasing");
  LpEstimate out;
  out.schedule = schedule;
  for (double n : schedule) out.samples.push_back(lp_sample(p, n));
  const auto ex = lp_correction_exponents(p, schedule.size() - 1);
  const auto r = numerics::richardson(out.schedule, out.samples, ex);
  out.estimate = r.value;
  out.error = r.error;
  out.bounds = lp_bounds(p);
  out.monotone = true;
  for (std::size_t i = 1; i < out.samples.size(); ++i)
    if (!(out.samples[i] < out.samples[i - 1])) out.monotone = false;
  const double slack = out.error + 1e-12 * out.bounds.second;
  out.within_bounds =
      out.estimate >= out.bounds.first - slack && out.estimate <= out.bounds.second + slack;
  return out;
}

double noncompactness_level(const Params& params, double alpha0) {
  if (!(alpha0 > 0.0)) throw DomainError("noncompactness_level requires alpha0 > 0");
  const double p = params.p;
  return std::pow(optimal_exponent(p) / alpha0, p - 1.0) / p;
}

ConstantsTable constants_table(const Params& params, std::optional<double> alpha0) {
  params.validate();
  ConstantsTable t;
  t.omega_p = omega(params.p);
  t.omega_N = omega(params.N);
  t.alpha_p = optimal_exponent(params);
  t.alpha_p_beta = singular_exponent(params);
  t.concentration_level = concentration_level(params.p).value;
  t.L_p_bounds = lp_bounds(params.p);
  const auto lp = lp_constant(params.p);
  t.L_p_estimate = lp.estimate;
  t.L_p_error = lp.error;
  if (alpha0) t.c_bar = noncompactness_level(params, *alpha0);
  return t;
}

}  // namespace tmlab
