#include "tmlab/extremals.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "tmlab/constants.hpp"
#include "tmlab/numerics/quadrature.hpp"

namespace tmlab {

double moser_radius(const Params& params, int k) {
  const double p = params.p, N = params.N;
  const double rhs = k * (N - p) / (p - 1.0) * std::pow(omega(N) / omega(p), 1.0 / (p - 1.0));
  return std::pow(params.R_term() + rhs, -1.0 / params.kappa());
}

MoserElement build_moser(const Params& params, int k) {
  if (k < 1) throw DomainError("Moser index k must be >= 1");
  const double p = params.p;
  const double tk = p * k;
  auto w = Profile1D::ramp(tk, std::pow(tk, 1.0 / params.pprime()), p);
  auto prof = moser_pullback(params.space(), w);
  return {params, k, moser_radius(params, k),
          std::pow(double(k), (p - 1.0) / p) * std::pow(omega(p), -1.0 / p), prof};
}

double moser_lower_bound(const Params& params, double alpha, int k) {
  const double p = params.p, wp = omega(p);
  return wp / p * std::exp(k * std::pow(wp, -1.0 / (p - 1.0)) * (alpha - optimal_exponent(params)));
}

BlowupScan blowup_scan(const Params& params, double alpha, int k_max) {
  if (!(alpha > 0.0)) throw DomainError("blowup_scan needs alpha > 0");
  if (k_max < 1) throw DomainError("blowup_scan needs k_max >= 1");
  const Params P = params.with_beta(0.0);
  const WeightSpec V = WeightSpec::vp(P);
  BlowupScan scan{alpha, {}, true, 0, std::numeric_limits<double>::infinity()};
  for (int k = 1; k <= k_max; ++k) {
    const auto el = build_moser(P, k);
    const auto f = tm_functional(*el.profile, alpha, V);
    const double lb = moser_lower_bound(P, alpha, k);
    scan.rows.push_back({k, f.value, f.log_value, lb, f.divergent});
    scan.min_bound_margin = std::min(scan.min_bound_margin, (f.value - lb) / lb);
    if (k > 1 && !(f.log_value > scan.rows[k - 2].log_value)) scan.increasing = false;
    if (!scan.tenfold_k && k > 1 && f.log_value > scan.rows[0].log_value + std::log(10.0))
      scan.tenfold_k = k;
  }
  return scan;
}

PowerCapReport power_cap_divergence(const Params& params, double gamma, double beta_exp,
                                    int j_max) {
  const double p = params.p, N = params.N, pp = params.pprime(), kappa = params.kappa();
  if (!(gamma > pp)) throw DomainError("gamma <= p' is finite by the embedding theorem");
  const std::pair<double, double> window{kappa / gamma, (N - p) / p};
  if (beta_exp <= 0.0) beta_exp = 0.5 * (window.first + window.second);
  if (!(beta_exp > window.first) || !(beta_exp < window.second))
    throw DomainError("beta outside the admissible window");
  const double delta = (params.R.is_infinite() ? 1.0 : std::min(params.R.value(), 1.0)) / 4.0;
  const double wN = omega(N);

  PowerCapReport rep{gamma, beta_exp, delta, window, 0.0, {}, true};
  // inner power part plus the linear bridge on (delta, 2 delta)
  rep.gradient_energy =
      wN * std::pow(beta_exp, p) * std::pow(delta, N - (beta_exp + 1.0) * p) / (N - (beta_exp + 1.0) * p) +
      wN * std::pow(delta, -(beta_exp + 1.0) * p) * (std::pow(2 * delta, N) - std::pow(delta, N)) / N;

  const WeightSpec V = WeightSpec::vp(params.with_beta(0.0));
  auto log_f = [&](double rho) {
    const double r = std::exp(rho);
    return log_radial_density(V, r) + rho + std::pow(r, -beta_exp * gamma);
  };
  // exponent of V_p: -c (r^{-kappa} - R^{-kappa}) with c below
  const double c = (p - 1.0) / (N - p) * p * std::pow(omega(p) / wN, 1.0 / (p - 1.0));
  const double a = (N - 1.0) / (p - 1.0);
  const double log_C = pp * std::log(omega(p) / wN) + std::log(wN) + c * params.R_term();
  double log_sum = -std::numeric_limits<double>::infinity();
  double first_bound = std::numeric_limits<double>::quiet_NaN(), last_bound = first_bound;
  for (int j = 0; j <= j_max; ++j) {
    const double hi = delta * std::ldexp(1.0, -j), lo = hi / 2;
    const auto q = numerics::integrate_log(log_f, std::log(lo), std::log(hi), {.rel_tol = 1e-10});
    AnnulusRow row{j, q.log_value, -std::numeric_limits<double>::infinity(), false, 0.0};
    // e^{r^{-beta gamma}} >= e^{c r^{-kappa}} holds on the whole annulus when it holds at hi
    row.bound_valid = std::pow(hi, -beta_exp * gamma) >= c * std::pow(hi, -kappa);
    if (row.bound_valid) {
      row.log_lower_bound = log_C + (1.0 - a) * std::log(lo) + std::log(1.0 - std::pow(2.0, 1.0 - a)) -
                            std::log(a - 1.0);
      if (row.log_value < row.log_lower_bound - 1e-9 * std::abs(row.log_lower_bound))
        rep.diverges = false;
      if (std::isnan(first_bound)) first_bound = row.log_lower_bound;
      last_bound = row.log_lower_bound;
    }
    log_sum = numerics::log_add(log_sum, q.log_value);
    row.log_partial_sum = log_sum;
    rep.rows.push_back(row);
  }
  // The bounds grow like 2^{j (a - 1)}: require the valid range to show it.
  if (std::isnan(first_bound) || !(last_bound > first_bound + std::log(10.0))) rep.diverges = false;
  return rep;
}

PerturbedReport perturbed_weight_blowup(const Params& params, double epsilon, double alpha,
                                        int k_max) {
  if (!(epsilon >= 0.0)) throw DomainError("epsilon must be nonnegative");
  const Params P = params.with_beta(0.0);
  const WeightSpec V = WeightSpec::perturbed(P, epsilon);
  PerturbedReport rep{epsilon, alpha, {}, true, 0.0};
  for (int k = 1; k <= k_max; ++k) {
    const auto el = build_moser(P, k);
    const double v = tm_functional(*el.profile, alpha, V).value;
    if (k > 1 && !(v > rep.rows.back().value)) rep.increasing = false;
    rep.rows.push_back({k, v});
  }
  rep.growth = rep.rows.back().value / rep.rows.front().value;
  return rep;
}

}  // namespace tmlab
