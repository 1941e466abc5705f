#include "tmlab/weights.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include "tmlab/constants.hpp"
#include "tmlab/numerics/quadrature.hpp"
#include "tmlab/profile.hpp"

namespace tmlab {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void check_radius(const Params& params, double r) {
  if (!(r > 0.0)) throw DomainError("weight radius must be positive");
  if (!params.R.is_infinite() && r > params.R.value())
    throw DomainError("weight radius must not exceed R");
}

}  // namespace

WeightSpec WeightSpec::vp(const Params& params) {
  if (params.beta != 0.0) return vp(params.with_beta(0.0));
  return {params, WeightKind::Vp, 0.0};
}

WeightSpec WeightSpec::vp_beta(const Params& params) { return {params, WeightKind::VpBeta, 0.0}; }

WeightSpec WeightSpec::constant(const Params& params, double c) {
  if (!(c >= 0.0)) throw DomainError("constant weight must be nonnegative");
  return {params, WeightKind::Constant, c};
}

WeightSpec WeightSpec::power_law(const Params& params, double exponent) {
  return {params, WeightKind::PowerLaw, exponent};
}

WeightSpec WeightSpec::perturbed(const Params& params, double eps) {
  if (!(eps >= 0.0)) throw DomainError("perturbation exponent must be nonnegative");
  return {params.with_beta(0.0), WeightKind::PerturbedVp, eps};
}

std::string WeightSpec::name() const {
  switch (kind) {
    case WeightKind::Vp: return "vp";
    case WeightKind::VpBeta: return "vpbeta";
    case WeightKind::Constant: return "constant";
    case WeightKind::PowerLaw: return "powerlaw";
    case WeightKind::PerturbedVp: return "perturbed";
  }
  return "unknown";
}

double log_weight(const WeightSpec& spec, double r) {
  const Params& P = spec.params;
  check_radius(P, r);
  switch (spec.kind) {
    case WeightKind::Constant: return spec.value > 0.0 ? std::log(spec.value) : kNegInf;
    case WeightKind::PowerLaw: return spec.value * std::log(r);
    default: break;
  }
  const double p = P.p, N = P.N, pp = P.pprime(), kappa = P.kappa();
  const double ratio = omega(p) / omega(N);
  const double rk = std::pow(r, -kappa);
  if (std::isinf(rk)) return kNegInf;
  const double expo = (p - 1.0) / (N - p) * (p - spec.beta()) * std::pow(ratio, 1.0 / (p - 1.0)) *
                      (rk - P.R_term());
  double lv = pp * std::log(ratio) - (N - 1.0) * pp * std::log(r) - expo;
  if (spec.kind == WeightKind::PerturbedVp) lv -= spec.value * std::log(r);
  return lv;
}

double weight(const WeightSpec& spec, double r) { return std::exp(log_weight(spec, r)); }

double log_radial_density(const WeightSpec& spec, double r) {
  return log_weight(spec, r) + std::log(omega(spec.params.N)) + (spec.params.N - 1) * std::log(r);
}

MassResult weight_mass(const WeightSpec& spec) {
  const Params& P = spec.params;
  const double wN = omega(P.N);
  switch (spec.kind) {
    case WeightKind::Constant: {
      if (P.R.is_infinite())
        return {spec.value > 0 ? std::numeric_limits<double>::infinity() : 0.0, 0, true,
                spec.value == 0};
      return {spec.value * wN * std::pow(P.R.value(), P.N) / P.N, 0.0, true, true};
    }
    case WeightKind::PowerLaw: {
      const double e = spec.value + P.N;
      if (P.R.is_infinite() || !(e > 0.0))
        return {std::numeric_limits<double>::infinity(), 0.0, true, false};
      return {wN * std::pow(P.R.value(), e) / e, 0.0, true, true};
    }
    default: break;
  }
  const double p = P.p;
  const double rate = (p - spec.beta()) / p;
  const MoserMap map(P.space());
  const double eps = spec.kind == WeightKind::PerturbedVp ? spec.value : 0.0;
  auto log_f = [&](double t) {
    double v = -rate * t;
    if (eps > 0.0) v -= eps * std::log(map.r(t));
    return v;
  };
  const std::vector<double> bp{0.0, 1.0, 10.0, 100.0, std::numeric_limits<double>::infinity()};
  const auto q = numerics::integrate_log_pieces(log_f, bp, {.rel_tol = 1e-12});
  const double scale = omega(p) / p;
  return {scale * q.value, scale * q.error, q.converged, std::isfinite(q.value)};
}

MassResult weight_mass_rspace(const WeightSpec& spec, double rel_tol) {
  const Params& P = spec.params;
  auto log_f = [&](double rho) {
    const double r = std::exp(rho);
    if (!(r > 0.0)) return kNegInf;
    if (!P.R.is_infinite() && r > P.R.value()) return kNegInf;
    return log_radial_density(spec, r) + rho;
  };
  std::vector<double> bp{-std::numeric_limits<double>::infinity()};
  if (spec.moser_exponential()) {
    const MoserMap map(P.space());
    for (double t : {200.0, 50.0, 10.0, 3.0, 1.0, 0.3, 0.05, 0.005}) bp.push_back(std::log(map.r(t)));
  } else {
    const double top = P.R.is_infinite() ? 1.0 : P.R.value();
    for (double f : {1e-6, 1e-3, 0.1, 0.5}) bp.push_back(std::log(top * f));
  }
  bp.push_back(P.R.is_infinite() ? std::numeric_limits<double>::infinity()
                                 : std::log(P.R.value()));
  const auto q = numerics::integrate_log_pieces(log_f, bp, {.rel_tol = rel_tol});
  return {q.value, q.error, q.converged, std::isfinite(q.value)};
}

}  // namespace tmlab
