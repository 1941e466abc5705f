#pragma once

#include <string>

#include "tmlab/params.hpp"

namespace tmlab {

enum class WeightKind {
  Vp,           ///< V_p of the definition
  VpBeta,       ///< V_{p,beta}; beta taken from params, beta = 0 allowed
  Constant,     ///< V = value
  PowerLaw,     ///< V = r^{value}
  PerturbedVp,  ///< V_p(r) r^{-value}: the singular factor |x|^{-(N-1)p' - eps}
};

struct WeightSpec {
  Params params;
  WeightKind kind = WeightKind::Vp;
  double value = 0.0;

  static WeightSpec vp(const Params& params);
  static WeightSpec vp_beta(const Params& params);
  static WeightSpec constant(const Params& params, double c);
  static WeightSpec power_law(const Params& params, double exponent);
  static WeightSpec perturbed(const Params& params, double eps);

  /// Effective beta of the exponential factor (0 unless VpBeta).
  double beta() const { return kind == WeightKind::VpBeta ? params.beta : 0.0; }
  bool moser_exponential() const {
    return kind == WeightKind::Vp || kind == WeightKind::VpBeta || kind == WeightKind::PerturbedVp;
  }
  std::string name() const;
};

/// ln V(r) for 0 < r <= R; -inf where V underflows or vanishes.
double log_weight(const WeightSpec& spec, double r);
double weight(const WeightSpec& spec, double r);

/// ln of the radial density omega_N r^{N-1} V(r), the integrand of dx-integrals.
double log_radial_density(const WeightSpec& spec, double r);

struct MassResult {
  double value;
  double error;
  bool converged;
  bool finite;
};

/// int_{B_R} V dx. Moser-type kinds are integrated in the t variable, where
/// V_p dx = (omega_p/p) e^{-t} dt; other kinds use the closed form.
MassResult weight_mass(const WeightSpec& spec);

/// Same integral by r-space quadrature (in rho = ln r), the independent check.
MassResult weight_mass_rspace(const WeightSpec& spec, double rel_tol = 1e-11);

}  // namespace tmlab
