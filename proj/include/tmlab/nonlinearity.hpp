#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tmlab/params.hpp"

namespace tmlab {

enum class NlKind { zero, f1, f2, f3, f4, f5 };

/// Coefficients of the example nonlinearities. `beta` is the power exponent
/// of |t|^{beta-1} t, not the weight singularity.
struct NlCoeffs {
  double k = 1.0;
  double beta = 3.0;
  double alpha = 1.0;
  double gamma = 1.0;      ///< f2 only, gamma < p'
  double threshold = 0.0;  ///< f5 kink T; 0 selects it by scan
  double delta = 0.0;      ///< f5; 0 selects min{1, 1/|p - 2|}
};

enum class Growth { subcritical, critical, inconsistent };

/// (A1)..(A9) verdicts from sampled checks with the witnesses used.
struct AssumptionFlags {
  bool a1 = false, a3 = false, a4 = false, a5 = false, a6 = false, a7 = false, a9 = false;
  double a3_lambda = 0.0, a3_q = 0.0, a3_t0 = 0.0;
  double a4_limsup = 0.0;  ///< sampled limsup of pF(t)/|t|^p at 0
  double a5_mu = 0.0, a5_t0 = 0.0;
  double a6_M = 0.0, a6_t0 = 0.0;
  double a9_limit = 0.0;       ///< sampled f(t) t e^{-alpha0 t^{p'}} at the largest t (may be inf)
  double a9_threshold = 0.0;   ///< p^p / (alpha0^{p-1} C_V L_p) with the numerical L_p
  double a9_threshold_conservative = 0.0;  ///< same with L_p replaced by its lower bound p
  bool a9_conservative = false;
};

/// Radial nonlinearity f with a cached antiderivative F. F is built once on
/// construction (cumulative log-space table, Gauss-Legendre inside cells)
/// and is immutable afterwards.
class Nonlinearity {
public:
  Nonlinearity(NlKind kind, NlCoeffs coeffs, double p);

  static Nonlinearity zero(double p) { return Nonlinearity(NlKind::zero, {}, p); }

  NlKind kind() const { return kind_; }
  const NlCoeffs& coeffs() const { return c_; }
  double p() const { return p_; }
  std::string name() const;

  double f(double t) const;
  double F(double t) const;
  /// ln f(t) for t > 0 (-inf where f = 0).
  double log_f(double t) const;
  /// ln F(t) for t > 0.
  double log_F(double t) const;

  /// Declared class: critical for f3, f4, f5 with alpha0 = alpha.
  Growth declared_growth() const;
  double alpha0() const;

  AssumptionFlags assumptions(double C_V = 1.0) const;

private:
  void build_table();
  double log_integral(double a, double b) const;  // ln int_a^b f, 0 <= a < b

  NlKind kind_;
  NlCoeffs c_;
  double p_;
  std::vector<double> nodes_, log_cum_;
};

/// Samples |f(t)| e^{-alpha t^{p'}} up to t = 50 for alpha above and below
/// the declared alpha0 and checks the trends.
Growth classify_growth(const Nonlinearity& nl);

/// Smallest T on a scan grid for which the f5 record passes the sampled
/// (A6) and (A7) checks.
double f5_threshold_scan(const NlCoeffs& coeffs, double p);

std::string to_string(Growth g);

}  // namespace tmlab
