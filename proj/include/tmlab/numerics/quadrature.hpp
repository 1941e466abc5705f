#pragma once

#include <functional>
#include <limits>
#include <span>

namespace tmlab::numerics {

enum class Substitution {
  none,          ///< integrate in the given variable
  inverse_tail,  ///< x = a + s/(1-s) on [a, inf); applied automatically for infinite ends
};

struct QuadratureSpec {
  double rel_tol = 1e-10;
  double abs_tol = 0.0;
  int max_subdivisions = 4000;
  Substitution substitution = Substitution::none;
};

/// Result of an adaptive Gauss-Kronrod integration. `log_value` is kept for
/// integrals that overflow double; `value` is exp(log_value) in that case.
struct QuadResult {
  double value = 0.0;
  double error = 0.0;
  double log_value = -std::numeric_limits<double>::infinity();
  double log_error = -std::numeric_limits<double>::infinity();
  int subdivisions = 0;
  bool converged = true;
};

using LogIntegrand = std::function<double(double)>;
using Integrand = std::function<double(double)>;

/// Integrates exp(log_f) over [a, b] (either end may be infinite). The
/// integrand is supplied as its logarithm; -inf is a valid value (zero).
/// Panel sums use a max shift so that integrands up to exp(700) and far
/// beyond stay finite in log form.
QuadResult integrate_log(const LogIntegrand& log_f, double a, double b,
                         const QuadratureSpec& spec = {});

/// Signed integrand in linear space.
QuadResult integrate(const Integrand& f, double a, double b, const QuadratureSpec& spec = {});

/// integrate_log over consecutive breakpoints, combined with log-sum-exp.
QuadResult integrate_log_pieces(const LogIntegrand& log_f, std::span<const double> breakpoints,
                                const QuadratureSpec& spec = {});

/// Stable log(exp(a) + exp(b)).
double log_add(double a, double b);

}  // namespace tmlab::numerics
