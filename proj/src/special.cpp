#include "tmlab/special.hpp"

#include <array>
#include <cmath>
#include <numbers>

#include "tmlab/params.hpp"

namespace tmlab {
namespace {

// Lanczos coefficients for g = 7, n = 9 (Godfrey's set).
constexpr double kLanczosG = 7.0;
constexpr std::array<double, 9> kLanczos = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};

double lanczos_series(double z) {
  double a = kLanczos[0];
  for (std::size_t i = 1; i < kLanczos.size(); ++i) a += kLanczos[i] / (z + static_cast<double>(i));
  return a;
}

}  // namespace

double gamma_fn(double x) {
  if (!(x > 0.0)) throw DomainError("gamma_fn requires x > 0");
  if (x < 0.5) {
    // Reflection keeps the series in its accurate range.
    return std::numbers::pi / (std::sin(std::numbers::pi * x) * gamma_fn(1.0 - x));
  }
  if (x == std::floor(x) && x <= 30.0) {
    double f = 1.0;
    for (int k = 2; k < static_cast<int>(x); ++k) f *= k;
    return f;
  }
  const double z = x - 1.0;
  const double t = z + kLanczosG + 0.5;
  return std::sqrt(2.0 * std::numbers::pi) * std::pow(t, z + 0.5) * std::exp(-t) * lanczos_series(z);
}

double log_gamma(double x) {
  if (!(x > 0.0)) throw DomainError("log_gamma requires x > 0");
  if (x < 0.5)
    return std::log(std::numbers::pi / std::sin(std::numbers::pi * x)) - log_gamma(1.0 - x);
  const double z = x - 1.0;
  const double t = z + kLanczosG + 0.5;
  return 0.5 * std::log(2.0 * std::numbers::pi) + (z + 0.5) * std::log(t) - t +
         std::log(lanczos_series(z));
}

}  // namespace tmlab
