#include "tmlab/numerics/richardson.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

namespace tmlab::numerics {
namespace {

// Exact interpolation through the first m points with m - 1 correction terms.
Eigen::VectorXd fit(std::span<const double> ns, std::span<const double> values,
                    std::span<const double> exponents, std::size_t m, std::size_t offset) {
  Eigen::MatrixXd A(m, m);
  Eigen::VectorXd b(m);
  for (std::size_t i = 0; i < m; ++i) {
    const double n = ns[offset + i];
    A(i, 0) = 1.0;
    for (std::size_t j = 1; j < m; ++j) A(i, j) = std::pow(n, -exponents[j - 1]);
    b[i] = values[offset + i];
  }
  return A.colPivHouseholderQr().solve(b);
}

}  // namespace

Extrapolation richardson(std::span<const double> ns, std::span<const double> values,
                         std::span<const double> exponents) {
  const std::size_t k = ns.size();
  if (k < 2 || values.size() != k) throw std::invalid_argument("richardson needs >= 2 samples");
  if (exponents.size() + 1 < k) throw std::invalid_argument("richardson: not enough exponents");
  const Eigen::VectorXd full = fit(ns, values, exponents, k, 0);
  // One fewer term, fitted to the finest samples.
  const Eigen::VectorXd reduced = fit(ns, values, exponents, k - 1, 1);
  Extrapolation e;
  e.value = full[0];
  e.error = std::abs(full[0] - reduced[0]);
  for (std::size_t j = 1; j < k; ++j) e.correction_coefficients.push_back(full[j]);
  return e;
}

Extrapolation richardson(std::span<const double> ns, std::span<const double> values, double order) {
  std::vector<double> ex;
  for (std::size_t j = 1; j < ns.size(); ++j) ex.push_back(order * j);
  return richardson(ns, values, ex);
}

}  // namespace tmlab::numerics
