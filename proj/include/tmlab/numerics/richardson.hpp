#pragma once

#include <span>
#include <vector>

namespace tmlab::numerics {

struct Extrapolation {
  double value;
  double error;  ///< |value - estimate from one fewer correction term|
  std::vector<double> correction_coefficients;
};

/// Fits v_i = L + sum_j c_j n_i^{-e_j} using the first (count - 1) exponents
/// and returns L. Requires ns.size() == values.size() >= 2.
Extrapolation richardson(std::span<const double> ns, std::span<const double> values,
                         std::span<const double> exponents);

/// Classical case e_j = order * j.
Extrapolation richardson(std::span<const double> ns, std::span<const double> values,
                         double order = 1.0);

}  // namespace tmlab::numerics
