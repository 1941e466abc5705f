#pragma once

namespace tmlab {

/// Gamma function for real x > 0 (Lanczos, g = 7, nine terms) with relative
/// accuracy around 1e-15 on (0, 50]. Throws DomainError for x <= 0.
double gamma_fn(double x);

/// log Gamma(x) for x > 0; usable where gamma_fn would overflow.
double log_gamma(double x);

}  // namespace tmlab
