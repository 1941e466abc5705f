#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace tmlab {

/// Raised when an argument lies outside the domain of an operation.
class DomainError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

/// Ball radius in (0, inf]. The infinite state is explicit so that every
/// R^{-s} term can evaluate to exactly zero.
class Radius {
public:
  static Radius finite(double r) {
    if (!(r > 0.0) || !std::isfinite(r))
      throw DomainError("radius must be finite and positive, got " + std::to_string(r));
    return Radius(r);
  }
  static Radius infinite() { return Radius(std::numeric_limits<double>::infinity()); }

  bool is_infinite() const { return std::isinf(value_); }
  double value() const { return value_; }

  /// R^{-s} for s > 0, exactly 0 when R is infinite.
  double neg_power(double s) const { return is_infinite() ? 0.0 : std::pow(value_, -s); }

  /// Accepts "inf" / "infinity" or a positive decimal.
  static Radius parse(const std::string& text);
  std::string to_string() const;

  friend bool operator==(const Radius&, const Radius&) = default;

private:
  explicit Radius(double r) : value_(r) {}
  double value_;
};

/// Geometry of a radial Sobolev space: integrability exponent, dimension and
/// radius. Allows p == N (the critical ball used by harmonic transplantation).
struct Space {
  double p;
  int dim;
  Radius radius;

  Space(double p_, int dim_, Radius r_) : p(p_), dim(dim_), radius(r_) {
    if (!(p > 1.0) || !(p <= dim))
      throw DomainError("space requires 1 < p <= N");
  }

  bool critical() const { return p == static_cast<double>(dim); }
  double pprime() const { return p / (p - 1.0); }
  /// (N - p)/(p - 1); zero in the critical case.
  double kappa() const { return (dim - p) / (p - 1.0); }
};

/// The problem quintuple (p, N, R, alpha, beta) with its derived constants.
struct Params {
  double p = 2.0;
  int N = 3;
  Radius R = Radius::finite(1.0);
  double alpha = 0.0;
  double beta = 0.0;

  Params() = default;
  Params(double p_, int N_, Radius R_, double alpha_ = 0.0, double beta_ = 0.0)
      : p(p_), N(N_), R(R_), alpha(alpha_), beta(beta_) {
    validate();
  }

  void validate() const {
    if (N < 2) throw DomainError("dimension N must be >= 2");
    if (!(p > 1.0) || !(p < N)) throw DomainError("exponent must satisfy 1 < p < N");
    if (!(beta >= 0.0) || !(beta < p)) throw DomainError("beta must lie in [0, p)");
    if (!(alpha >= 0.0)) throw DomainError("alpha must be nonnegative");
  }

  double pprime() const { return p / (p - 1.0); }
  double pstar() const { return N * p / (N - p); }
  double kappa() const { return (N - p) / (p - 1.0); }
  /// R^{-(N-p)/(p-1)}, exactly 0 for R = inf.
  double R_term() const { return R.neg_power(kappa()); }

  Space space() const { return Space(p, N, R); }
  Params with_beta(double b) const { return Params(p, N, R, alpha, b); }
  Params with_alpha(double a) const { return Params(p, N, R, a, beta); }
};

}  // namespace tmlab
