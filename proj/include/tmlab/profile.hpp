#pragma once

#include <Eigen/Dense>
#include <functional>
#include <memory>
#include <vector>

#include "tmlab/params.hpp"

namespace tmlab {

/// The Moser change of variables r <-> t of a space. For p < N,
///   t = ((p-1)/(N-p)) p (omega_p/omega_N)^{1/(p-1)} (r^{-kappa} - R^{-kappa});
/// on the critical ball (p = N, R finite) t = N ln(R/r).
class MoserMap {
public:
  explicit MoserMap(const Space& space);

  double t(double r) const;
  double r(double t) const;
  /// |dt/dr| at radius r.
  double dt_dr(double r) const;
  /// w = amplitude * u, amplitude = alpha_p^{(p-1)/p}.
  double amplitude() const { return amplitude_; }
  const Space& space() const { return space_; }

private:
  Space space_;
  double c_;        // coefficient of (r^{-kappa} - R^{-kappa})
  double kappa_;
  double r_term_;   // R^{-kappa}
  double amplitude_;
};

/// Piecewise-linear w(t) on 0 = t_0 < ... < t_K = T, extended by the
/// constant w(T) beyond T.
struct Profile1D {
  Eigen::VectorXd t;
  Eigen::VectorXd w;
  double p = 2.0;

  Profile1D() = default;
  Profile1D(Eigen::VectorXd t_, Eigen::VectorXd w_, double p_);

  /// Ramp min(t, T) * height / T sampled on [0, T] (two nodes).
  static Profile1D ramp(double T, double height, double p);

  double horizon() const { return t[t.size() - 1]; }
  double tail_value() const { return w[w.size() - 1]; }
  /// int |w'|^p dt of the interpolant.
  double budget() const;
  bool monotone() const;
  bool admissible(double tol = 1e-12) const;
  double value(double s) const;
  double slope(double s) const;
};

/// A radial function u(r) on the ball of its space. Every field is constant
/// on (0, breakpoints().front()] and smooth between consecutive breakpoints.
/// The last breakpoint is R for finite R; for R = inf the field continues
/// past the last breakpoint by its own tail rule.
class RadialField {
public:
  virtual ~RadialField() = default;
  virtual const Space& space() const = 0;
  virtual double value(double r) const = 0;
  virtual double derivative(double r) const = 0;
  virtual std::vector<double> breakpoints() const = 0;

  /// omega_N int_a^b |u'|^p r^{N-1} dr; b may be inf. Quadrature by default.
  virtual double segment_energy(double a, double b) const;
  /// int_{B_R} |grad u|^p dx.
  double dirichlet_energy() const;
  double grad_norm() const;
};

using FieldPtr = std::shared_ptr<const RadialField>;

/// Nodes (r_i, u_i), piecewise linear in r. For finite R a node (R, 0) is
/// appended when missing; for R = inf the tail is u_M (r/r_M)^{-kappa}, the
/// p-harmonic extension.
class RadialProfile final : public RadialField {
public:
  RadialProfile(const Space& space, Eigen::VectorXd r, Eigen::VectorXd u);

  const Space& space() const override { return space_; }
  double value(double r) const override;
  double derivative(double r) const override;
  std::vector<double> breakpoints() const override;
  double segment_energy(double a, double b) const override;

  const Eigen::VectorXd& radii() const { return r_; }
  const Eigen::VectorXd& values() const { return u_; }

private:
  Space space_;
  Eigen::VectorXd r_, u_;
};

/// u(r) = w(t(r)) / amplitude for a Profile1D w: the exact pullback.
class PulledBackProfile final : public RadialField {
public:
  PulledBackProfile(const Space& space, Profile1D w);

  const Space& space() const override { return map_.space(); }
  double value(double r) const override;
  double derivative(double r) const override;
  std::vector<double> breakpoints() const override;
  /// Exact: the energy of the pushed-forward interpolant over the t-range of [a, b].
  double segment_energy(double a, double b) const override;

  const Profile1D& profile() const { return w_; }
  const MoserMap& map() const { return map_; }

private:
  MoserMap map_;
  Profile1D w_;
};

/// u(r) = amplitude * v(s), s = r_src(lambda * t_this(r)): a field carried
/// across Moser variables. Harmonic transplantation has lambda = 1 and unit
/// amplitude; the beta-transplantation uses lambda = (p - beta)/p.
class TransplantedProfile final : public RadialField {
public:
  TransplantedProfile(const Space& space, FieldPtr source, double lambda, double amplitude);

  const Space& space() const override { return this_map_.space(); }
  double value(double r) const override;
  double derivative(double r) const override;
  std::vector<double> breakpoints() const override;

  /// Radius in the source space matched to r.
  double source_radius(double r) const;
  const RadialField& source() const { return *source_; }
  double lambda() const { return lambda_; }
  double amplitude() const { return amplitude_; }

private:
  MoserMap this_map_, src_map_;
  FieldPtr source_;
  double lambda_, amplitude_;
};

/// u(r) = f(r) for a smooth closed-form profile with derivative df.
class AnalyticProfile final : public RadialField {
public:
  using Fn = std::function<double(double)>;
  AnalyticProfile(const Space& space, Fn f, Fn df, std::vector<double> breakpoints);

  const Space& space() const override { return space_; }
  double value(double r) const override { return r < bp_.front() ? f_(bp_.front()) : f_(r); }
  double derivative(double r) const override { return r < bp_.front() ? 0.0 : df_(r); }
  std::vector<double> breakpoints() const override { return bp_; }

private:
  Space space_;
  Fn f_, df_;
  std::vector<double> bp_;
};

/// Samples a field on n radii per smooth segment (geometric spacing) and
/// returns the piecewise-linear profile through the samples.
RadialProfile sample_profile(const RadialField& u, int per_segment);

}  // namespace tmlab
