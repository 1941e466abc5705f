#pragma once

#include <functional>
#include <vector>

#include "tmlab/profile.hpp"
#include "tmlab/weights.hpp"

namespace tmlab {

double t_of_r(const Params& params, double r);
double r_of_t(const Params& params, double t);

struct Pushforward {
  Profile1D profile;
  double energy_r;      ///< int |grad u|^p dx of the source field
  double budget_t;      ///< int |w'|^p dt of the resampled interpolant
  double defect;        ///< energy_r - budget_t (>= 0 up to quadrature error)
  int refinements;      ///< doublings beyond the initial sampling
};

/// w(t) = alpha_p^{(p-1)/p} u(r(t)), resampled per smooth segment until the
/// energy defect is at most rel_tol of the source energy.
Pushforward moser_pushforward(const RadialField& u, double rel_tol = 1e-9);

/// Exact pullback u(r) = w(t(r)) / alpha_p^{(p-1)/p}.
std::shared_ptr<PulledBackProfile> moser_pullback(const Space& space, const Profile1D& w);

struct FunctionalReport {
  double value = 0.0;
  double log_value = 0.0;
  double error = 0.0;
  double max_log_integrand = 0.0;
  bool converged = true;
  bool divergent = false;  ///< log-integrand exceeded the cap somewhere
};

/// ln of a radial measure density: the integrand of dx in terms of r.
using LogDensity = std::function<double(double r)>;

/// ln of a factor applied to the field value, g(u(r)).
using LogFactor = std::function<double(double u)>;

/// int g(u) d mu over the ball in rho = ln r, in log form. The pieces are the
/// field's breakpoints plus radii r(t) of Moser times spread over decades.
FunctionalReport field_integral(const RadialField& u, const LogFactor& log_g,
                                const LogDensity& log_density, double log_cap = 1e4,
                                double rel_tol = 1e-10);

/// Signed int_a^b h(r) dr split at the breakpoints of u inside (a, b), in rho = ln r.
double signed_radial_integral(const RadialField& u, const std::function<double(double)>& h,
                              double a, double b, double rel_tol = 1e-10);

/// int exp(alpha |u|^q) d mu over the ball, in rho = ln r.
FunctionalReport exp_functional(const RadialField& u, double alpha, double q,
                                const LogDensity& log_density, double log_cap = 1e4,
                                double rel_tol = 1e-10);

/// F(u) = int exp(alpha |u|^{p'}) V dx by r-space quadrature.
FunctionalReport tm_functional(const RadialField& u, double alpha, const WeightSpec& spec,
                               double log_cap = 1e4);

struct LqReport {
  double norm;   ///< (int |u|^q a V dx)^{1/q} with a = a_bound
  double bound;  ///< ||a||^{1/q} omega_p^{1/q-1/p} p^{-1+1/p-1/q} Gamma((1-1/p) q + 1)^{1/q} ||grad u||_p
  bool holds;    ///< norm <= bound + 1e-6 (1 + bound)
};

/// Weighted L^q norm against V_p, with the embedding bound for radial u.
LqReport weighted_lq_norm(const RadialField& u, double q, const WeightSpec& spec,
                          double a_bound = 1.0);

/// int_0^inf exp(a w^{p'} - rate t) dt for the interpolant w with its constant
/// extension (closed-form tail). Per-segment adaptive quadrature.
FunctionalReport moser_integral(const Profile1D& w, double a, double rate = 1.0,
                                double rel_tol = 1e-12);

enum class HarmonicDirection { to_critical, from_critical };

/// Harmonic transplantation for integer p = N < m: u on B_R^m (exponent p)
/// and v on B_1^N share the Moser variable, t_x(|x|) = N ln(1/|y|), and
/// u(|x|) = v(|y|). `target` is the space of the output.
FieldPtr harmonic_transplant(FieldPtr source, HarmonicDirection direction, const Space& target);

/// beta-transplantation: u on B_R (weight V_{p,beta}) from v on B_R (weight
/// V_p) with t_y = ((p - beta)/p) t_x and u = (p/(p - beta))^{(p-1)/p} v.
FieldPtr beta_transplant(FieldPtr v, double beta);

/// |y| matched to |x| = r by the beta-transplantation.
double beta_radius_map(const Params& params, double beta, double r);

struct IdentityReport {
  double norm_source, norm_target, norm_rel_error;
  double functional_lhs, functional_rhs, functional_rel_error;
  /// beta-transplantation only: right side without the factor p/(p - beta).
  double functional_rhs_unscaled = 0.0;
};

/// Norm and functional identities of the harmonic transplantation: u on the
/// m-ball with V_p, v on the critical unit N-ball with Lebesgue measure.
IdentityReport harmonic_identities(const RadialField& u, const RadialField& v, double alpha);

/// Norm and functional identities of the beta-transplantation at exponent alpha.
IdentityReport beta_identities(const RadialField& u, const RadialField& v, double beta,
                               double alpha);

struct EquivalenceReport {
  double h;
  double max_abs_discrepancy;
  double max_rel_discrepancy;
  int points;
  bool resolved;  ///< enough grid cells to place the comparison points
};

/// Compares Delta_N v(s) with V_p(r)^{-1} Delta_p u(r), u = v(s(r)) the
/// harmonic transplant into B_R^m, by 5-point centered differences of step h.
/// Comparison radii are the grid nodes nearest to the given s-points, kept
/// only when at least 5 cells from both ends of each grid.
EquivalenceReport plap_equivalence_check(const std::function<double(double)>& v, int p, int m,
                                         double R, double h,
                                         std::vector<double> s_points = {});

struct RadialLemmaReport {
  double max_ratio_local;   ///< max |u| / bound with the exterior norm ||grad u||_{L^p(B_R \ B_r)}
  double max_ratio_global;  ///< same with the full norm
  double min_ratio_local;   ///< over nodes where u != 0 (1 means saturated)
  int nodes;
};

/// Checks the pointwise Radial Lemma bound at the field's breakpoints plus
/// `extra` geometric samples per segment.
RadialLemmaReport radial_lemma_check(const RadialField& u, int extra = 4);

}  // namespace tmlab
