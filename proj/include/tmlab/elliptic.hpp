#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "tmlab/maximize1d.hpp"
#include "tmlab/nonlinearity.hpp"
#include "tmlab/profile.hpp"
#include "tmlab/transforms.hpp"
#include "tmlab/weights.hpp"

namespace tmlab {

struct EnergyReport {
  double value;
  double dirichlet_term;  ///< int |grad u|^p dx
  double potential_term;  ///< int F(u) V dx
  bool divergent;
};

/// E(s u) = (s^p/p) int |grad u|^p - int F(s u) V dx.
EnergyReport energy(const RadialField& u, const Nonlinearity& nl, const WeightSpec& spec,
                    double scale = 1.0);

/// int F(s u) V dx by r-space quadrature in log form.
FunctionalReport potential_integral(const RadialField& u, const Nonlinearity& nl,
                                    const WeightSpec& spec, double scale = 1.0);

struct GeometryReport {
  std::vector<std::pair<double, double>> samples;  ///< (s, E(s u0))
  bool zero_at_origin;  ///< (i) E(0) = 0
  bool ridge;           ///< (ii) E > 0 at some s before the first negative sample
  double ridge_value;
  double ridge_scale;
  bool negative;        ///< (iii) E(s u0) < 0 at the largest sample
  double negative_scale;
  bool certified() const { return zero_at_origin && ridge && negative; }
};

/// Scans E(s u0) on s_grid and extends it geometrically (x2) until
/// E < 0 or s reaches s_cap.
GeometryReport mp_geometry(const Nonlinearity& nl, const WeightSpec& spec, const RadialField& u0,
                           std::vector<double> s_grid = {}, double s_cap = 1e4);

struct LevelRow {
  int k;
  double t_max;
  double e_max;
};

struct LevelReport {
  std::vector<LevelRow> rows;
  double bound;   ///< min over k of max_t E(t u_k), an upper bound on d
  double c_bar;   ///< (1/p) (alpha_p/alpha0)^{p-1}
  double margin;  ///< c_bar - bound
  bool certified; ///< bound < c_bar
  bool a9;        ///< (A9) verdict for the supplied record
};

LevelReport mp_level_bound(const Nonlinearity& nl, const Params& params, int k_max = 8);

struct ShootOptions {
  double tol = 1e-10;       ///< on |u(R)| relative to the height scale
  double start = 1e-6;      ///< start radius as a fraction of R
  double rtol = 1e-11;
  double atol = 1e-13;
  int hats = 10;
  double weak_tol = 1e-4;
};

struct ShootResult {
  double initial_height = 0.0;
  std::shared_ptr<const RadialField> profile;
  double boundary_miss = 0.0;
  std::vector<double> weak_residuals;
  double max_weak_residual = 0.0;
  double energy_norm = 0.0;  ///< int |grad u|^p dx
  bool converged = false;
  int iterations = 0;
  std::string message;
};

/// u(R) for the initial height a, with the integrated trajectory.
struct Trajectory {
  double miss;
  bool ok;
  double reached;
  std::string message;
};
Trajectory shoot_once(const Nonlinearity& nl, const WeightSpec& spec, double a,
                      const ShootOptions& opt = {});

/// Shooting on u(0) in the flux variable m = r^{N-1} |u'|^{p-2} u'. The
/// bracket must give boundary misses of opposite signs.
ShootResult shoot(const Nonlinearity& nl, const WeightSpec& spec, std::pair<double, double> bracket,
                  const ShootOptions& opt = {});

/// Weak-form residuals of -Delta_p u = S(u) V against hat functions with
/// vertices at Chebyshev-like radii: for each hat phi,
///   int |u'|^{p-2} u' phi' dx - int S(u) phi V dx.
std::vector<double> weak_residuals(const RadialField& u, const std::function<double(double)>& S,
                                    const WeightSpec& spec, int hats);

struct RayleighResult {
  double lambda;
  double floor;        ///< p^p / Gamma(p) when the weight is V_p, else 0
  bool above_floor;
  Profile1D minimizer; ///< in the Moser variable, w = alpha_p^{(p-1)/p} u
  int iterations;
  bool converged;
};

/// Minimizes int |grad u|^p / int |u|^p V over profiles that are piecewise
/// linear in the Moser variable (nodes uniform on [0, horizon], constant
/// inside r(horizon)) by preconditioned descent on the unit sphere.
RayleighResult rayleigh_min(const WeightSpec& spec, int grid_size = 400, int iterations = 4000,
                            std::uint64_t seed = 1, double horizon = 40.0);

struct ElCheck {
  double lambda;  ///< (int u^gamma e^{alpha u^gamma} V)^{-1}
  std::vector<double> residuals;  ///< relative to the largest left side
  double max_residual;
  double norm;    ///< ||grad u||_p, 1 for a maximizer
};

/// Euler-Lagrange check for a maximize1d solution at ratio a = alpha/alpha_p
/// on the beta = 0 problem, after pulling the maximizer back to the ball.
ElCheck el_check(const Params& params, const MaxResult& result, int hats = 10);

}  // namespace tmlab
