#include "tmlab/elliptic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "tmlab/constants.hpp"
#include "tmlab/extremals.hpp"
#include "tmlab/numerics/ode.hpp"
#include "tmlab/numerics/optimize.hpp"
#include "tmlab/numerics/quadrature.hpp"
#include "tmlab/special.hpp"

namespace tmlab {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

LogDensity density_of(const WeightSpec& spec) {
  return [spec](double r) { return log_radial_density(spec, r); };
}

// ln F(v); F vanishes on the negative axis for f5 only.
double log_F_signed(const Nonlinearity& nl, double v) {
  if (v > 0.0) return nl.log_F(v);
  if (v < 0.0 && nl.kind() != NlKind::f5) return nl.log_F(-v);
  return kNegInf;
}

double safe_weight(const WeightSpec& spec, double r) {
  const double lv = log_weight(spec, r);
  return lv == kNegInf ? 0.0 : std::exp(lv);
}

// Hat function on [a, c] with apex at b, and its slope.
struct Hat {
  double a, b, c;
  double value(double x) const {
    if (x <= a || x >= c) return 0.0;
    return x <= b ? (x - a) / (b - a) : (c - x) / (c - b);
  }
  double slope(double x) const {
    if (x <= a || x >= c) return 0.0;
    return x <= b ? 1.0 / (b - a) : -1.0 / (c - b);
  }
};

std::vector<double> chebyshev_vertices(double top, int hats) {
  std::vector<double> x(static_cast<std::size_t>(hats) + 2);
  for (int j = 0; j <= hats + 1; ++j)
    x[static_cast<std::size_t>(j)] = 0.5 * top * (1.0 - std::cos(std::numbers::pi * j / (hats + 1)));
  return x;
}

// Gradient-flux part |u'|^{p-2} u' and the r-space density omega_N r^{N-1}.
double flux(double p, double du) { return std::pow(std::abs(du), p - 1.0) * (du < 0 ? -1.0 : 1.0); }

}  // namespace

FunctionalReport potential_integral(const RadialField& u, const Nonlinearity& nl,
                                    const WeightSpec& spec, double scale) {
  if (scale == 0.0) return {};
  return field_integral(
      u, [&](double v) { return log_F_signed(nl, scale * v); }, density_of(spec));
}

EnergyReport energy(const RadialField& u, const Nonlinearity& nl, const WeightSpec& spec,
                    double scale) {
  const double p = u.space().p;
  const double D = u.dirichlet_energy();
  const auto P = potential_integral(u, nl, spec, scale);
  EnergyReport rep;
  rep.dirichlet_term = std::pow(std::abs(scale), p) * D;
  rep.potential_term = P.value;
  rep.value = rep.dirichlet_term / p - rep.potential_term;
  rep.divergent = P.divergent;
  return rep;
}

GeometryReport mp_geometry(const Nonlinearity& nl, const WeightSpec& spec, const RadialField& u0,
                           std::vector<double> s_grid, double s_cap) {
  if (s_grid.empty())
    for (double s = 0.01; s <= 10.5; s *= 2.0) s_grid.push_back(s);
  std::sort(s_grid.begin(), s_grid.end());
  GeometryReport rep{};
  rep.zero_at_origin = energy(u0, nl, spec, 0.0).value == 0.0;
  rep.samples.emplace_back(0.0, 0.0);
  auto sample = [&](double s) {
    const auto e = energy(u0, nl, spec, s);
    rep.samples.emplace_back(s, e.divergent ? kNegInf : e.value);
  };
  for (double s : s_grid)
    if (s > 0.0) sample(s);
  while (rep.samples.back().second >= 0.0 && rep.samples.back().first * 2.0 <= s_cap)
    sample(rep.samples.back().first * 2.0);
  // Samples after the first negative one do not count toward the ridge.
  for (const auto& [s, e] : rep.samples) {
    if (e < 0.0) break;
    if (e > rep.ridge_value) {
      rep.ridge_value = e;
      rep.ridge_scale = s;
    }
  }
  rep.ridge = rep.ridge_value > 0.0;
  rep.negative = rep.samples.back().second < 0.0;
  rep.negative_scale = rep.negative ? rep.samples.back().first : 0.0;
  return rep;
}

LevelReport mp_level_bound(const Nonlinearity& nl, const Params& params, int k_max) {
  if (nl.declared_growth() != Growth::critical)
    throw DomainError("mp_level_bound requires a nonlinearity with critical growth");
  if (k_max < 1) throw DomainError("k_max must be >= 1");
  const WeightSpec spec = WeightSpec::vp(params);
  LevelReport rep{};
  rep.c_bar = noncompactness_level(params, nl.alpha0());
  rep.bound = std::numeric_limits<double>::infinity();
  for (int k = 1; k <= k_max; ++k) {
    const auto el = build_moser(params, k);
    const RadialField& u = *el.profile;
    auto g = [&](double t) { return energy(u, nl, spec, t).value; };
    double cap = 1.0;
    double prev = g(cap);
    for (int i = 0; i < 60; ++i) {
      const double next = g(2.0 * cap);
      cap *= 2.0;
      if (!(next > prev)) break;
      prev = next;
    }
    auto m = numerics::golden_section_max(g, 0.0, cap, 1e-10);
    // Refinement on the bracket around the first pass.
    const double w = std::max(1e-6, 1e-3 * m.x);
    const auto m2 = numerics::golden_section_max(g, std::max(0.0, m.x - w), m.x + w, 1e-12);
    if (m2.value > m.value) m = m2;
    rep.rows.push_back({k, m.x, m.value});
    rep.bound = std::min(rep.bound, m.value);
  }
  rep.margin = rep.c_bar - rep.bound;
  rep.certified = rep.bound < rep.c_bar;
  rep.a9 = nl.assumptions().a9;
  return rep;
}

namespace {

struct OdeSetup {
  numerics::OdeRhs rhs;
  double r0, R, N, p;
};

OdeSetup make_ode(const Nonlinearity& nl, const WeightSpec& spec, const ShootOptions& opt) {
  const Params& P = spec.params;
  if (P.R.is_infinite()) throw DomainError("shooting requires a finite radius");
  OdeSetup s;
  s.R = P.R.value();
  s.r0 = opt.start * s.R;
  s.N = P.N;
  s.p = P.p;
  const double N = s.N, p = s.p;
  s.rhs = [&nl, spec, N, p](double r, const Eigen::VectorXd& y) {
    Eigen::VectorXd d(2);
    const double q = y[1] * std::pow(r, 1.0 - N);
    d[0] = (q < 0 ? -1.0 : 1.0) * std::pow(std::abs(q), 1.0 / (p - 1.0));
    d[1] = -std::pow(r, N - 1.0) * safe_weight(spec, r) * nl.f(y[0]);
    return d;
  };
  return s;
}

numerics::OdeSolution integrate_from(const OdeSetup& s, double a, const ShootOptions& opt) {
  Eigen::VectorXd y0(2);
  y0 << a, 0.0;
  numerics::OdeOptions o;
  o.rtol = opt.rtol;
  o.atol = opt.atol;
  o.max_step = 0.05 * s.R;
  o.initial_step = 1e-3 * s.R;
  return numerics::dormand_prince(s.rhs, s.r0, y0, s.R, o);
}

}  // namespace

Trajectory shoot_once(const Nonlinearity& nl, const WeightSpec& spec, double a,
                      const ShootOptions& opt) {
  const auto s = make_ode(nl, spec, opt);
  const auto sol = integrate_from(s, a, opt);
  return {sol.back()[0], sol.success, sol.t.back(), sol.message};
}

std::vector<double> weak_residuals(const RadialField& u, const std::function<double(double)>& S,
                                    const WeightSpec& spec, int hats) {
  const Space& sp = u.space();
  if (sp.radius.is_infinite()) throw DomainError("weak residuals need a finite radius");
  const double R = sp.radius.value(), p = sp.p, N = sp.dim, wN = omega(N);
  const auto x = chebyshev_vertices(R, hats);
  std::vector<double> res;
  for (int j = 1; j <= hats; ++j) {
    const Hat h{x[j - 1], x[j], x[j + 1]};
    auto integrand = [&](double r) {
      const double rn = wN * std::pow(r, N - 1.0);
      return rn * (flux(p, u.derivative(r)) * h.slope(r) - S(u.value(r)) * h.value(r) * safe_weight(spec, r));
    };
    const double lo = std::max(h.a, 1e-300);
    res.push_back(signed_radial_integral(u, integrand, lo, h.b, 1e-11) +
                  signed_radial_integral(u, integrand, h.b, h.c, 1e-11));
  }
  return res;
}

ShootResult shoot(const Nonlinearity& nl, const WeightSpec& spec, std::pair<double, double> bracket,
                  const ShootOptions& opt) {
  const auto s = make_ode(nl, spec, opt);
  auto [lo, hi] = bracket;
  if (!(lo < hi)) throw DomainError("height bracket must satisfy lo < hi");
  const auto mlo = shoot_once(nl, spec, lo, opt), mhi = shoot_once(nl, spec, hi, opt);
  if (!mlo.ok || !mhi.ok)
    throw DomainError("integration failed at the bracket ends: " + (mlo.ok ? mhi.message : mlo.message));
  if (mlo.miss * mhi.miss > 0.0) throw DomainError("bracket does not change sign of u(R)");

  ShootResult out;
  const double scale = std::max({1.0, std::abs(lo), std::abs(hi)});
  auto miss = [&](double a) { return shoot_once(nl, spec, a, opt).miss; };
  const auto root = numerics::find_root(miss, lo, hi, 1e-15 * scale, 300);
  out.iterations = root.iterations;
  out.initial_height = root.x;

  auto sol = std::make_shared<numerics::OdeSolution>(integrate_from(s, root.x, opt));
  out.boundary_miss = sol->back()[0];
  const double N = s.N, p = s.p;
  auto f = [sol](double r) { return sol->at(r)[0]; };
  auto df = [sol, N, p](double r) {
    const double q = sol->at(r)[1] * std::pow(r, 1.0 - N);
    return (q < 0 ? -1.0 : 1.0) * std::pow(std::abs(q), 1.0 / (p - 1.0));
  };
  out.profile = std::make_shared<AnalyticProfile>(spec.params.space(), f, df,
                                                  std::vector<double>{s.r0, s.R});
  out.energy_norm = out.profile->dirichlet_energy();
  out.weak_residuals =
      weak_residuals(*out.profile, [&nl](double v) { return nl.f(v); }, spec, opt.hats);
  for (double r : out.weak_residuals) out.max_weak_residual = std::max(out.max_weak_residual, std::abs(r));
  const bool boundary_ok = std::abs(out.boundary_miss) <= opt.tol * std::max(1.0, std::abs(root.x));
  const bool weak_ok = out.max_weak_residual <= opt.weak_tol * (1.0 + out.energy_norm);
  out.converged = sol->success && boundary_ok && weak_ok;
  if (!sol->success) out.message = sol->message + " at r = " + std::to_string(sol->t.back());
  else if (!boundary_ok) out.message = "boundary miss above tolerance";
  else if (!weak_ok) out.message = "weak residual above tolerance";
  else out.message = "ok";
  return out;
}

namespace {

// 4-point Gauss-Legendre on [0, 1].
constexpr double kGx[4] = {0.0694318442029737, 0.3300094782075719, 0.6699905217924281,
                           0.9305681557970263};
constexpr double kGw[4] = {0.1739274225687269, 0.3260725774312731, 0.3260725774312731,
                           0.1739274225687269};

// Rayleigh quotient of a t-grid profile: A^p int |w'|^p / int |w|^p rho dt,
// rho the density of V dx in t, with the constant extension past the horizon.
class RayleighQuotient {
public:
  RayleighQuotient(const WeightSpec& spec, int n, double horizon) : n_(n), p_(spec.params.p) {
    const MoserMap map(spec.params.space());
    h_ = horizon / n;
    amp_p_ = std::pow(map.amplitude(), p_);
    auto log_rho = [&](double t) {
      const double r = map.r(t);
      if (!(r > 0.0)) return kNegInf;
      const double rr = spec.params.R.is_infinite() ? r : std::min(r, spec.params.R.value());
      return log_radial_density(spec, rr) - std::log(map.dt_dr(rr));
    };
    rho_.resize(static_cast<std::size_t>(n) * 4);
    for (int i = 0; i < n; ++i)
      for (int q = 0; q < 4; ++q) {
        const double lr = log_rho((i + kGx[q]) * h_);
        rho_[static_cast<std::size_t>(4 * i + q)] = lr == kNegInf ? 0.0 : h_ * kGw[q] * std::exp(lr);
      }
    const double bp[] = {horizon, 2 * horizon, 10 * horizon, std::numeric_limits<double>::infinity()};
    tail_ = numerics::integrate_log_pieces(log_rho, bp, {.rel_tol = 1e-12}).value;
  }

  // Quotient and its gradient; x holds w at t_1..t_n (w(0) = 0).
  double operator()(const Eigen::VectorXd& x, Eigen::VectorXd& grad, double& den) const {
    double num = 0.0;
    den = 0.0;
    Eigen::VectorXd gn = Eigen::VectorXd::Zero(n_), gd = Eigen::VectorXd::Zero(n_);
    const double scale = std::pow(h_, 1.0 - p_);
    for (int i = 0; i < n_; ++i) {
      const double a = i == 0 ? 0.0 : x[i - 1], b = x[i], d = b - a;
      num += scale * std::pow(std::abs(d), p_);
      const double gdd = scale * p_ * flux(p_, d);
      gn[i] += gdd;
      if (i > 0) gn[i - 1] -= gdd;
      for (int q = 0; q < 4; ++q) {
        const double wgt = rho_[static_cast<std::size_t>(4 * i + q)];
        const double v = a + kGx[q] * d;
        den += wgt * std::pow(std::abs(v), p_);
        const double gv = wgt * p_ * flux(p_, v);
        gd[i] += gv * kGx[q];
        if (i > 0) gd[i - 1] += gv * (1.0 - kGx[q]);
      }
    }
    den += tail_ * std::pow(std::abs(x[n_ - 1]), p_);
    gd[n_ - 1] += tail_ * p_ * flux(p_, x[n_ - 1]);
    const double Q = amp_p_ * num / den;
    grad = (amp_p_ * gn - Q * gd) / den;
    return Q;
  }

  // Solves K y = g for the stiffness K = D^T diag(c) D of the cell differences
  // (Dirichlet at t = 0), c_i ~ |Delta_i|^{p-2} clipped: the Hessian of the numerator.
  Eigen::VectorXd precondition(const Eigen::VectorXd& x, const Eigen::VectorXd& g) const {
    const int n = n_;
    Eigen::VectorXd k(n), c(n), d(n), y(n);
    double dmax = 0.0;
    for (int i = 0; i < n; ++i) dmax = std::max(dmax, std::abs(x[i] - (i == 0 ? 0.0 : x[i - 1])));
    for (int i = 0; i < n; ++i) {
      const double di = std::abs(x[i] - (i == 0 ? 0.0 : x[i - 1]));
      k[i] = std::pow(std::clamp(di, 1e-6 * dmax, dmax), p_ - 2.0) / h_;
    }
    // Row i couples x_i with x_{i-1} (weight k_i) and x_{i+1} (weight k_{i+1}).
    auto diag = [&](int i) { return k[i] + (i + 1 < n ? k[i + 1] : 0.0); };
    c[0] = n > 1 ? -k[1] / diag(0) : 0.0;
    d[0] = g[0] / diag(0);
    for (int i = 1; i < n; ++i) {
      const double m = diag(i) + k[i] * c[i - 1];
      c[i] = i + 1 < n ? -k[i + 1] / m : 0.0;
      d[i] = (g[i] + k[i] * d[i - 1]) / m;
    }
    y[n - 1] = d[n - 1];
    for (int i = n - 2; i >= 0; --i) y[i] = d[i] - c[i] * y[i + 1];
    return y;
  }

  double h() const { return h_; }

private:
  int n_;
  double p_, h_, amp_p_, tail_;
  std::vector<double> rho_;
};

}  // namespace

RayleighResult rayleigh_min(const WeightSpec& spec, int grid_size, int iterations,
                            std::uint64_t seed, double horizon) {
  if (grid_size < 4) throw DomainError("grid_size must be >= 4");
  if (!(horizon > 0.0)) throw DomainError("horizon must be positive");
  const double p = spec.params.p;
  const RayleighQuotient RQ(spec, grid_size, horizon);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  Eigen::VectorXd x(grid_size);
  double acc = 0.0;
  for (int i = 0; i < grid_size; ++i) {
    acc += U(rng) * std::exp(-(i + 1) * RQ.h() / 4.0);
    x[i] = acc;
  }
  Eigen::VectorXd g, gn;
  double den = 0.0;
  double Q = RQ(x, g, den);
  x /= std::pow(den, 1.0 / p);
  Q = RQ(x, g, den);
  double tau = 1.0;
  int it = 0, quiet = 0;
  bool converged = false;
  for (; it < iterations; ++it) {
    const Eigen::VectorXd d = RQ.precondition(x, g);
    const double slope = g.dot(d);
    if (!(slope > 0.0)) {
      converged = true;
      break;
    }
    bool accepted = false;
    Eigen::VectorXd xn;
    double Qn = Q, dn = den;
    for (int b = 0; b < 60; ++b) {
      xn = x - tau * d;
      Qn = RQ(xn, gn, dn);
      if (std::isfinite(Qn) && Qn <= Q - 1e-4 * tau * slope) {
        accepted = true;
        break;
      }
      tau *= 0.5;
    }
    if (!accepted) {
      converged = true;  // no descent left at working precision
      break;
    }
    const double rel = (Q - Qn) / Q;
    x = xn / std::pow(dn, 1.0 / p);
    Q = RQ(x, g, den);
    tau = std::min(tau * 2.0, 1e6);
    quiet = rel < 1e-14 ? quiet + 1 : 0;
    if (quiet >= 5) {
      converged = true;
      break;
    }
  }
  RayleighResult out;
  out.lambda = Q;
  out.floor = spec.kind == WeightKind::Vp ? std::pow(p, p) / gamma_fn(p) : 0.0;
  out.above_floor = out.lambda >= out.floor - 1e-6;
  Eigen::VectorXd t(grid_size + 1), w(grid_size + 1);
  t[0] = 0.0;
  w[0] = 0.0;
  const double sign = x[grid_size - 1] < 0 ? -1.0 : 1.0;
  for (int i = 0; i < grid_size; ++i) {
    t[i + 1] = (i + 1) * RQ.h();
    w[i + 1] = sign * x[i];
  }
  out.minimizer = Profile1D(t, w, p);
  out.iterations = it;
  out.converged = converged;
  return out;
}

ElCheck el_check(const Params& params, const MaxResult& result, int hats) {
  const Params P = params.with_beta(0.0);
  const Space sp = P.space();
  const double p = P.p, N = P.N, gamma = P.pprime(), wN = omega(N);
  const double alpha = result.alpha_ratio * optimal_exponent(P);
  const WeightSpec spec = WeightSpec::vp(P);
  const auto u = moser_pullback(sp, result.profile);
  const MoserMap& map = u->map();

  ElCheck out;
  out.norm = u->grad_norm();
  const auto den = field_integral(
      *u, [&](double v) { return v > 0.0 ? gamma * std::log(v) + alpha * std::pow(v, gamma) : kNegInf; },
      density_of(spec));
  out.lambda = 1.0 / den.value;

  const double top = std::min(12.0, result.profile.horizon());
  const auto tv = chebyshev_vertices(top, hats);
  std::vector<double> lhs, rhs;
  double largest = 0.0;
  for (int j = 1; j <= hats; ++j) {
    const Hat h{tv[j - 1], tv[j], tv[j + 1]};
    auto left = [&](double r) {
      const double t = map.t(r);
      const double dphi = -h.slope(t) * map.dt_dr(r);
      return wN * std::pow(r, N - 1.0) * flux(p, u->derivative(r)) * dphi;
    };
    auto right = [&](double r) {
      const double v = u->value(r);
      if (!(v > 0.0)) return 0.0;
      const double lg = (gamma - 1.0) * std::log(v) + alpha * std::pow(v, gamma) + log_radial_density(spec, r);
      return std::exp(lg) * h.value(map.t(r));
    };
    const double ra = map.r(h.c), rb = map.r(h.b), rc = map.r(h.a);
    const double L = signed_radial_integral(*u, left, ra, rb, 1e-10) +
                     signed_radial_integral(*u, left, rb, rc, 1e-10);
    const double Rv = out.lambda * (signed_radial_integral(*u, right, ra, rb, 1e-10) +
                                    signed_radial_integral(*u, right, rb, rc, 1e-10));
    lhs.push_back(L);
    rhs.push_back(Rv);
    largest = std::max(largest, std::abs(L));
  }
  out.max_residual = 0.0;
  for (std::size_t i = 0; i < lhs.size(); ++i) {
    out.residuals.push_back(std::abs(lhs[i] - rhs[i]) / largest);
    out.max_residual = std::max(out.max_residual, out.residuals.back());
  }
  return out;
}

}  // namespace tmlab
