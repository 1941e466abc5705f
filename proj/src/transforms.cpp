#include "tmlab/transforms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "tmlab/constants.hpp"
#include "tmlab/numerics/quadrature.hpp"
#include "tmlab/special.hpp"

namespace tmlab {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNegInf = -kInf;

double chord_energy(const std::vector<double>& t, const std::vector<double>& w, double p) {
  double e = 0.0;
  for (std::size_t i = 0; i + 1 < t.size(); ++i)
    e += std::pow(std::abs(w[i + 1] - w[i]), p) / std::pow(t[i + 1] - t[i], p - 1.0);
  return e;
}

double rel_diff(double a, double b) { return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300}); }

double fd1(const std::function<double(double)>& f, double x, double h) {
  return (-f(x + 2 * h) + 8 * f(x + h) - 8 * f(x - h) + f(x - 2 * h)) / (12 * h);
}

double fd2(const std::function<double(double)>& f, double x, double h) {
  return (-f(x + 2 * h) + 16 * f(x + h) - 30 * f(x) + 16 * f(x - h) - f(x - 2 * h)) / (12 * h * h);
}

}  // namespace

double t_of_r(const Params& params, double r) {
  if (!params.R.is_infinite() && !(r <= params.R.value())) throw DomainError("t_of_r needs r <= R");
  return MoserMap(params.space()).t(r);
}

double r_of_t(const Params& params, double t) { return MoserMap(params.space()).r(t); }

Pushforward moser_pushforward(const RadialField& u, double rel_tol) {
  const Space& S = u.space();
  const MoserMap map(S);
  const double A = map.amplitude(), p = S.p;
  const auto bp = u.breakpoints();
  const double growth = (S.dim - 1.0) / (p - 1.0) + 1.0;
  const double drho = std::sqrt(24.0 * rel_tol / (p * (p - 1.0))) / growth;

  // Pieces ordered by increasing t: the R = inf tail first, then segments from R inward.
  struct Piece {
    std::vector<double> t, w;
  };
  std::vector<Piece> pieces;
  double energy = 0.0;
  int refinements = 0;

  auto refine = [&](auto&& sample, double exact, int n0) {
    Piece pc;
    int n = std::max(1, n0);
    for (int it = 0;; ++it) {
      pc = sample(n);
      const double chord = chord_energy(pc.t, pc.w, p);
      if (exact - chord <= rel_tol * exact || it >= 24 || exact == 0.0) break;
      n *= 2;
      ++refinements;
    }
    pieces.push_back(std::move(pc));
  };

  if (S.radius.is_infinite()) {
    const double rL = bp.back(), tL = map.t(rL);
    const double exact = u.segment_energy(rL, kInf);
    energy += exact;
    refine(
        [&](int n) {
          Piece pc;
          for (int j = 0; j <= n; ++j) {
            const double tj = tL * j / n;
            pc.t.push_back(tj);
            pc.w.push_back(j == 0 ? 0.0 : A * u.value(map.r(tj)));
          }
          return pc;
        },
        exact, 1);
  }
  for (std::size_t i = bp.size() - 1; i >= 1; --i) {
    const double a = bp[i - 1], b = bp[i];
    const double exact = u.segment_energy(a, b);
    energy += exact;
    const int n0 = exact == 0.0 ? 1 : static_cast<int>(std::ceil(std::log(b / a) / drho));
    refine(
        [&](int n) {
          Piece pc;
          for (int j = n; j >= 0; --j) {
            const double r = j == n ? b : (j == 0 ? a : a * std::pow(b / a, double(j) / n));
            pc.t.push_back(map.t(r));
            pc.w.push_back(A * u.value(r));
          }
          return pc;
        },
        exact, std::min(n0, 1 << 22));
  }

  std::vector<double> t{0.0}, w{0.0};
  for (const auto& pc : pieces)
    for (std::size_t j = 0; j < pc.t.size(); ++j)
      if (pc.t[j] > t.back()) {
        t.push_back(pc.t[j]);
        w.push_back(pc.w[j]);
      }
  if (!S.radius.is_infinite() && bp.size() == 1) {
    // Field constant up to R: nothing to push.
  }
  Eigen::VectorXd tv = Eigen::Map<Eigen::VectorXd>(t.data(), t.size());
  Eigen::VectorXd wv = Eigen::Map<Eigen::VectorXd>(w.data(), w.size());
  if (tv.size() < 2) {
    tv = Eigen::Vector2d(0.0, 1.0);
    wv = Eigen::Vector2d(0.0, 0.0);
  }
  Pushforward out{Profile1D(tv, wv, p), energy, 0.0, 0.0, refinements};
  out.budget_t = out.profile.budget();
  out.defect = energy - out.budget_t;
  return out;
}

std::shared_ptr<PulledBackProfile> moser_pullback(const Space& space, const Profile1D& w) {
  return std::make_shared<PulledBackProfile>(space, w);
}

FunctionalReport field_integral(const RadialField& u, const LogFactor& log_g,
                                const LogDensity& log_density, double log_cap, double rel_tol) {
  const Space& S = u.space();
  FunctionalReport rep;
  rep.max_log_integrand = kNegInf;
  auto log_f = [&](double rho) {
    const double r = std::exp(rho);
    if (!(r > 0.0)) return kNegInf;
    if (!S.radius.is_infinite() && r >= S.radius.value()) return kNegInf;
    const double lg = log_g(u.value(r));
    if (lg == kNegInf) return kNegInf;
    const double v = log_density(r) + rho + lg;
    if (v > rep.max_log_integrand) rep.max_log_integrand = v;
    return std::isnan(v) ? kNegInf : v;
  };
  std::vector<double> rho;
  for (double b : u.breakpoints()) rho.push_back(std::log(b));
  if (!S.critical()) {
    const MoserMap map(S);
    for (double t : {0.02, 0.2, 1.0, 3.0, 8.0, 20.0, 50.0, 150.0, 500.0}) rho.push_back(std::log(map.r(t)));
  }
  std::erase_if(rho, [](double x) { return !std::isfinite(x); });
  std::sort(rho.begin(), rho.end());
  rho.erase(std::unique(rho.begin(), rho.end()), rho.end());
  rho.insert(rho.begin(), kNegInf);
  if (S.radius.is_infinite()) rho.push_back(kInf);
  else if (rho.back() < std::log(S.radius.value())) rho.push_back(std::log(S.radius.value()));
  const auto r = numerics::integrate_log_pieces(log_f, rho, {.rel_tol = rel_tol});
  rep.log_value = r.log_value;
  rep.value = r.value;
  rep.error = r.error;
  rep.converged = r.converged;
  rep.divergent = rep.max_log_integrand > log_cap || std::isnan(r.log_value) || r.log_value == kInf;
  return rep;
}

double signed_radial_integral(const RadialField& u, const std::function<double(double)>& h,
                              double a, double b, double rel_tol) {
  std::vector<double> cuts{a};
  for (double x : u.breakpoints())
    if (x > a && x < b) cuts.push_back(x);
  cuts.push_back(b);
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    if (!(cuts[i + 1] > cuts[i])) continue;
    const auto q = numerics::integrate([&](double rho) { const double r = std::exp(rho); return h(r) * r; },
                                       std::log(cuts[i]), std::log(cuts[i + 1]),
                                       {.rel_tol = rel_tol, .abs_tol = 1e-300});
    total += q.value;
  }
  return total;
}

FunctionalReport exp_functional(const RadialField& u, double alpha, double q,
                                const LogDensity& log_density, double log_cap, double rel_tol) {
  return field_integral(
      u, [&](double v) { return alpha * std::pow(std::abs(v), q); }, log_density, log_cap, rel_tol);
}

LqReport weighted_lq_norm(const RadialField& u, double q, const WeightSpec& spec, double a_bound) {
  if (!(q >= 1.0)) throw DomainError("q must be >= 1");
  if (!(a_bound >= 0.0)) throw DomainError("a_bound must be nonnegative");
  const double p = spec.params.p;
  LqReport rep{};
  if (a_bound > 0.0) {
    const auto I = field_integral(
        u, [&](double v) { return v == 0.0 ? kNegInf : q * std::log(std::abs(v)); },
        [&](double r) { return log_radial_density(spec, r); });
    rep.norm = std::pow(a_bound * I.value, 1.0 / q);
  }
  rep.bound = std::pow(a_bound, 1.0 / q) * std::pow(omega(p), 1.0 / q - 1.0 / p) *
              std::pow(p, -1.0 + 1.0 / p - 1.0 / q) * std::pow(gamma_fn((1.0 - 1.0 / p) * q + 1.0), 1.0 / q) *
              u.grad_norm();
  rep.holds = rep.norm <= rep.bound + 1e-6 * (1.0 + rep.bound);
  return rep;
}

FunctionalReport tm_functional(const RadialField& u, double alpha, const WeightSpec& spec,
                               double log_cap) {
  if (!(alpha >= 0.0)) throw DomainError("tm_functional needs alpha >= 0");
  const Space& S = u.space();
  if (S.p != spec.params.p || S.dim != spec.params.N || !(S.radius == spec.params.R))
    throw DomainError("profile and weight live on different balls");
  return exp_functional(
      u, alpha, spec.params.pprime(), [&](double r) { return log_radial_density(spec, r); }, log_cap,
      1e-10);
}

FunctionalReport moser_integral(const Profile1D& w, double a, double rate, double rel_tol) {
  const double pp = w.p / (w.p - 1.0);
  double log_total = kNegInf, log_err = kNegInf;
  bool converged = true;
  double max_log = kNegInf;
  for (Eigen::Index i = 0; i + 1 < w.t.size(); ++i) {
    const double t0 = w.t[i], t1 = w.t[i + 1], w0 = w.w[i], dw = w.w[i + 1] - w.w[i];
    auto log_f = [&](double s) {
      const double wv = w0 + dw * (s - t0) / (t1 - t0);
      return a * std::pow(std::abs(wv), pp) - rate * s;
    };
    max_log = std::max({max_log, log_f(t0), log_f(t1)});
    const auto r = numerics::integrate_log(log_f, t0, t1, {.rel_tol = rel_tol});
    log_total = numerics::log_add(log_total, r.log_value);
    log_err = numerics::log_add(log_err, r.log_error);
    converged = converged && r.converged;
  }
  const double T = w.horizon();
  const double tail = a * std::pow(std::abs(w.tail_value()), pp) - rate * T - std::log(rate);
  log_total = numerics::log_add(log_total, tail);
  FunctionalReport rep;
  rep.log_value = log_total;
  rep.value = std::exp(log_total);
  rep.error = std::exp(log_err);
  rep.converged = converged;
  rep.max_log_integrand = max_log;
  return rep;
}

FieldPtr harmonic_transplant(FieldPtr source, HarmonicDirection direction, const Space& target) {
  const Space& S = source->space();
  const double p = S.p;
  if (p != std::round(p)) throw DomainError("harmonic transplantation needs integer p");
  if (target.p != p) throw DomainError("harmonic transplantation keeps the exponent");
  const Space& sub = direction == HarmonicDirection::to_critical ? S : target;
  const Space& crit = direction == HarmonicDirection::to_critical ? target : S;
  if (!crit.critical() || crit.radius.is_infinite() || crit.radius.value() != 1.0)
    throw DomainError("harmonic transplantation needs the unit ball with N = p");
  if (!(sub.dim > p)) throw DomainError("harmonic transplantation needs m > p");
  return std::make_shared<TransplantedProfile>(target, std::move(source), 1.0, 1.0);
}

FieldPtr beta_transplant(FieldPtr v, double beta) {
  const Space& S = v->space();
  if (S.critical()) throw DomainError("beta_transplant needs p < N");
  if (!(beta > 0.0) || !(beta < S.p)) throw DomainError("beta_transplant needs 0 < beta < p");
  const double lambda = (S.p - beta) / S.p;
  const double amp = std::pow(S.p / (S.p - beta), (S.p - 1.0) / S.p);
  return std::make_shared<TransplantedProfile>(S, std::move(v), lambda, amp);
}

double beta_radius_map(const Params& params, double beta, double r) {
  if (!(beta > 0.0) || !(beta < params.p)) throw DomainError("beta must lie in (0, p)");
  const MoserMap map(params.space());
  return map.r((params.p - beta) / params.p * map.t(r));
}

IdentityReport harmonic_identities(const RadialField& u, const RadialField& v, double alpha) {
  const Space& Su = u.space();
  const Space& Sv = v.space();
  if (!Sv.critical()) throw DomainError("v must live on the critical ball");
  IdentityReport rep{};
  rep.norm_source = u.grad_norm();
  rep.norm_target = v.grad_norm();
  rep.norm_rel_error = rel_diff(rep.norm_source, rep.norm_target);
  const Params Pu(Su.p, Su.dim, Su.radius);
  rep.functional_lhs = tm_functional(u, alpha, WeightSpec::vp(Pu)).value;
  const double log_wN = std::log(omega(Sv.dim));
  rep.functional_rhs =
      exp_functional(v, alpha, Sv.pprime(), [&](double s) { return log_wN + (Sv.dim - 1) * std::log(s); })
          .value;
  rep.functional_rel_error = rel_diff(rep.functional_lhs, rep.functional_rhs);
  return rep;
}

IdentityReport beta_identities(const RadialField& u, const RadialField& v, double beta,
                               double alpha) {
  const Space& S = v.space();
  const Params P(S.p, S.dim, S.radius, 0.0, beta);
  IdentityReport rep{};
  rep.norm_source = v.grad_norm();
  rep.norm_target = u.grad_norm();
  rep.norm_rel_error = rel_diff(rep.norm_source, rep.norm_target);
  const double scale = S.p / (S.p - beta);
  rep.functional_lhs = tm_functional(u, alpha, WeightSpec::vp_beta(P)).value;
  rep.functional_rhs_unscaled = tm_functional(v, alpha * scale, WeightSpec::vp(P)).value;
  rep.functional_rhs = scale * rep.functional_rhs_unscaled;
  rep.functional_rel_error = rel_diff(rep.functional_lhs, rep.functional_rhs);
  return rep;
}

EquivalenceReport plap_equivalence_check(const std::function<double(double)>& v, int p, int m,
                                         double R, double h, std::vector<double> s_points) {
  if (!(m > p) || p < 2) throw DomainError("equivalence check needs integer 2 <= p < m");
  if (!(h > 0.0) || !(R > 0.0)) throw DomainError("equivalence check needs h, R > 0");
  if (s_points.empty())
    for (int j = 1; j <= 9; ++j) s_points.push_back(0.1 * j);
  const Params P(p, m, Radius::finite(R));
  const MoserMap mx(P.space());
  const WeightSpec Vp = WeightSpec::vp(P);
  auto s_of_r = [&](double r) { return std::exp(-mx.t(std::min(r, R)) / p); };
  auto u = [&](double r) { return v(s_of_r(r)); };
  const long M = std::lround(R / h);
  EquivalenceReport rep{h, 0.0, 0.0, 0, true};
  for (double sj : s_points) {
    const double rj = mx.r(-p * std::log(sj));
    const long i = std::lround((R - rj) / h);  // nodes r_i = R - i h
    const double r = R - i * h;
    if (i < 5 || M - i < 5) continue;
    const double s = s_of_r(r);
    if (s < 5 * h || 1.0 - s < 5 * h) continue;
    const double du = fd1(u, r, h), d2u = fd2(u, r, h);
    const double lap_p = std::pow(std::abs(du), p - 2.0) * ((p - 1.0) * d2u + (m - 1.0) * du / r);
    const double rhs = lap_p / weight(Vp, r);
    const double dv = fd1(v, s, h), d2v = fd2(v, s, h);
    const double lap_N = std::pow(std::abs(dv), p - 2.0) * ((p - 1.0) * d2v + (p - 1.0) * dv / s);
    const double diff = std::abs(lap_N - rhs);
    rep.max_abs_discrepancy = std::max(rep.max_abs_discrepancy, diff);
    rep.max_rel_discrepancy = std::max(rep.max_rel_discrepancy, diff / std::max(std::abs(lap_N), 1e-8));
    ++rep.points;
  }
  rep.resolved = rep.points > 0;
  return rep;
}

RadialLemmaReport radial_lemma_check(const RadialField& u, int extra) {
  const Space& S = u.space();
  if (S.critical()) throw DomainError("the Radial Lemma form here needs p < N");
  const double p = S.p, kappa = S.kappa();
  const double C = std::pow((p - 1.0) / (S.dim - p), (p - 1.0) / p) * std::pow(omega(S.dim), -1.0 / p);
  const double r_term = S.radius.neg_power(kappa);
  const double outer = S.radius.is_infinite() ? kInf : S.radius.value();
  const auto bp = u.breakpoints();
  std::vector<double> pts;
  for (std::size_t i = 0; i < bp.size(); ++i) {
    pts.push_back(bp[i]);
    if (i + 1 < bp.size())
      for (int j = 1; j <= extra; ++j) pts.push_back(bp[i] * std::pow(bp[i + 1] / bp[i], double(j) / (extra + 1)));
  }
  if (S.radius.is_infinite())
    for (int j = 1; j <= extra; ++j) pts.push_back(bp.back() * std::pow(10.0, j));
  const double total = u.dirichlet_energy();
  // Exterior energies accumulated from the outside in.
  std::sort(pts.begin(), pts.end());
  std::vector<double> ext(pts.size());
  double acc = S.radius.is_infinite() ? u.segment_energy(pts.back(), kInf) : 0.0;
  for (std::size_t i = pts.size(); i-- > 0;) {
    const double hi = i + 1 < pts.size() ? pts[i + 1] : outer;
    if (i + 1 < pts.size() || !S.radius.is_infinite()) acc += hi > pts[i] ? u.segment_energy(pts[i], hi) : 0.0;
    ext[i] = acc;
  }
  RadialLemmaReport rep{0.0, 0.0, kInf, 0};
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const double r = pts[i], val = std::abs(u.value(r));
    if (val == 0.0) continue;
    const double geo = std::pow(std::abs(std::pow(r, -kappa) - r_term), (p - 1.0) / p);
    const double loc = C * std::pow(ext[i], 1.0 / p) * geo;
    const double glob = C * std::pow(total, 1.0 / p) * geo;
    const double rl = loc > 0.0 ? val / loc : kInf;
    rep.max_ratio_local = std::max(rep.max_ratio_local, rl);
    rep.max_ratio_global = std::max(rep.max_ratio_global, glob > 0.0 ? val / glob : kInf);
    if (r >= bp.front()) rep.min_ratio_local = std::min(rep.min_ratio_local, rl);
    ++rep.nodes;
  }
  return rep;
}

}  // namespace tmlab
