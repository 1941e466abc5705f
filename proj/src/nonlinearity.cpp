#include "tmlab/nonlinearity.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "tmlab/constants.hpp"
#include "tmlab/numerics/quadrature.hpp"
#include "tmlab/special.hpp"

namespace tmlab {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNegInf = -kInf;
constexpr double kTableEnd = 60.0;
constexpr double kTableStep = 0.05;

// 12-point Gauss-Legendre on [-1, 1].
constexpr std::array<double, 6> kGx{0.1252334085114689, 0.3678314989981802, 0.5873179542866175,
                                    0.7699026741943047, 0.9041172563704749, 0.9815606342467192};
constexpr std::array<double, 6> kGw{0.2491470458134028, 0.2334925365383548, 0.2031674267230659,
                                    0.1600783285433462, 0.1069393259953184, 0.0471753363865118};

double log_expm1(double x) { return x > 30.0 ? x + std::log1p(-std::exp(-x)) : std::log(std::expm1(x)); }

}  // namespace

Nonlinearity::Nonlinearity(NlKind kind, NlCoeffs coeffs, double p) : kind_(kind), c_(coeffs), p_(p) {
  if (!(p > 1.0)) throw DomainError("nonlinearity needs p > 1");
  if (kind_ != NlKind::zero) {
    if (!(c_.k > 0.0)) throw DomainError("nonlinearity coefficient k must be positive");
    if (!(c_.beta > 0.0)) throw DomainError("power exponent must be positive");
  }
  if (kind_ == NlKind::f1 && !(c_.beta > p - 1.0)) throw DomainError("f1 needs beta > p - 1");
  if ((kind_ == NlKind::f2 || kind_ == NlKind::f3 || kind_ == NlKind::f4 || kind_ == NlKind::f5) &&
      !(c_.alpha > 0.0))
    throw DomainError("exponential coefficient alpha must be positive");
  if (kind_ == NlKind::f2 && !(c_.gamma > 0.0 && c_.gamma < p / (p - 1.0)))
    throw DomainError("f2 needs 0 < gamma < p'");
  if (kind_ == NlKind::f5) {
    if (c_.delta <= 0.0) c_.delta = p == 2.0 ? 1.0 : std::min(1.0, 1.0 / std::abs(p - 2.0));
    if (c_.threshold <= 0.0) c_.threshold = f5_threshold_scan(c_, p);
  }
  build_table();
}

std::string Nonlinearity::name() const {
  switch (kind_) {
    case NlKind::zero: return "zero";
    case NlKind::f1: return "f1";
    case NlKind::f2: return "f2";
    case NlKind::f3: return "f3";
    case NlKind::f4: return "f4";
    case NlKind::f5: return "f5";
  }
  return "unknown";
}

double Nonlinearity::log_f(double t) const {
  if (!(t > 0.0) || kind_ == NlKind::zero) return kNegInf;
  const double pp = p_ / (p_ - 1.0);
  const double base = std::log(c_.k) + c_.beta * std::log(t);
  switch (kind_) {
    case NlKind::f1: return base;
    case NlKind::f2: return base + log_expm1(c_.alpha * std::pow(t, c_.gamma));
    case NlKind::f3: return base + log_expm1(c_.alpha * std::pow(t, pp));
    case NlKind::f4: return base + c_.alpha * std::pow(t, pp);
    case NlKind::f5: {
      const double T = c_.threshold, T1 = (1.0 + c_.delta) * T;
      if (t <= T) return kNegInf;
      if (t < T1) {
        const double log_f4_T1 = std::log(c_.k) + c_.beta * std::log(T1) + c_.alpha * std::pow(T1, pp);
        return log_f4_T1 - std::log(c_.delta * T) + std::log(t - T);
      }
      return base + c_.alpha * std::pow(t, pp);
    }
    default: return kNegInf;
  }
}

double Nonlinearity::f(double t) const {
  if (kind_ == NlKind::zero || t == 0.0) return 0.0;
  if (kind_ == NlKind::f5) return t > 0.0 ? std::exp(log_f(t)) : 0.0;
  return t > 0.0 ? std::exp(log_f(t)) : -std::exp(log_f(-t));
}

double Nonlinearity::log_integral(double a, double b) const {
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  double m = kNegInf;
  std::array<double, 12> v;
  for (int i = 0; i < 6; ++i) {
    v[2 * i] = log_f(mid - half * kGx[i]) + std::log(kGw[i]);
    v[2 * i + 1] = log_f(mid + half * kGx[i]) + std::log(kGw[i]);
    m = std::max({m, v[2 * i], v[2 * i + 1]});
  }
  if (m == kNegInf) return kNegInf;
  double s = 0.0;
  for (double x : v) s += std::exp(x - m);
  return m + std::log(s) + std::log(half);
}

void Nonlinearity::build_table() {
  nodes_.clear();
  log_cum_.clear();
  if (kind_ == NlKind::zero) return;
  for (int j = 40; j >= 1; --j) nodes_.push_back(std::ldexp(kTableStep, -j));
  for (int i = 1; i * kTableStep <= kTableEnd + 1e-12; ++i) nodes_.push_back(i * kTableStep);
  if (kind_ == NlKind::f5) {
    nodes_.push_back(c_.threshold);
    nodes_.push_back((1.0 + c_.delta) * c_.threshold);
    std::sort(nodes_.begin(), nodes_.end());
    nodes_.erase(std::unique(nodes_.begin(), nodes_.end()), nodes_.end());
  }
  // leading power law below the first node
  double order = c_.beta;
  if (kind_ == NlKind::f2) order += c_.gamma;
  if (kind_ == NlKind::f3) order += p_ / (p_ - 1.0);
  const double t0 = nodes_.front();
  log_cum_.push_back(kind_ == NlKind::f5 ? kNegInf : log_f(t0) + std::log(t0 / (order + 1.0)));
  for (std::size_t i = 1; i < nodes_.size(); ++i)
    log_cum_.push_back(numerics::log_add(log_cum_.back(), log_integral(nodes_[i - 1], nodes_[i])));
}

double Nonlinearity::log_F(double t) const {
  if (!(t > 0.0) || kind_ == NlKind::zero) return kNegInf;
  if (t < nodes_.front()) {
    if (kind_ == NlKind::f5) return kNegInf;
    double order = c_.beta;
    if (kind_ == NlKind::f2) order += c_.gamma;
    if (kind_ == NlKind::f3) order += p_ / (p_ - 1.0);
    return log_f(t) + std::log(t / (order + 1.0));
  }
  auto it = std::upper_bound(nodes_.begin(), nodes_.end(), t);
  std::size_t i = static_cast<std::size_t>(it - nodes_.begin()) - 1;
  double acc = log_cum_[i], a = nodes_[i];
  // beyond the table: steps of the table width
  while (t - a > kTableStep) {
    acc = numerics::log_add(acc, log_integral(a, a + kTableStep));
    a += kTableStep;
  }
  return t > a ? numerics::log_add(acc, log_integral(a, t)) : acc;
}

double Nonlinearity::F(double t) const {
  if (kind_ == NlKind::zero || t == 0.0) return 0.0;
  if (t < 0.0) return kind_ == NlKind::f5 ? 0.0 : std::exp(log_F(-t));
  return std::exp(log_F(t));
}

Growth Nonlinearity::declared_growth() const {
  switch (kind_) {
    case NlKind::f3:
    case NlKind::f4:
    case NlKind::f5: return Growth::critical;
    default: return Growth::subcritical;
  }
}

double Nonlinearity::alpha0() const { return declared_growth() == Growth::critical ? c_.alpha : 0.0; }

AssumptionFlags Nonlinearity::assumptions(double C_V) const {
  AssumptionFlags a;
  const double p = p_, pp = p / (p - 1.0);
  std::vector<double> ts;  // positive samples
  for (int i = 1; i <= 500; ++i) ts.push_back(0.1 * i);
  auto logF = [&](double t) { return log_F(t); };

  // (A1): f(0) = 0, f(t) >= 0 >= f(-t)
  a.a1 = f(0.0) == 0.0;
  for (double t : ts) a.a1 = a.a1 && f(t) >= 0.0 && f(-t) <= 0.0;
  if (kind_ == NlKind::zero) {
    a.a7 = true;
    a.a4 = true;
    return a;
  }
  const double start = kind_ == NlKind::f5 ? (1.0 + c_.delta) * c_.threshold + 1.0 : 1.0;

  // (A3) witness F >= lambda |t|^q, q > p
  // exponential kinds: F >= k alpha int s^{beta + gamma}, gamma the exponent of the exponential
  if (kind_ == NlKind::f1) {
    a.a3_q = c_.beta + 1.0;
    a.a3_lambda = c_.k / a.a3_q;
  } else {
    a.a3_q = c_.beta + (kind_ == NlKind::f2 ? c_.gamma : pp) + 1.0;
    a.a3_lambda = c_.k * c_.alpha / a.a3_q * (kind_ == NlKind::f5 ? 1e-3 : 1.0);
  }
  a.a3_t0 = start;
  a.a3 = a.a3_q > p;
  for (double t : ts)
    if (t >= start)
      for (double s : {t, -t})
        a.a3 = a.a3 && F(s) >= a.a3_lambda * std::pow(std::abs(s), a.a3_q) * (1.0 - 1e-12);

  // (A4) against the lambda_{V_p} floor p^p / Gamma(p)
  double ls = 0.0;
  for (int j = 4; j <= 8; ++j)
    for (double s : {std::pow(10.0, -j), -std::pow(10.0, -j)}) ls = std::max(ls, p * F(s) / std::pow(std::abs(s), p));
  a.a4_limsup = ls;
  a.a4 = ls < std::pow(p, p) / gamma_fn(p);

  // (A5) mu F <= f t on |t| >= t0 with mu > p
  double mu = kInf;
  for (double t : ts)
    if (t >= start) mu = std::min(mu, std::exp(log_f(t) + std::log(t) - logF(t)));
  a.a5_mu = mu;
  a.a5_t0 = start;
  a.a5 = mu > p;

  // (A6) F <= M |f|, bounded and not growing at the end of the sample
  double M = 0.0, late = 0.0, end_ratio = 0.0;
  for (double t : ts)
    if (t >= start) {
      const double r = std::exp(logF(t) - log_f(t));
      M = std::max(M, r);
      if (t >= 25.0 && t < 26.0) late = r;
      end_ratio = r;
    }
  a.a6_M = M;
  a.a6_t0 = start;
  a.a6 = std::isfinite(M) && end_ratio <= late * (1.0 + 1e-9);

  // (A7) p F <= f t everywhere sampled, in log form; the geometric samples resolve t -> 0
  a.a7 = true;
  std::vector<double> fine = ts;
  for (int j = 1; j <= 60; ++j) fine.push_back(std::pow(10.0, -0.1 * j));
  for (int i = 1; i <= 2000; ++i) fine.push_back(0.01 * i);
  for (double t : fine) {
    const double lF = logF(t), lft = log_f(t) + std::log(t);
    if (lF == kNegInf) continue;
    if (std::log(p) + lF > lft + 1e-10) a.a7 = false;
  }

  // (A9) for critical growth
  if (declared_growth() == Growth::critical) {
    const double a0 = alpha0();
    auto lg = [&](double t) { return log_f(t) + std::log(t) - a0 * std::pow(t, pp); };
    const double g40 = lg(40.0), g50 = lg(50.0);
    a.a9_limit = g50 > g40 + 1e-9 ? kInf : std::exp(g50);
    const double Lp = lp_constant(p).estimate;
    a.a9_threshold = std::pow(p, p) / (std::pow(a0, p - 1.0) * C_V * Lp);
    a.a9_threshold_conservative = std::pow(p, p) / (std::pow(a0, p - 1.0) * C_V * p);
    a.a9 = a.a9_limit > a.a9_threshold;
    a.a9_conservative = a.a9_limit > a.a9_threshold_conservative;
  }
  return a;
}

Growth classify_growth(const Nonlinearity& nl) {
  if (nl.kind() == NlKind::zero) return Growth::subcritical;
  const double pp = nl.p() / (nl.p() - 1.0);
  // end-of-range slope of ln|f(t)| - alpha t^{p'}
  auto slope = [&](double alpha) {
    auto g = [&](double t) { return nl.log_f(t) - alpha * std::pow(t, pp); };
    return (g(50.0) - g(40.0)) / 10.0;
  };
  const Growth declared = nl.declared_growth();
  if (declared == Growth::subcritical) {
    for (double a : {0.1, 1.0, 10.0})
      if (!(slope(a) < 0.0)) return Growth::inconsistent;
    return Growth::subcritical;
  }
  const double a0 = nl.alpha0();
  if (slope(1.1 * a0) < 0.0 && slope(0.9 * a0) > 0.0) return Growth::critical;
  return Growth::inconsistent;
}

double f5_threshold_scan(const NlCoeffs& coeffs, double p) {
  for (int j = 0; j < 40; ++j) {
    NlCoeffs c = coeffs;
    c.threshold = 0.05 * std::pow(1.25, j);
    const Nonlinearity nl(NlKind::f5, c, p);
    const auto a = nl.assumptions();
    if (a.a6 && a.a7) return c.threshold;
  }
  throw DomainError("no f5 threshold passes (A6) and (A7) on the scan grid");
}

std::string to_string(Growth g) {
  switch (g) {
    case Growth::subcritical: return "subcritical";
    case Growth::critical: return "critical";
    case Growth::inconsistent: return "inconsistent declaration";
  }
  return "unknown";
}

}  // namespace tmlab
