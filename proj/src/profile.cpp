#include "tmlab/profile.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "tmlab/constants.hpp"
#include "tmlab/numerics/quadrature.hpp"

namespace tmlab {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNegInf = -kInf;

// Index i with x[i] <= s < x[i+1], clamped to [0, n-2].
Eigen::Index locate(const Eigen::VectorXd& x, double s) {
  const auto* begin = x.data();
  const auto* it = std::upper_bound(begin, begin + x.size(), s);
  Eigen::Index i = static_cast<Eigen::Index>(it - begin) - 1;
  return std::clamp<Eigen::Index>(i, 0, x.size() - 2);
}

}  // namespace

MoserMap::MoserMap(const Space& space) : space_(space) {
  const double p = space.p;
  const int N = space.dim;
  amplitude_ = std::pow(optimal_exponent(p), (p - 1.0) / p);
  if (space.critical()) {
    if (space.radius.is_infinite())
      throw DomainError("the critical Moser map needs a finite radius");
    c_ = p;
    kappa_ = 0.0;
    r_term_ = 0.0;
  } else {
    kappa_ = space.kappa();
    c_ = (p - 1.0) / (N - p) * p * std::pow(omega(p) / omega(N), 1.0 / (p - 1.0));
    r_term_ = space.radius.neg_power(kappa_);
  }
}

double MoserMap::t(double r) const {
  if (!(r > 0.0)) throw DomainError("Moser map needs r > 0");
  const Radius& R = space_.radius;
  if (!R.is_infinite() && r > R.value() * (1.0 + 1e-14))
    throw DomainError("Moser map needs r <= R");
  if (kappa_ == 0.0) return c_ * std::log(R.value() / r);
  return std::max(0.0, c_ * (std::pow(r, -kappa_) - r_term_));
}

double MoserMap::r(double t) const {
  if (!(t >= 0.0)) throw DomainError("Moser map needs t >= 0");
  if (kappa_ == 0.0) return space_.radius.value() * std::exp(-t / c_);
  if (t == 0.0) return space_.radius.value();
  return std::pow(t / c_ + r_term_, -1.0 / kappa_);
}

double MoserMap::dt_dr(double r) const {
  if (kappa_ == 0.0) return c_ / r;
  return c_ * kappa_ * std::pow(r, -kappa_ - 1.0);
}

Profile1D::Profile1D(Eigen::VectorXd t_, Eigen::VectorXd w_, double p_)
    : t(std::move(t_)), w(std::move(w_)), p(p_) {
  if (t.size() < 2 || t.size() != w.size()) throw DomainError("Profile1D needs >= 2 matching nodes");
  if (t[0] != 0.0 || w[0] != 0.0) throw DomainError("Profile1D must start at (0, 0)");
  for (Eigen::Index i = 1; i < t.size(); ++i)
    if (!(t[i] > t[i - 1])) throw DomainError("Profile1D grid must be strictly increasing");
}

Profile1D Profile1D::ramp(double T, double height, double p) {
  Eigen::VectorXd t(2), w(2);
  t << 0.0, T;
  w << 0.0, height;
  return Profile1D(t, w, p);
}

double Profile1D::budget() const {
  const Eigen::ArrayXd dt = t.tail(t.size() - 1) - t.head(t.size() - 1);
  const Eigen::ArrayXd dw = (w.tail(w.size() - 1) - w.head(w.size() - 1)).array().abs();
  return (dw.pow(p) / dt.pow(p - 1.0)).sum();
}

bool Profile1D::monotone() const {
  for (Eigen::Index i = 1; i < w.size(); ++i)
    if (w[i] < w[i - 1]) return false;
  return true;
}

bool Profile1D::admissible(double tol) const { return monotone() && budget() <= 1.0 + tol; }

double Profile1D::value(double s) const {
  if (s >= horizon()) return tail_value();
  if (s <= 0.0) return 0.0;
  const Eigen::Index i = locate(t, s);
  const double th = (s - t[i]) / (t[i + 1] - t[i]);
  return w[i] + th * (w[i + 1] - w[i]);
}

double Profile1D::slope(double s) const {
  if (s >= horizon() || s < 0.0) return 0.0;
  const Eigen::Index i = locate(t, s);
  return (w[i + 1] - w[i]) / (t[i + 1] - t[i]);
}

double RadialField::segment_energy(double a, double b) const {
  const Space& S = space();
  const double log_wN = std::log(omega(S.dim));
  auto log_f = [&](double rho) {
    const double d = std::abs(derivative(std::exp(rho)));
    if (d == 0.0) return kNegInf;
    return log_wN + S.p * std::log(d) + S.dim * rho;
  };
  const double hi = std::isinf(b) ? kInf : std::log(b);
  return numerics::integrate_log(log_f, std::log(a), hi, {.rel_tol = 1e-12}).value;
}

double RadialField::dirichlet_energy() const {
  const auto bp = breakpoints();
  double e = 0.0;
  for (std::size_t i = 0; i + 1 < bp.size(); ++i) e += segment_energy(bp[i], bp[i + 1]);
  if (space().radius.is_infinite()) e += segment_energy(bp.back(), kInf);
  return e;
}

double RadialField::grad_norm() const { return std::pow(dirichlet_energy(), 1.0 / space().p); }

RadialProfile::RadialProfile(const Space& space, Eigen::VectorXd r, Eigen::VectorXd u)
    : space_(space), r_(std::move(r)), u_(std::move(u)) {
  if (r_.size() < 1 || r_.size() != u_.size())
    throw DomainError("RadialProfile needs matching, nonempty node arrays");
  if (!(r_[0] > 0.0)) throw DomainError("RadialProfile radii must be positive");
  for (Eigen::Index i = 1; i < r_.size(); ++i)
    if (!(r_[i] > r_[i - 1])) throw DomainError("RadialProfile radii must increase strictly");
  const Radius& R = space_.radius;
  if (!R.is_infinite()) {
    const double last = r_[r_.size() - 1];
    if (last > R.value()) throw DomainError("RadialProfile radii must lie in (0, R]");
    if (last == R.value()) {
      if (u_[u_.size() - 1] != 0.0) throw DomainError("RadialProfile must vanish at r = R");
    } else {
      r_.conservativeResize(r_.size() + 1);
      u_.conservativeResize(u_.size() + 1);
      r_[r_.size() - 1] = R.value();
      u_[u_.size() - 1] = 0.0;
    }
  } else if (space_.critical()) {
    throw DomainError("the critical space requires a finite radius");
  }
}

double RadialProfile::value(double r) const {
  const Eigen::Index M = r_.size();
  if (r <= r_[0]) return u_[0];
  if (r >= r_[M - 1]) {
    if (space_.radius.is_infinite()) return u_[M - 1] * std::pow(r / r_[M - 1], -space_.kappa());
    return u_[M - 1];
  }
  const Eigen::Index i = locate(r_, r);
  const double th = (r - r_[i]) / (r_[i + 1] - r_[i]);
  return u_[i] + th * (u_[i + 1] - u_[i]);
}

double RadialProfile::derivative(double r) const {
  const Eigen::Index M = r_.size();
  if (r < r_[0]) return 0.0;
  if (r >= r_[M - 1]) {
    if (!space_.radius.is_infinite()) return 0.0;
    const double k = space_.kappa();
    return -k * u_[M - 1] * std::pow(r / r_[M - 1], -k) / r;
  }
  const Eigen::Index i = locate(r_, r);
  return (u_[i + 1] - u_[i]) / (r_[i + 1] - r_[i]);
}

std::vector<double> RadialProfile::breakpoints() const {
  return std::vector<double>(r_.data(), r_.data() + r_.size());
}

double RadialProfile::segment_energy(double a, double b) const {
  const double p = space_.p, N = space_.dim, wN = omega(space_.dim);
  const Eigen::Index M = r_.size();
  double e = 0.0;
  for (Eigen::Index i = 0; i + 1 < M; ++i) {
    const double lo = std::max(a, r_[i]), hi = std::min(b, r_[i + 1]);
    if (!(hi > lo)) continue;
    const double s = std::abs((u_[i + 1] - u_[i]) / (r_[i + 1] - r_[i]));
    if (s == 0.0) continue;
    e += wN * std::pow(s, p) * (std::pow(hi, N) - std::pow(lo, N)) / N;
  }
  if (space_.radius.is_infinite() && b > r_[M - 1]) {
    const double k = space_.kappa(), rM = r_[M - 1];
    const double lo = std::max(a, rM);
    const double span = std::pow(lo / rM, -k) - (std::isinf(b) ? 0.0 : std::pow(b / rM, -k));
    e += wN * std::pow(k, p - 1.0) * std::pow(std::abs(u_[M - 1]), p) * std::pow(rM, N - p) * span;
  }
  return e;
}

PulledBackProfile::PulledBackProfile(const Space& space, Profile1D w)
    : map_(space), w_(std::move(w)) {
  if (w_.p != space.p) throw DomainError("Profile1D exponent does not match the space");
}

double PulledBackProfile::value(double r) const { return w_.value(map_.t(r)) / map_.amplitude(); }

double PulledBackProfile::derivative(double r) const {
  return -w_.slope(map_.t(r)) * map_.dt_dr(r) / map_.amplitude();
}

std::vector<double> PulledBackProfile::breakpoints() const {
  std::vector<double> bp;
  for (Eigen::Index i = w_.t.size() - 1; i >= 0; --i) {
    const double r = map_.r(w_.t[i]);
    if (std::isinf(r)) continue;
    if (bp.empty() || r > bp.back()) bp.push_back(r);
  }
  return bp;
}

double PulledBackProfile::segment_energy(double a, double b) const {
  const double t_hi = map_.t(a), t_lo = std::isinf(b) ? 0.0 : map_.t(b);
  double e = 0.0;
  for (Eigen::Index i = 0; i + 1 < w_.t.size(); ++i) {
    const double lo = std::max(t_lo, w_.t[i]), hi = std::min(t_hi, w_.t[i + 1]);
    if (!(hi > lo)) continue;
    const double s = std::abs(w_.w[i + 1] - w_.w[i]) / (w_.t[i + 1] - w_.t[i]);
    e += std::pow(s, w_.p) * (hi - lo);
  }
  return e;
}

TransplantedProfile::TransplantedProfile(const Space& space, FieldPtr source, double lambda,
                                         double amplitude)
    : this_map_(space), src_map_(source->space()), source_(std::move(source)), lambda_(lambda),
      amplitude_(amplitude) {
  if (!(lambda_ > 0.0)) throw DomainError("transplant scale must be positive");
}

double TransplantedProfile::source_radius(double r) const {
  return src_map_.r(lambda_ * this_map_.t(r));
}

double TransplantedProfile::value(double r) const {
  const double s = source_radius(r);
  if (std::isinf(s)) return 0.0;
  return amplitude_ * source_->value(s);
}

double TransplantedProfile::derivative(double r) const {
  const double s = source_radius(r);
  if (std::isinf(s)) return 0.0;
  const double ds_dr = lambda_ * this_map_.dt_dr(r) / src_map_.dt_dr(s);
  return amplitude_ * source_->derivative(s) * ds_dr;
}

std::vector<double> TransplantedProfile::breakpoints() const {
  std::vector<double> out;
  for (double b : source_->breakpoints()) {
    const double r = this_map_.r(src_map_.t(b) / lambda_);
    if (std::isinf(r)) continue;
    if (out.empty() || r > out.back()) out.push_back(r);
  }
  const Radius& R = this_map_.space().radius;
  if (!R.is_infinite() && (out.empty() || out.back() < R.value())) out.push_back(R.value());
  return out;
}

AnalyticProfile::AnalyticProfile(const Space& space, Fn f, Fn df, std::vector<double> breakpoints)
    : space_(space), f_(std::move(f)), df_(std::move(df)), bp_(std::move(breakpoints)) {
  if (bp_.empty() || !(bp_.front() > 0.0)) throw DomainError("analytic profile needs breakpoints");
}

RadialProfile sample_profile(const RadialField& u, int per_segment) {
  const auto bp = u.breakpoints();
  std::vector<double> r;
  for (std::size_t i = 0; i + 1 < bp.size(); ++i) {
    const double ratio = bp[i + 1] / bp[i];
    for (int j = 0; j < per_segment; ++j) r.push_back(bp[i] * std::pow(ratio, double(j) / per_segment));
  }
  r.push_back(bp.back());
  if (u.space().radius.is_infinite())
    for (int j = 1; j <= per_segment; ++j) r.push_back(bp.back() * std::pow(1e3, double(j) / per_segment));
  Eigen::VectorXd rv(r.size()), uv(r.size());
  for (std::size_t i = 0; i < r.size(); ++i) {
    rv[i] = r[i];
    uv[i] = u.value(r[i]);
  }
  if (!u.space().radius.is_infinite()) uv[uv.size() - 1] = 0.0;
  return RadialProfile(u.space(), rv, uv);
}

}  // namespace tmlab
