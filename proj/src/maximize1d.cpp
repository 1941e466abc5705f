#include "tmlab/maximize1d.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "tmlab/constants.hpp"
#include "tmlab/numerics/optimize.hpp"
#include "tmlab/numerics/quadrature.hpp"
#include "tmlab/transforms.hpp"

namespace tmlab {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Gauss-Legendre nodes and weights on [0, 1] by Newton on P_n.
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
  x.resize(n);
  w.resize(n);
  for (int i = 0; i < n; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5)), dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = z;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2 * k - 1) * z * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (z * p1 - p0) / (z * z - 1.0);
      const double dz = p1 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    x[i] = 0.5 * (1.0 - z);
    w[i] = 1.0 / ((1.0 - z * z) * dp * dp);
  }
}

// Discretized objective in the cell slopes s_i.
class SlopeObjective {
public:
  SlopeObjective(const Eigen::VectorXd& t, double p, double a, int gp) : t_(t), p_(p), a_(a) {
    dt_ = t.tail(t.size() - 1) - t.head(t.size() - 1);
    gauss_legendre(gp, gx_, gw_);
  }

  const Eigen::VectorXd& dt() const { return dt_; }

  double operator()(const Eigen::VectorXd& s, Eigen::VectorXd& grad) const {
    const Eigen::Index K = dt_.size();
    const double pp = p_ / (p_ - 1.0);
    Eigen::VectorXd G(K), H(K);
    double total = 0.0, w = 0.0;
    for (Eigen::Index i = 0; i < K; ++i) {
      const double h = dt_[i];
      double g_sum = 0.0, h_sum = 0.0;
      for (std::size_t q = 0; q < gx_.size(); ++q) {
        const double tau = h * gx_[q];
        const double wq = w + s[i] * tau;
        const double e = std::exp(a_ * std::pow(wq, pp) - (t_[i] + tau)) * gw_[q] * h;
        total += e;
        const double de = wq > 0.0 ? e * a_ * pp * std::pow(wq, pp - 1.0) : 0.0;
        g_sum += de;
        h_sum += de * tau;
      }
      G[i] = g_sum;
      H[i] = h_sum;
      w += s[i] * h;
    }
    // constant tail beyond T
    const double T = t_[t_.size() - 1];
    const double tail = std::exp(a_ * std::pow(w, pp) - T);
    total += tail;
    double acc = w > 0.0 ? tail * a_ * pp * std::pow(w, pp - 1.0) : 0.0;
    grad.resize(K);
    for (Eigen::Index i = K; i-- > 0;) {
      grad[i] = dt_[i] * acc + H[i];
      acc += G[i];
    }
    return total;
  }

private:
  Eigen::VectorXd t_, dt_;
  double p_, a_;
  std::vector<double> gx_, gw_;
};

Profile1D profile_from_slopes(const Eigen::VectorXd& t, const Eigen::VectorXd& s, double p) {
  Eigen::VectorXd w(t.size());
  w[0] = 0.0;
  for (Eigen::Index i = 0; i < s.size(); ++i) w[i + 1] = w[i] + s[i] * (t[i + 1] - t[i]);
  return Profile1D(t, w, p);
}

// Average slope per cell of the ramp min(t, T) T^{-1/p}.
Eigen::VectorXd ramp_slopes(const Eigen::VectorXd& t, double T, double p) {
  Eigen::VectorXd s(t.size() - 1);
  const double slope = std::pow(T, -1.0 / p);
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    const double covered = std::clamp(T - t[i], 0.0, t[i + 1] - t[i]);
    s[i] = slope * covered / (t[i + 1] - t[i]);
  }
  return s;
}

}  // namespace

void MaxProblem::validate() const {
  if (!(alpha_ratio > 0.0) || !(alpha_ratio <= 1.0)) throw DomainError("alpha_ratio must lie in (0, 1]");
  if (!(horizon >= 10.0)) throw DomainError("horizon must be >= 10");
  if (nodes < 16) throw DomainError("need at least 16 grid nodes");
  if (!(geometric_ratio > 1.0)) throw DomainError("geometric ratio must exceed 1");
  if (gauss_points < 2) throw DomainError("need at least 2 Gauss points per cell");
}

Eigen::VectorXd MaxProblem::grid() const {
  const int K = nodes - 1, J = K / 4;
  const double q = geometric_ratio, qJ = std::pow(q, J);
  const double h0 = horizon / ((qJ - 1.0) / (q - 1.0) + (K - J) * qJ);
  Eigen::VectorXd t(nodes);
  t[0] = 0.0;
  for (int i = 0; i < K; ++i) t[i + 1] = t[i] + h0 * std::pow(q, std::min(i, J));
  t[K] = horizon;
  return t;
}

ObjectiveValue objective(const MaxProblem& problem, const Profile1D& w) {
  if (!w.admissible(1e-12)) throw DomainError("objective needs an admissible profile");
  const double a = problem.alpha_ratio, p = w.p, pp = p / (p - 1.0);
  ObjectiveValue out{};
  out.value = moser_integral(w, a).value;
  const double T = std::max(problem.horizon, w.horizon());
  const double wT = w.tail_value();
  out.tail_value = std::exp(a * std::pow(wT, pp) - T);
  const double eps = std::max(0.0, 1.0 - w.budget());
  if (eps == 0.0) {
    out.tail_envelope = out.tail_value;
  } else if (a * std::pow(eps, 1.0 / (p - 1.0)) >= 1.0) {
    out.tail_envelope = kInf;
  } else {
    auto log_f = [&](double s) {
      return a * std::pow(wT + std::pow(eps, 1.0 / p) * std::pow(s, 1.0 / pp), pp) - T - s;
    };
    const double bp[] = {0.0, 1.0, 10.0, 100.0, kInf};
    out.tail_envelope = numerics::integrate_log_pieces(log_f, bp, {.rel_tol = 1e-10}).value;
  }
  return out;
}

MaxResult solve(const MaxProblem& problem, int random_restarts, std::uint64_t seed) {
  problem.validate();
  const double p = problem.params.p;
  const Eigen::VectorXd t = problem.grid();
  const SlopeObjective J(t, p, problem.alpha_ratio, problem.gauss_points);
  const Eigen::VectorXd& dt = J.dt();
  auto project = [&](const Eigen::VectorXd& x) { return numerics::project_pball(x, dt, p, 1.0); };

  double last_value = 0.0;
  numerics::GradObjective obj = [&](const Eigen::VectorXd& s, Eigen::VectorXd& g) {
    last_value = J(s, g);
    return last_value;
  };
  numerics::Residual residual = [&](const Eigen::VectorXd& s, const Eigen::VectorXd& g) {
    const Eigen::VectorXd d = project(s + g.cwiseQuotient(dt)) - s;
    return std::sqrt((d.array().square() * dt.array()).sum()) / (1.0 + last_value);
  };
  numerics::PgOptions opt;
  opt.max_iterations = problem.max_iterations;
  opt.tolerance = problem.tolerance;

  std::vector<std::pair<std::string, Eigen::VectorXd>> seeds;
  for (int k = 1; k <= 3; ++k) seeds.emplace_back("ramp k=" + std::to_string(k), ramp_slopes(t, p * k, p));
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int i = 0; i < random_restarts; ++i) {
    const double scale = 0.5 + 9.5 * unif(rng);
    Eigen::VectorXd s(dt.size());
    for (Eigen::Index j = 0; j < s.size(); ++j) s[j] = unif(rng) * std::exp(-t[j] / scale);
    const double b = (s.array().pow(p) * dt.array()).sum();
    s *= std::pow(b, -1.0 / p);
    seeds.emplace_back("random #" + std::to_string(i + 1), s);
  }

  MaxResult best;
  best.value = -kInf;
  Eigen::VectorXd best_s;
  for (const auto& [name, s0] : seeds) {
    const auto r = numerics::projected_gradient_ascent(obj, project, s0, dt, residual, opt);
    best.restarts.push_back({name, r.initial_value, r.value, r.residual, r.iterations, r.evaluations, r.converged});
    const bool better = r.value > best.value || (r.value == best.value && r.residual < best.kkt_residual);
    if (better) {
      best.value = r.value;
      best.kkt_residual = r.residual;
      best.converged = r.converged;
      best_s = r.x;
    }
  }
  best.restarts_used = static_cast<int>(seeds.size());
  best.alpha_ratio = problem.alpha_ratio;
  best.profile = profile_from_slopes(t, best_s, p);
  // report the adaptive value of the interpolant, not the Gauss sum
  const auto ov = objective(problem, best.profile);
  best.value = ov.value;
  best.tail_contribution = ov.tail_value;
  best.tail_envelope = ov.tail_envelope;
  best.value_Trad = omega(p) / p * best.value;
  return best;
}

ConcentrationGap concentration_gap(const Params& params, int random_restarts, std::uint64_t seed) {
  const auto r = solve(MaxProblem(params, 1.0), random_restarts, seed);
  const double level = concentration_level(params.p).value;
  return {r.value, level, r.value - level, r.value >= level - 1e-6, r.value > level, r.converged};
}

MaxResult singular_variant(const Params& params, double alpha, int random_restarts,
                           std::uint64_t seed) {
  const double p = params.p, beta = params.beta;
  if (!(beta > 0.0) || !(beta < p)) throw DomainError("singular_variant needs 0 < beta < p");
  const double ratio = alpha * p / ((p - beta) * optimal_exponent(p));
  if (ratio > 1.0 + 1e-15) throw DomainError("unbounded above critical exponent");
  auto r = solve(MaxProblem(params.with_beta(0.0), std::min(ratio, 1.0)), random_restarts, seed);
  r.value_Trad = omega(p) / (p - beta) * r.value;
  return r;
}

}  // namespace tmlab
