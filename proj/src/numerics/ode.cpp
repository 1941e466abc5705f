#include "tmlab/numerics/ode.hpp"

#include <algorithm>
#include <cmath>

namespace tmlab::numerics {
namespace {

constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
// Fifth minus fourth order weights.
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;

}  // namespace

Eigen::VectorXd OdeSolution::at(double s) const {
  if (t.empty()) return {};
  const bool forward = t.back() >= t.front();
  auto less = [forward](double x, double y) { return forward ? x < y : x > y; };
  if (!less(t.front(), s)) return y.front();
  if (!less(s, t.back())) return y.back();
  const auto it = std::upper_bound(t.begin(), t.end(), s, less);
  const std::size_t i = static_cast<std::size_t>(it - t.begin()) - 1;
  const double h = t[i + 1] - t[i], th = (s - t[i]) / h;
  const double h00 = (1 + 2 * th) * (1 - th) * (1 - th), h10 = th * (1 - th) * (1 - th);
  const double h01 = th * th * (3 - 2 * th), h11 = th * th * (th - 1);
  return h00 * y[i] + h10 * h * dy[i] + h01 * y[i + 1] + h11 * h * dy[i + 1];
}

OdeSolution dormand_prince(const OdeRhs& f, double t0, const Eigen::VectorXd& y0, double t1,
                           const OdeOptions& opt, const OdeStop& stop) {
  OdeSolution sol;
  const double dir = t1 >= t0 ? 1.0 : -1.0;
  double t = t0;
  Eigen::VectorXd y = y0, k1 = f(t, y);
  sol.t.push_back(t);
  sol.y.push_back(y);
  sol.dy.push_back(k1);
  if (t0 == t1) {
    sol.success = true;
    return sol;
  }
  auto scale = [&](const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    return (opt.atol + opt.rtol * a.cwiseAbs().cwiseMax(b.cwiseAbs()).array()).matrix();
  };
  double h = opt.initial_step;
  if (h <= 0.0) {
    const Eigen::VectorXd sc = scale(y, y);
    const double d0 = y.cwiseQuotient(sc).norm(), d1 = k1.cwiseQuotient(sc).norm();
    h = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
    h = std::min(h, std::abs(t1 - t0));
  }
  h = std::min(h, opt.max_step);
  double err_prev = 1e-4;
  for (int step = 0; step < opt.max_steps; ++step) {
    if (dir * (t + dir * h - t1) > 0.0) h = std::abs(t1 - t);
    const double hs = dir * h;
    const Eigen::VectorXd k2 = f(t + c2 * hs, y + hs * a21 * k1);
    const Eigen::VectorXd k3 = f(t + c3 * hs, y + hs * (a31 * k1 + a32 * k2));
    const Eigen::VectorXd k4 = f(t + c4 * hs, y + hs * (a41 * k1 + a42 * k2 + a43 * k3));
    const Eigen::VectorXd k5 =
        f(t + c5 * hs, y + hs * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
    const Eigen::VectorXd k6 =
        f(t + hs, y + hs * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
    const Eigen::VectorXd yn = y + hs * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    const Eigen::VectorXd k7 = f(t + hs, yn);
    const Eigen::VectorXd errv =
        hs * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
    double err = errv.cwiseQuotient(scale(y, yn)).norm() / std::sqrt(double(y.size()));
    if (!std::isfinite(err)) err = 1e10;
    if (err <= 1.0) {
      t += hs;
      y = yn;
      k1 = k7;
      sol.t.push_back(t);
      sol.y.push_back(y);
      sol.dy.push_back(k1);
      if (stop && stop(t, y)) {
        sol.stopped = true;
        sol.success = true;
        return sol;
      }
      if (dir * (t - t1) >= 0.0) {
        sol.success = true;
        return sol;
      }
      const double fac = 0.9 * std::pow(err, -0.7 / 5) * std::pow(err_prev, 0.4 / 5);
      h *= std::clamp(fac, 0.2, 10.0);
      err_prev = std::max(err, 1e-4);
    } else {
      h *= std::max(0.2, 0.9 * std::pow(err, -0.2));
    }
    h = std::min(h, opt.max_step);
    if (h < 1e-14 * std::max(1.0, std::abs(t))) {
      sol.message = "step size underflow";
      return sol;
    }
  }
  sol.message = "maximum step count reached";
  return sol;
}

}  // namespace tmlab::numerics
