#include "tmlab/numerics/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

namespace tmlab::numerics {

ScalarMax golden_section_max(const std::function<double(double)>& f, double a, double b,
                             double tol, int max_iter) {
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - g * (b - a), d = a + g * (b - a);
  double fc = f(c), fd = f(d);
  int it = 0;
  while (std::abs(b - a) > tol * (1.0 + std::abs(a) + std::abs(b)) && it < max_iter) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - g * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + g * (b - a);
      fd = f(d);
    }
    ++it;
  }
  return fc >= fd ? ScalarMax{c, fc, it} : ScalarMax{d, fd, it};
}

RootResult find_root(const std::function<double(double)>& f, double a, double b, double xtol,
                     int max_iter) {
  double fa = f(a), fb = f(b);
  RootResult r;
  if (fa == 0.0) return {a, 0.0, 0, true};
  if (fb == 0.0) return {b, 0.0, 0, true};
  if (fa * fb > 0.0) {
    r.x = std::abs(fa) < std::abs(fb) ? a : b;
    r.fx = std::min(std::abs(fa), std::abs(fb));
    return r;
  }
  double c = a, fc = fa, d = b - a, e = d;
  for (int it = 1; it <= max_iter; ++it) {
    if (fb * fc > 0.0) {
      c = a;
      fc = fa;
      d = e = b - a;
    }
    if (std::abs(fc) < std::abs(fb)) {
      a = b;
      b = c;
      c = a;
      fa = fb;
      fb = fc;
      fc = fa;
    }
    const double tol = 2.0 * std::numeric_limits<double>::epsilon() * std::abs(b) + 0.5 * xtol;
    const double m = 0.5 * (c - b);
    if (std::abs(m) <= tol || fb == 0.0) return {b, fb, it, true};
    if (std::abs(e) >= tol && std::abs(fa) > std::abs(fb)) {
      double s = fb / fa, pp, q;
      if (a == c) {
        pp = 2.0 * m * s;
        q = 1.0 - s;
      } else {
        const double qa = fa / fc, rr = fb / fc;
        pp = s * (2.0 * m * qa * (qa - rr) - (b - a) * (rr - 1.0));
        q = (qa - 1.0) * (rr - 1.0) * (s - 1.0);
      }
      if (pp > 0.0) q = -q;
      pp = std::abs(pp);
      if (2.0 * pp < std::min(3.0 * m * q - std::abs(tol * q), std::abs(e * q))) {
        e = d;
        d = pp / q;
      } else {
        d = m;
        e = m;
      }
    } else {
      d = m;
      e = m;
    }
    a = b;
    fa = fb;
    b += std::abs(d) > tol ? d : (m > 0 ? tol : -tol);
    fb = f(b);
  }
  return {b, fb, max_iter, false};
}

namespace {

// Root of y + nu y^{p-1} = c on [0, c] (c > 0, nu >= 0), safeguarded Newton.
double shrink(double c, double nu, double p, double guess) {
  if (nu == 0.0) return c;
  double lo = 0.0, hi = c;
  // both c and (c/nu)^{1/(p-1)} bound the root from above
  const double cap = std::min(c, std::pow(c / nu, 1.0 / (p - 1.0)));
  double y = (guess > 0.0 && guess < cap) ? guess : cap;
  hi = cap;
  for (int it = 0; it < 100; ++it) {
    const double yp = std::pow(y, p - 2.0);
    const double h = y + nu * yp * y - c;
    if (h == 0.0) return y;
    if (h > 0.0) hi = y; else lo = y;
    const double dh = 1.0 + nu * (p - 1.0) * yp;
    double next = y - h / dh;
    if (!(next >= lo && next <= hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - y) <= 1e-15 * c || hi - lo <= 1e-15 * c) return next;
    y = next;
  }
  return y;
}

}  // namespace

Eigen::VectorXd project_pball(const Eigen::VectorXd& x, const Eigen::VectorXd& w, double p,
                              double budget) {
  const Eigen::VectorXd xp = x.cwiseMax(0.0);
  const double load = (w.array() * xp.array().pow(p)).sum();
  if (load <= budget) return xp;
  // p = 2: y = x / (1 + nu) is a plain rescale.
  if (p == 2.0) return xp * std::sqrt(budget / load);

  Eigen::VectorXd y = xp;
  double slope = 0.0;  // d(load)/d(ln nu)
  auto excess = [&](double nu) {
    double s = 0.0, d = 0.0;
    for (Eigen::Index j = 0; j < y.size(); ++j) {
      if (!(xp[j] > 0.0)) {
        y[j] = 0.0;
        continue;
      }
      y[j] = shrink(xp[j], nu, p, y[j]);
      const double yp1 = std::pow(y[j], p - 1.0);
      s += w[j] * yp1 * y[j];
      d -= w[j] * p * yp1 * nu * yp1 / (1.0 + nu * (p - 1.0) * yp1 / y[j]);
    }
    slope = d;
    return s - budget;
  };
  // Safeguarded Newton in ln nu. nu0 below is the large-nu limit, where
  // y_j <= (x_j/nu)^{1/(p-1)} makes the load at most the budget: an upper end.
  const double pp = p / (p - 1.0);
  const double nu0 = std::pow((w.array() * xp.array().pow(pp)).sum() / budget, (p - 1.0) / p);
  double lo = -std::numeric_limits<double>::infinity(), hi = lo;
  double ln = std::log(nu0);
  for (int it = 0; it < 200; ++it) {
    const double e = excess(std::exp(ln));
    if (std::abs(e) <= 1e-14 * budget) break;
    if (e > 0.0) lo = ln; else hi = ln;
    double next = slope < 0.0 ? ln - e / slope : ln;
    const bool has_lo = std::isfinite(lo), has_hi = std::isfinite(hi);
    if (has_lo && has_hi) {
      if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
      if (hi - lo < 1e-15 * (1.0 + std::abs(ln))) break;
    } else if (has_lo) {
      next = std::clamp(next, lo + 1e-3, lo + 4.0);
    } else {
      next = std::clamp(next, hi - 4.0, hi - 1e-3);
    }
    ln = next;
  }
  // Land exactly on the constraint surface; the scale factor is 1 + O(1e-14).
  const double load_y = (w.array() * y.array().pow(p)).sum();
  if (load_y > budget) y *= std::pow(budget / load_y, 1.0 / p);
  return y;
}

PgResult projected_gradient_ascent(const GradObjective& J, const Projector& project,
                                   const Eigen::VectorXd& x0, const Eigen::VectorXd& metric,
                                   const Residual& residual, const PgOptions& opt) {
  PgResult out;
  Eigen::VectorXd x = project(x0), g(x.size()), gt(x.size());
  double f = J(x, g);
  out.evaluations = 1;
  out.initial_value = f;
  double tau = opt.initial_step;
  int it = 0;
  double res = residual(x, g);
  for (; it < opt.max_iterations && res > opt.tolerance; ++it) {
    const Eigen::VectorXd d = g.cwiseQuotient(metric);
    bool accepted = false;
    Eigen::VectorXd xt;
    double ft = f;
    for (int bt = 0; bt < opt.max_backtracks; ++bt) {
      xt = project(x + tau * d);
      ft = J(xt, gt);
      ++out.evaluations;
      // Armijo on the arc: sufficient increase relative to the metric distance moved.
      const Eigen::VectorXd step = xt - x;
      const double moved = (step.array().square() * metric.array()).sum();
      if (ft >= f + opt.armijo * moved / tau && moved > 0.0) {
        accepted = true;
        break;
      }
      if (moved == 0.0) break;
      tau *= 0.5;
    }
    if (!accepted) break;
    x = std::move(xt);
    f = ft;
    g = gt;
    res = residual(x, g);
    tau = std::min(2.0 * tau, opt.max_step);
  }
  out.x = x;
  out.value = f;
  out.residual = res;
  out.iterations = it;
  out.converged = res <= opt.tolerance;
  return out;
}

}  // namespace tmlab::numerics
