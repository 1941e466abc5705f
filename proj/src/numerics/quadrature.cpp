#include "tmlab/numerics/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <queue>
#include <vector>

namespace tmlab::numerics {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Gauss-Kronrod 7/15 nodes on [-1, 1] (positive half, centre last).
constexpr std::array<double, 8> kXk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
// Gauss weights for the odd Kronrod nodes (kXk[1], kXk[3], kXk[5], centre).
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double a, b;
  double log_val;  // log |integral| for log mode, unused otherwise
  double val;      // signed value (linear mode)
  double log_err;
};

struct ByError {
  bool operator()(const Panel& x, const Panel& y) const { return x.log_err < y.log_err; }
};

// Maps the caller's interval onto a finite one when needed.
struct Mapping {
  enum Kind { identity, upper_tail, lower_tail } kind = identity;
  double anchor = 0.0;
  double x(double s) const {
    switch (kind) {
      case upper_tail: return anchor + s / (1.0 - s);
      case lower_tail: return anchor - s / (1.0 - s);
      default: return s;
    }
  }
  double log_jac(double s) const { return kind == identity ? 0.0 : -2.0 * std::log1p(-s); }
};

Panel eval_log_panel(const LogIntegrand& g, const Mapping& map, double a, double b) {
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  std::array<double, 15> lv;
  for (int i = 0; i < 7; ++i) {
    const double s1 = c - h * kXk[i], s2 = c + h * kXk[i];
    lv[2 * i] = g(map.x(s1)) + map.log_jac(s1);
    lv[2 * i + 1] = g(map.x(s2)) + map.log_jac(s2);
  }
  lv[14] = g(map.x(c)) + map.log_jac(c);
  double m = kNegInf;
  for (double v : lv)
    if (!std::isnan(v)) m = std::max(m, v);
  Panel p{a, b, kNegInf, 0.0, kNegInf};
  if (m == kNegInf) return p;
  auto ex = [&](double v) { return std::isnan(v) ? 0.0 : std::exp(v - m); };
  double k = kWk[7] * ex(lv[14]);
  double gsum = kWg[3] * ex(lv[14]);
  for (int i = 0; i < 7; ++i) {
    const double pair = ex(lv[2 * i]) + ex(lv[2 * i + 1]);
    k += kWk[i] * pair;
    if (i % 2 == 1) gsum += kWg[i / 2] * pair;
  }
  p.log_val = m + std::log(k * h);
  const double diff = std::abs(k - gsum) * h;
  // Floor the estimate at rounding level so converged panels stop splitting.
  p.log_err = m + std::log(std::max(diff, 1e-15 * k * h));
  return p;
}

Panel eval_lin_panel(const Integrand& f, const Mapping& map, double a, double b) {
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  auto fx = [&](double s) {
    const double v = f(map.x(s));
    return map.kind == Mapping::identity ? v : v * std::exp(map.log_jac(s));
  };
  const double fc = fx(c);
  double k = kWk[7] * fc, gsum = kWg[3] * fc, absk = kWk[7] * std::abs(fc);
  for (int i = 0; i < 7; ++i) {
    const double f1 = fx(c - h * kXk[i]), f2 = fx(c + h * kXk[i]);
    k += kWk[i] * (f1 + f2);
    absk += kWk[i] * (std::abs(f1) + std::abs(f2));
    if (i % 2 == 1) gsum += kWg[i / 2] * (f1 + f2);
  }
  Panel p{a, b, kNegInf, k * h, kNegInf};
  const double err = std::max(std::abs(k - gsum) * h, 1e-15 * absk * h);
  p.log_err = err > 0.0 ? std::log(err) : kNegInf;
  return p;
}

Mapping choose_mapping(double& a, double& b, Substitution sub) {
  Mapping map;
  if (std::isinf(b) && !std::isinf(a)) {
    map.kind = Mapping::upper_tail;
    map.anchor = a;
    a = 0.0;
    b = 1.0;
  } else if (std::isinf(a) && !std::isinf(b)) {
    map.kind = Mapping::lower_tail;
    map.anchor = b;
    a = 0.0;
    b = 1.0;
  } else if (sub == Substitution::inverse_tail) {
    // Finite interval mapped as the head of a tail: s in [0, (b-a)/(1+b-a)].
    map.kind = Mapping::upper_tail;
    map.anchor = a;
    const double len = b - a;
    a = 0.0;
    b = len / (1.0 + len);
  }
  return map;
}

// Running sums held as linear values scaled by exp(-ref), ref the largest
// panel log seen so far; exact totals are recomputed once at the end.
struct ScaledSum {
  double ref = kNegInf;
  double val = 0.0;
  double err = 0.0;
  void rebase(double r) {
    if (r <= ref) return;
    if (ref != kNegInf) {
      const double f = std::exp(ref - r);
      val *= f;
      err *= f;
    }
    ref = r;
  }
  void add(const Panel& p, double sign) {
    rebase(std::max(p.log_val, p.log_err));
    if (ref == kNegInf) return;
    if (p.log_val != kNegInf) val += sign * std::exp(p.log_val - ref);
    if (p.log_err != kNegInf) err += sign * std::exp(p.log_err - ref);
  }
};

template <class EvalFn>
QuadResult adapt(EvalFn eval, double a, double b, const QuadratureSpec& spec, bool log_mode) {
  std::priority_queue<Panel, std::vector<Panel>, ByError> heap;
  const Panel first = eval(a, b);
  heap.push(first);
  int subdivisions = 1;
  ScaledSum sum;
  sum.add(first, 1.0);
  double lin = first.val;

  auto satisfied = [&] {
    const double err = sum.ref == kNegInf ? 0.0 : std::max(sum.err, 0.0) * std::exp(sum.ref);
    const double mag = log_mode ? std::max(sum.val, 0.0) * std::exp(sum.ref) : std::abs(lin);
    if (log_mode && sum.ref > 700.0) {
      // Compare in scaled form when the magnitude itself overflows.
      return std::max(sum.err, 0.0) <= spec.rel_tol * std::max(sum.val, 0.0);
    }
    return err <= std::max(spec.rel_tol * mag, spec.abs_tol);
  };

  bool converged = false;
  while (true) {
    if (satisfied() || heap.top().log_err == kNegInf) {
      converged = true;
      break;
    }
    if (subdivisions >= spec.max_subdivisions) break;
    const Panel worst = heap.top();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) break;
    heap.pop();
    const Panel left = eval(worst.a, mid), right = eval(mid, worst.b);
    heap.push(left);
    heap.push(right);
    ++subdivisions;
    sum.add(worst, -1.0);
    sum.add(left, 1.0);
    sum.add(right, 1.0);
    lin += left.val + right.val - worst.val;
  }

  std::vector<Panel> ps;
  ps.reserve(heap.size());
  while (!heap.empty()) {
    ps.push_back(heap.top());
    heap.pop();
  }
  std::sort(ps.begin(), ps.end(), [](const Panel& x, const Panel& y) { return x.a < y.a; });
  QuadResult r;
  double log_total = kNegInf, lin_total = 0.0, log_err = kNegInf;
  for (const auto& p : ps) {
    log_total = log_add(log_total, p.log_val);
    lin_total += p.val;
    log_err = log_add(log_err, p.log_err);
  }
  r.subdivisions = subdivisions;
  r.converged = converged;
  r.log_error = log_err;
  r.error = std::exp(log_err);
  if (log_mode) {
    r.log_value = log_total;
    r.value = std::exp(log_total);
  } else {
    r.value = lin_total;
    r.log_value = lin_total > 0.0 ? std::log(lin_total) : kNegInf;
  }
  return r;
}

}  // namespace

double log_add(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  const double m = std::max(a, b);
  return m + std::log1p(std::exp(-std::abs(a - b)));
}

QuadResult integrate_log(const LogIntegrand& log_f, double a, double b, const QuadratureSpec& spec) {
  if (a == b) return QuadResult{};
  if (a > b) return integrate_log(log_f, b, a, spec);
  if (std::isinf(a) && std::isinf(b)) {
    const auto left = integrate_log(log_f, a, 0.0, spec);
    const auto right = integrate_log(log_f, 0.0, b, spec);
    QuadResult r;
    r.log_value = log_add(left.log_value, right.log_value);
    r.value = std::exp(r.log_value);
    r.log_error = log_add(left.log_error, right.log_error);
    r.error = std::exp(r.log_error);
    r.subdivisions = left.subdivisions + right.subdivisions;
    r.converged = left.converged && right.converged;
    return r;
  }
  const Mapping map = choose_mapping(a, b, spec.substitution);
  return adapt([&](double x, double y) { return eval_log_panel(log_f, map, x, y); }, a, b, spec, true);
}

QuadResult integrate(const Integrand& f, double a, double b, const QuadratureSpec& spec) {
  if (a == b) return QuadResult{};
  if (a > b) {
    auto r = integrate(f, b, a, spec);
    r.value = -r.value;
    return r;
  }
  if (std::isinf(a) && std::isinf(b)) {
    const auto left = integrate(f, a, 0.0, spec);
    const auto right = integrate(f, 0.0, b, spec);
    QuadResult r;
    r.value = left.value + right.value;
    r.error = left.error + right.error;
    r.log_error = std::log(r.error);
    r.subdivisions = left.subdivisions + right.subdivisions;
    r.converged = left.converged && right.converged;
    return r;
  }
  const Mapping map = choose_mapping(a, b, spec.substitution);
  return adapt([&](double x, double y) { return eval_lin_panel(f, map, x, y); }, a, b, spec, false);
}

QuadResult integrate_log_pieces(const LogIntegrand& log_f, std::span<const double> bp,
                                const QuadratureSpec& spec) {
  QuadResult total;
  for (std::size_t i = 0; i + 1 < bp.size(); ++i) {
    const auto r = integrate_log(log_f, bp[i], bp[i + 1], spec);
    total.log_value = log_add(total.log_value, r.log_value);
    total.log_error = log_add(total.log_error, r.log_error);
    total.subdivisions += r.subdivisions;
    total.converged = total.converged && r.converged;
  }
  total.value = std::exp(total.log_value);
  total.error = std::exp(total.log_error);
  return total;
}

}  // namespace tmlab::numerics
