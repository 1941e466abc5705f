#include <cmath>
#include <numbers>

#include "doctest.h"
#include "oracles.hpp"
#include "tmlab/constants.hpp"
#include "tmlab/maximize1d.hpp"

using namespace tmlab;
using doctest::Approx;

namespace {

// int_0^T exp(a w^2 - t) dt + exp(a w(T)^2 - T), cell by cell.
double t_side(const Profile1D& w, double a) {
  double s = 0.0;
  for (Eigen::Index i = 0; i + 1 < w.t.size(); ++i)
    s += oracle::gauss_composite([&](double t) { return std::exp(a * std::pow(w.value(t), 2.0) - t); }, w.t[i],
                                 w.t[i + 1], 2);
  return s + std::exp(a * w.tail_value() * w.tail_value() - w.horizon());
}

}  // namespace

TEST_SUITE("maximize1d") {
  TEST_CASE("objective of a ramp") {
    MaxProblem mp(Params(2.0, 3, Radius::finite(1.0)), 1.0);
    const auto w = Profile1D::ramp(2.0, std::sqrt(2.0), 2.0);
    const auto v = objective(mp, w);
    CHECK(v.value == Approx(t_side(w, 1.0)).epsilon(1e-9));
  }

  TEST_CASE("the maximizer at the critical exponent beats 1 + e") {
    MaxProblem mp(Params(2.0, 3, Radius::finite(1.0)), 1.0);
    const auto r = solve(mp, 1, 7);
    CHECK(r.converged);
    CHECK(r.profile.admissible(1e-9));
    CHECK(r.profile.budget() <= 1.0 + 1e-9);
    CHECK(r.profile.monotone());
    CHECK(r.value > 1.0 + std::numbers::e);
    CHECK(r.value == Approx(t_side(r.profile, 1.0)).epsilon(1e-6));
    CHECK(r.value_Trad == Approx(std::numbers::pi * r.value).epsilon(1e-14));
    // at least the best member of the two-parameter family
    CHECK(r.value >= oracle::critical_family_best(nullptr, nullptr));
  }

  TEST_CASE("subcritical ratio stays below the critical value") {
    MaxProblem lo(Params(2.0, 3, Radius::finite(1.0)), 0.5);
    const auto r = solve(lo, 0, 1);
    CHECK(r.converged);
    CHECK(r.value < 1.0 + std::numbers::e);
    CHECK(r.value > 1.0);
  }

  TEST_CASE("concentration gap") {
    const auto g = concentration_gap(Params(2.0, 3, Radius::finite(1.0)), 0);
    CHECK(g.strict);
    CHECK(g.level == Approx(1.0 + std::numbers::e).epsilon(1e-12));
  }

  TEST_CASE("beta-problem reduces to the beta = 0 problem") {
    const Params P(2.0, 3, Radius::finite(1.0), 0.0, 0.5);
    const auto s = singular_variant(P, singular_exponent(P), 0);
    MaxProblem mp(P.with_beta(0.0), 1.0);
    const auto r = solve(mp, 0, 1);
    CHECK(s.value == Approx(r.value).epsilon(1e-6));
    CHECK(s.value_Trad == Approx(omega(2.0) / 1.5 * s.value).epsilon(1e-12));
  }

  TEST_CASE("problem validation") {
    MaxProblem mp(Params(2.0, 3, Radius::finite(1.0)), 1.0);
    mp.nodes = 1;
    CHECK_THROWS(mp.validate());
  }
}
