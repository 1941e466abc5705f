#include <cmath>
#include <numbers>

#include "doctest.h"
#include "oracles.hpp"
#include "tmlab/constants.hpp"
#include "tmlab/elliptic.hpp"
#include "tmlab/extremals.hpp"

using namespace tmlab;
using doctest::Approx;

TEST_SUITE("elliptic") {
  TEST_CASE("Rayleigh quotient at p = 2 approaches j_{0,1}^2 from above") {
    // -Delta u = lambda V_2 u on B_1 in R^3 becomes -w'' = (lambda/4) e^{-t} w,
    // whose first eigenvalue is j_{0,1}^2.
    const auto spec = WeightSpec::vp(Params(2.0, 3, Radius::finite(1.0)));
    const auto r = rayleigh_min(spec);
    const double j = oracle::bessel_j0_zero();
    CHECK(r.converged);
    CHECK(r.lambda >= j * j - 1e-9);
    CHECK(r.lambda == Approx(j * j).epsilon(1e-3));
    CHECK(r.floor == 4.0);
    CHECK(r.above_floor);
  }

  TEST_CASE("energy of the zero field vanishes") {
    const auto spec = WeightSpec::vp(Params(2.0, 3, Radius::finite(1.0)));
    const auto nl = Nonlinearity(NlKind::f1, {}, 2.0);
    const auto u = build_moser(spec.params, 1).profile;
    CHECK(energy(*u, nl, spec, 0.0).value == 0.0);
    const auto e = energy(*u, nl, spec, 2.0);
    CHECK(e.dirichlet_term == Approx(4.0).epsilon(1e-10));
  }

  TEST_CASE("shooting f1 against a collocation solve") {
    const auto spec = WeightSpec::vp(Params(2.0, 3, Radius::finite(1.0)));
    const Nonlinearity nl(NlKind::f1, {}, 2.0);
    ShootOptions opt;
    opt.tol = 1e-8;
    const auto s = shoot(nl, spec, {2.0, 5.0}, opt);
    CHECK(s.converged);
    CHECK(s.initial_height == Approx(oracle::collocation_f1_height()).epsilon(1e-6));
    CHECK(std::abs(s.profile->value(1.0)) < 1e-7);
    CHECK_THROWS(shoot(nl, spec, {2.0, 2.5}, opt));
  }

  TEST_CASE("f = 0 gives the trivial solution") {
    const auto spec = WeightSpec::vp(Params(2.0, 3, Radius::finite(1.0)));
    const auto s = shoot(Nonlinearity::zero(2.0), spec, {-1.0, 1.0});
    CHECK(s.converged);
    CHECK(std::abs(s.initial_height) < 1e-12);
  }

  TEST_CASE("mountain-pass geometry and level bound") {
    const Params P(2.0, 3, Radius::finite(1.0));
    const Nonlinearity f1(NlKind::f1, {}, 2.0);
    const auto g = mp_geometry(f1, WeightSpec::vp(P), *build_moser(P, 1).profile);
    CHECK(g.certified());
    NlCoeffs c;
    c.k = 1.0;
    c.beta = 1.0;
    c.alpha = 1.0;
    const Nonlinearity f4(NlKind::f4, c, 2.0);
    const auto L = mp_level_bound(f4, P);
    CHECK(L.certified);
    CHECK(L.c_bar == Approx(2 * std::numbers::pi).epsilon(1e-14));
    CHECK(L.bound < L.c_bar);
    CHECK_THROWS(mp_level_bound(f1, P));
  }

  TEST_CASE("Euler-Lagrange residual of the maximizer") {
    const Params P(2.0, 3, Radius::finite(1.0));
    MaxProblem mp(P, 0.5);
    const auto r = solve(mp, 0, 1);
    const auto el = el_check(P, r);
    CHECK(el.norm == Approx(1.0).epsilon(1e-6));
    CHECK(el.max_residual < 1e-3);
  }
}
