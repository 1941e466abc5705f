#include <cmath>
#include <numbers>

#include "doctest.h"
#include "oracles.hpp"
#include "tmlab/constants.hpp"
#include "tmlab/profile.hpp"
#include "tmlab/special.hpp"

using namespace tmlab;
using doctest::Approx;

TEST_SUITE("core") {
  TEST_CASE("radius parsing and the infinite state") {
    CHECK(Radius::parse("inf").is_infinite());
    CHECK(Radius::parse("infinity").is_infinite());
    CHECK(Radius::parse("2.5").value() == 2.5);
    CHECK(Radius::infinite().neg_power(1.5) == 0.0);
    CHECK(Radius::finite(4.0).neg_power(0.5) == 0.5);
    CHECK_THROWS_AS(Radius::parse("-1"), DomainError);
    CHECK_THROWS_AS(Radius::finite(0.0), DomainError);
    CHECK(Radius::parse(Radius::infinite().to_string()).is_infinite());
  }

  TEST_CASE("parameter validation") {
    CHECK_THROWS_AS(Params(3.0, 3, Radius::finite(1.0)), DomainError);
    CHECK_THROWS_AS(Params(1.0, 3, Radius::finite(1.0)), DomainError);
    CHECK_THROWS_AS(Params(2.0, 3, Radius::finite(1.0), 0.0, 2.0), DomainError);
    CHECK_THROWS_AS(Params(2.0, 3, Radius::finite(1.0), -1.0), DomainError);
    const Params P(2.0, 3, Radius::infinite());
    CHECK(P.R_term() == 0.0);
    CHECK(P.pprime() == 2.0);
    CHECK(P.pstar() == 6.0);
  }

  TEST_CASE("gamma function") {
    CHECK(gamma_fn(5.0) == Approx(24.0).epsilon(1e-14));
    CHECK(gamma_fn(0.5) == Approx(std::sqrt(std::numbers::pi)).epsilon(1e-14));
    for (double x : {0.3, 1.7, 4.2, 11.5, 30.0}) CHECK(gamma_fn(x) == Approx(std::tgamma(x)).epsilon(1e-13));
    CHECK(log_gamma(200.0) == Approx(std::lgamma(200.0)).epsilon(1e-13));
    CHECK_THROWS_AS(gamma_fn(0.0), DomainError);
  }

  TEST_CASE("sphere areas and sharp exponents") {
    CHECK(omega(1.0) == Approx(2.0).epsilon(1e-15));
    CHECK(omega(2.0) == Approx(2 * std::numbers::pi).epsilon(1e-15));
    CHECK(omega(3.0) == Approx(4 * std::numbers::pi).epsilon(1e-15));
    CHECK(omega(4.0) == Approx(2 * std::numbers::pi * std::numbers::pi).epsilon(1e-15));
    CHECK(optimal_exponent(2.0) == Approx(4 * std::numbers::pi).epsilon(1e-15));
    CHECK(optimal_exponent(3.0) == Approx(3 * std::sqrt(4 * std::numbers::pi)).epsilon(1e-15));
    const Params P(2.5, 4, Radius::finite(1.0));
    CHECK(singular_exponent(P) == optimal_exponent(P));
    CHECK(singular_exponent(P.with_beta(1.0)) == Approx(optimal_exponent(2.5) * 0.6).epsilon(1e-15));
  }

  TEST_CASE("concentration level against the harmonic-number form") {
    for (int p : {2, 3, 4}) {
      const auto L = concentration_level(p);
      CHECK(L.converged);
      CHECK(L.value == Approx(oracle::harmonic_level(p)).epsilon(1e-10));
    }
    CHECK(concentration_level(2.0).value == Approx(1.0 + std::numbers::e).epsilon(1e-12));
  }

  TEST_CASE("L_p samples and extrapolation") {
    CHECK(lp_sample(2.0, 500.0) == Approx(oracle::lp_brute_force(2.0, 500.0)).epsilon(1e-10));
    CHECK(lp_sample(1.5, 300.0) == Approx(oracle::lp_brute_force(1.5, 300.0)).epsilon(1e-10));
    const auto b = lp_bounds(2.0);
    CHECK(b.first == 2.0);
    CHECK(b.second == Approx(4.0));
    const auto e = lp_constant(2.0);
    CHECK(e.within_bounds);
    CHECK(e.estimate == Approx(2.0).epsilon(1e-6));
  }

  TEST_CASE("non-compactness level") {
    const Params P(2.0, 3, Radius::finite(1.0));
    CHECK(noncompactness_level(P, 1.0) == Approx(optimal_exponent(2.0) / 2.0).epsilon(1e-15));
    CHECK(noncompactness_level(P, optimal_exponent(2.0)) == Approx(0.5).epsilon(1e-15));
    CHECK_FALSE(constants_table(P).c_bar.has_value());
  }

  TEST_CASE("Moser map") {
    const MoserMap m(Space(2.0, 3, Radius::finite(1.0)));
    // at p = 2, N = 3, R = 1 the map is t = 1/r - 1
    for (double r : {0.01, 0.3, 0.9, 1.0}) CHECK(m.t(r) == Approx(1.0 / r - 1.0).epsilon(1e-13));
    CHECK(m.dt_dr(0.5) == Approx(4.0).epsilon(1e-13));
    const MoserMap inf(Space(1.7, 3, Radius::infinite()));
    for (double t : {1e-3, 0.5, 7.0, 60.0}) CHECK(inf.t(inf.r(t)) == Approx(t).epsilon(1e-12));
    const MoserMap crit(Space(2.0, 2, Radius::finite(1.0)));
    CHECK(crit.t(std::exp(-0.25)) == Approx(0.5).epsilon(1e-14));
  }

  TEST_CASE("profiles") {
    const auto w = Profile1D::ramp(4.0, 2.0, 2.0);
    CHECK(w.budget() == Approx(1.0));
    CHECK(w.value(10.0) == 2.0);
    CHECK(w.slope(1.0) == Approx(0.5));
    CHECK(w.admissible());
    const Space S(2.0, 3, Radius::finite(1.0));
    Eigen::VectorXd r(2), u(2);
    r << 0.25, 0.5;
    u << 2.0, 1.0;
    const RadialProfile prof(S, r, u);
    CHECK(prof.value(0.1) == 2.0);
    CHECK(prof.value(1.0) == 0.0);
    // omega_3 int |u'|^2 r^2 dr over (0.25, 0.5) and (0.5, 1)
    const double e = 4 * std::numbers::pi * (16.0 * (0.125 - 0.015625) / 3.0 + 4.0 * (1.0 - 0.125) / 3.0);
    CHECK(prof.dirichlet_energy() == Approx(e).epsilon(1e-12));
  }
}
