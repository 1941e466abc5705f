#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "tmlab/constants.hpp"
#include "tmlab/transforms.hpp"

using namespace tmlab;
using doctest::Approx;

TEST_SUITE("transforms") {
  TEST_CASE("pushforward preserves the Dirichlet energy") {
    std::mt19937_64 rng(3);
    for (const char* R : {"1", "inf"}) {
      const Space S(2.0, 3, Radius::parse(R));
      for (int i = 0; i < 10; ++i) {
        const auto u = oracle::random_profile(S, rng);
        const auto pf = moser_pushforward(u);
        CHECK(pf.energy_r == Approx(1.0).epsilon(1e-12));
        CHECK(pf.budget_t == Approx(pf.energy_r).epsilon(1e-8));
      }
    }
  }

  TEST_CASE("pullback inverts the pushforward of a ramp") {
    const Space S(2.0, 3, Radius::finite(1.0));
    const auto w = Profile1D::ramp(3.0, std::sqrt(3.0), 2.0);
    const auto u = moser_pullback(S, w);
    const MoserMap m(S);
    CHECK(u->value(m.r(1.5)) * m.amplitude() == Approx(w.value(1.5)).epsilon(1e-13));
    CHECK(u->dirichlet_energy() == Approx(1.0).epsilon(1e-10));
  }

  TEST_CASE("Moser integral of a ramp against Gauss-Legendre") {
    const double T = 5.0, h = 1.8, a = 0.7;
    const auto w = Profile1D::ramp(T, h, 2.0);
    auto f = [&](double t) { return std::exp(a * std::pow(h * t / T, 2.0) - t); };
    const double ref = oracle::gauss_composite(f, 0.0, T, 400) + std::exp(a * h * h - T);
    CHECK(moser_integral(w, a).value == Approx(ref).epsilon(1e-11));
  }

  TEST_CASE("functional of the zero profile is the weight mass") {
    const Params P(2.0, 3, Radius::finite(1.0));
    const Space S = P.space();
    Eigen::VectorXd r(1), u(1);
    r << 0.5;
    u << 0.0;
    const RadialProfile z(S, r, u);
    CHECK(tm_functional(z, 5.0, WeightSpec::vp(P)).value == Approx(std::numbers::pi).epsilon(1e-9));
  }

  TEST_CASE("r-side functional equals the t-side integral") {
    const Params P(2.0, 3, Radius::finite(1.0));
    const auto w = Profile1D::ramp(4.0, 1.5, 2.0);
    const auto u = moser_pullback(P.space(), w);
    const double alpha = optimal_exponent(P);
    const double lhs = tm_functional(*u, alpha, WeightSpec::vp(P)).value;
    const double rhs = omega(2.0) / 2.0 * moser_integral(w, 1.0).value;
    CHECK(lhs == Approx(rhs).epsilon(1e-9));
  }

  TEST_CASE("weighted Lq bound") {
    std::mt19937_64 rng(11);
    const Params P(2.0, 3, Radius::finite(1.0));
    for (int i = 0; i < 10; ++i) {
      const auto u = oracle::random_profile(P.space(), rng);
      for (double q : {2.0, 3.0, 5.0}) CHECK(weighted_lq_norm(u, q, WeightSpec::vp(P)).holds);
    }
  }

  TEST_CASE("harmonic transplantation identities") {
    std::mt19937_64 rng(5);
    const Space crit(2.0, 2, Radius::finite(1.0)), sub(2.0, 4, Radius::finite(1.5));
    for (int i = 0; i < 5; ++i) {
      auto v = std::make_shared<RadialProfile>(oracle::random_profile(crit, rng));
      const auto u = harmonic_transplant(v, HarmonicDirection::from_critical, sub);
      const auto id = harmonic_identities(*u, *v, optimal_exponent(2.0));
      CHECK(id.norm_rel_error < 1e-8);
      CHECK(id.functional_rel_error < 1e-8);
    }
  }

  TEST_CASE("beta transplantation carries the factor p/(p - beta)") {
    std::mt19937_64 rng(9);
    const Params P(2.0, 3, Radius::finite(1.0), 0.0, 0.5);
    auto v = std::make_shared<RadialProfile>(oracle::random_profile(P.space(), rng));
    const auto u = beta_transplant(v, 0.5);
    const auto id = beta_identities(*u, *v, 0.5, singular_exponent(P));
    CHECK(id.norm_rel_error < 1e-10);
    CHECK(id.functional_rel_error < 1e-10);
    CHECK(id.functional_rhs / id.functional_rhs_unscaled == Approx(2.0 / 1.5).epsilon(1e-12));
  }

  TEST_CASE("p-Laplacian equivalence is fourth order in h") {
    auto v = [](double s) { return 1.0 - s * s * s; };
    const double d1 = plap_equivalence_check(v, 2, 3, 1.0, 1e-2).max_abs_discrepancy;
    const double d2 = plap_equivalence_check(v, 2, 3, 1.0, 5e-3).max_abs_discrepancy;
    CHECK(std::log2(d1 / d2) > 3.5);
  }

  TEST_CASE("radial lemma") {
    std::mt19937_64 rng(13);
    const Space S(2.5, 4, Radius::infinite());
    for (int i = 0; i < 5; ++i) {
      const auto rep = radial_lemma_check(oracle::random_profile(S, rng));
      CHECK(rep.max_ratio_local <= 1.0 + 1e-9);
      CHECK(rep.max_ratio_global <= rep.max_ratio_local + 1e-12);
    }
  }
}
