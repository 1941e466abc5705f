#include <cmath>

#include "doctest.h"
#include "tmlab/nonlinearity.hpp"

using namespace tmlab;
using doctest::Approx;

TEST_SUITE("nonlinearity") {
  TEST_CASE("f1 antiderivative in closed form") {
    const Nonlinearity nl(NlKind::f1, {}, 2.0);  // k = 1, beta = 3: f = t^3
    for (double t : {0.1, 1.0, 2.0, 5.0}) {
      CHECK(nl.f(t) == Approx(t * t * t).epsilon(1e-14));
      CHECK(nl.F(t) == Approx(std::pow(t, 4.0) / 4.0).epsilon(1e-12));
      CHECK(nl.F(-t) == Approx(nl.F(t)).epsilon(1e-14));
    }
    CHECK(classify_growth(nl) == Growth::subcritical);
  }

  TEST_CASE("f4 and f3 antiderivatives at beta = 1, p = 2") {
    NlCoeffs c;
    c.k = 2.0;
    c.beta = 1.0;
    c.alpha = 0.5;
    const Nonlinearity f4(NlKind::f4, c, 2.0), f3(NlKind::f3, c, 2.0);
    for (double t : {0.3, 1.0, 3.0, 6.0}) {
      const double e = (std::exp(0.5 * t * t) - 1.0) / 0.5;  // k (e^{alpha t^2} - 1)/(2 alpha)
      CHECK(f4.F(t) == Approx(e).epsilon(1e-10));
      CHECK(f3.F(t) == Approx(e - t * t).epsilon(1e-9));
    }
    CHECK(f4.declared_growth() == Growth::critical);
    CHECK(classify_growth(f4) == Growth::critical);
    CHECK(f4.alpha0() == 0.5);
  }

  TEST_CASE("f5 vanishes below the threshold") {
    NlCoeffs c;
    c.threshold = 0.5;
    const Nonlinearity f5(NlKind::f5, c, 2.0);
    CHECK(f5.f(0.4) == 0.0);
    CHECK(f5.F(0.4) == 0.0);
    CHECK(f5.F(-3.0) == 0.0);
    CHECK(f5.f(2.0) > 0.0);
    CHECK(f5_threshold_scan({}, 2.0) > 0.0);
  }

  TEST_CASE("assumption flags") {
    const auto a1 = Nonlinearity(NlKind::f1, {}, 2.0).assumptions();
    CHECK(a1.a1);
    CHECK(a1.a3);
    CHECK(a1.a5);
    CHECK_FALSE(a1.a6);
    NlCoeffs c;
    c.beta = 2.0;
    const auto a4 = Nonlinearity(NlKind::f4, c, 2.0).assumptions();
    CHECK(a4.a3);
    CHECK(a4.a4);
    CHECK(a4.a9);
  }

  TEST_CASE("zero") {
    const auto z = Nonlinearity::zero(2.0);
    CHECK(z.f(3.0) == 0.0);
    CHECK(z.F(3.0) == 0.0);
    CHECK(to_string(Growth::subcritical) == "subcritical");
  }
}
