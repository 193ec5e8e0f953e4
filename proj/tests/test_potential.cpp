#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <random>

#include "betalab/errors.hpp"
#include "betalab/potential.hpp"
#include "doctest.h"

using namespace betalab;
using Complex = std::complex<double>;

TEST_CASE("eval_potential basic values") {
  Polynomial g = Polynomial::gaussian();
  CHECK(g.eval(2.0) == doctest::Approx(2.0));
  CHECK(g.eval(Complex(0, 1)).real() == doctest::Approx(-0.5));
  CHECK(g.eval(Complex(0, 1)).imag() == doctest::Approx(0.0));
  Polynomial quartic({0, 0, 0, 0, 0.25});
  CHECK(quartic.eval(1.0, 1) == doctest::Approx(1.0));  // V' = lambda^3
  CHECK(quartic.eval(2.0, 2) == doctest::Approx(12.0));
}

TEST_CASE("interpolate endpoints and midpoint") {
  PotentialFamily fam{Polynomial({0, 0, 0, 0, 0.25})};
  CHECK(interpolate(fam, 0.0).coeffs() == Polynomial::gaussian().coeffs());
  CHECK(interpolate(fam, 1.0).coeffs() == fam.target.coeffs());
  CHECK(interpolate(fam, 0.5).eval(1.0) == doctest::Approx(0.375));
  CHECK_THROWS_AS(interpolate(fam, 1.5), domain_error);
}

TEST_CASE("interpolation is linear in t pointwise") {
  PotentialFamily fam{Polynomial({0.3, -0.1, 0.2, 0, 0.25})};
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> ux(-3, 3), ut(0, 1);
  for (int k = 0; k < 50; ++k) {
    double t = ut(rng), x = ux(rng);
    double expect = t * fam.target.eval(x) + (1 - t) * fam.reference.eval(x);
    CHECK(interpolate(fam, t).eval(x) == doctest::Approx(expect).epsilon(1e-14));
  }
}

TEST_CASE("rescale_to_standard examples") {
  // [-2,2]: identity
  auto r1 = rescale_to_standard(Polynomial::gaussian(), -2, 2);
  CHECK(r1.map.shift == doctest::Approx(0.0));
  CHECK(r1.map.scale == doctest::Approx(1.0));
  CHECK(r1.rescaled.coeffs() == Polynomial::gaussian().coeffs());

  // [0,4], V = (l-2)^2/2 -> l'^2/2, shift 2, scale 1
  Polynomial shifted({2.0, -2.0, 0.5});
  auto r2 = rescale_to_standard(shifted, 0, 4);
  CHECK(r2.map.shift == doctest::Approx(2.0));
  CHECK(r2.map.scale == doctest::Approx(1.0));
  CHECK(r2.rescaled.eval(1.3) == doctest::Approx(1.3 * 1.3 / 2).epsilon(1e-14));

  // [-4,4] -> scale 1/2
  auto r3 = rescale_to_standard(Polynomial::gaussian(), -4, 4);
  CHECK(r3.map.scale == doctest::Approx(0.5));

  CHECK_THROWS_AS(rescale_to_standard(Polynomial::gaussian(), 1, 1), domain_error);
}

TEST_CASE("rescale round trip reproduces the original") {
  Polynomial p({0.1, -0.2, 0.5, 0.0, 0.125});
  auto r = rescale_to_standard(p, -1.3, 2.7);
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> ux(-2, 2);
  for (int k = 0; k < 100; ++k) {
    double xp = ux(rng);                 // point in the standard variable
    double x = r.map.inverse(xp);        // original variable
    double a = r.rescaled.eval(xp), b = p.eval(x);
    CHECK(a == doctest::Approx(b).epsilon(1e-12));
  }
}

TEST_CASE("check_growth") {
  CHECK(check_growth(Polynomial::gaussian()).pass);
  CHECK(check_growth(Polynomial({0, 0, 0, 0, 0.25})).pass);
  CHECK_FALSE(check_growth(Polynomial({0, 0, -1.0})).pass);
  CHECK_FALSE(check_growth(Polynomial({0, 1.0})).pass);
}
