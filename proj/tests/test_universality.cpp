#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "betalab/errors.hpp"
#include "betalab/universality.hpp"
#include "doctest.h"

using namespace betalab;

namespace {
const Polynomial kQuarticStd({0, 0, 0, 0, 1.0 / 12});
}

TEST_CASE("sinc kernel point values") {
  CHECK(sinc_kernel(0.0) == doctest::Approx(1.0));
  CHECK(sinc_kernel(0.5) == doctest::Approx(2.0 / M_PI).epsilon(1e-13));
  CHECK(sinc_kernel(1.0) == doctest::Approx(0.0));
  CHECK(sinc_kernel_deriv(0.0) == doctest::Approx(0.0));
  double h = 1e-6;
  for (double t : {0.3, -1.2, 2.7})
    CHECK(sinc_kernel_deriv(t) ==
          doctest::Approx((sinc_kernel(t + h) - sinc_kernel(t - h)) / (2 * h))
              .epsilon(1e-7));
}

TEST_CASE("sine integral: Dirichlet limit and oddness") {
  CHECK(sine_integral(0.0) == doctest::Approx(0.0));
  CHECK(sine_integral(200.0) == doctest::Approx(M_PI / 2).epsilon(1e-2));
  CHECK(sine_integral(-3.0) == doctest::Approx(-sine_integral(3.0)).epsilon(1e-13));
  CHECK(sine_integral(M_PI) == doctest::Approx(1.851937051982).epsilon(1e-10));
}

TEST_CASE("limit kernel entries and their exact relations") {
  Eigen::Matrix2d k = sine_limit(1, 0.7, 0.2);
  CHECK(k(0, 0) == doctest::Approx(sinc_kernel(0.5)));
  CHECK(k(1, 1) == doctest::Approx(k(0, 0)));  // evenness
  CHECK(k(0, 1) == doctest::Approx(sinc_kernel_deriv(0.5)));
  // beta=1 vs beta=4 differ only by the eps term in the 21-entry
  Eigen::Matrix2d k4 = sine_limit(4, 0.7, 0.2);
  CHECK(k(1, 0) == doctest::Approx(k4(1, 0) - 0.5).epsilon(1e-13));
  // large separation: the beta=1 21-entry tends to zero
  CHECK(std::abs(sine_limit(1, 300.25, 0.0)(1, 0)) < 1e-2);

  // 12-entry is the xi-derivative of the 11-entry, and the xi-derivative
  // of the 21-entry returns the 11-entry (away from the jump)
  double h = 1e-6;
  auto at = [](double xi, double eta) { return sine_limit(4, xi, eta); };
  CHECK((at(0.7 + h, 0.2)(0, 0) - at(0.7 - h, 0.2)(0, 0)) / (2 * h) ==
        doctest::Approx(k(0, 1)).epsilon(1e-6));
  CHECK((at(0.7 + h, 0.2)(1, 0) - at(0.7 - h, 0.2)(1, 0)) / (2 * h) ==
        doctest::Approx(k(0, 0)).epsilon(1e-6));
}

TEST_CASE("scalar rescaled kernel converges to the sinc kernel") {
  KernelWorkspace ws(Polynomial::gaussian(), 40);
  auto grid = unit_grid(9);
  RescaledSample s = rescaled_matrix_kernel(ws, 2, 0.0, grid);
  CHECK(s.q_n == doctest::Approx(40.0 / M_PI).epsilon(1e-10));
  CHECK(s.max_deviation < 0.05);
}

TEST_CASE("diagonal entries are invariant under the conjugation") {
  // the 11/22 entries of the output must equal the unconjugated S/q_n
  KernelWorkspace ws(Polynomial::gaussian(), 16);
  auto s = rescaled_matrix_kernel(ws, 1, 0.3, {{0.4, -0.7}});
  double q = s.q_n;
  double la = 0.3 + 0.4 / q, mu = 0.3 - 0.7 / q;
  CHECK(s.values[0].s11 ==
        doctest::Approx(ws.tracy_widom_S(1, la, mu) / q).epsilon(1e-12));
  CHECK(s.values[0].s22 ==
        doctest::Approx(ws.tracy_widom_S(1, mu, la) / q).epsilon(1e-12));
}

TEST_CASE("the two eps-entry routes agree") {
  KernelWorkspace ws(kQuarticStd, 16);
  for (int beta : {1, 4}) {
    auto s = rescaled_matrix_kernel(ws, beta, 0.0, unit_grid(5));
    CHECK(s.eps_route_gap < 1e-6);
  }
}

TEST_CASE("matrix kernels converge to their distinct limits") {
  KernelWorkspace ws(Polynomial::gaussian(), 32);
  auto grid = unit_grid(7);
  RescaledSample s1 = rescaled_matrix_kernel(ws, 1, 0.0, grid);
  RescaledSample s4 = rescaled_matrix_kernel(ws, 4, 0.0, grid);
  CHECK(s1.max_deviation < 0.25);
  CHECK(s4.max_deviation < 0.25);
  // the limits themselves differ in the 21-entry
  bool differ = false;
  for (size_t i = 0; i < grid.size(); ++i)
    if (std::abs(s1.limit[i].s21 - s4.limit[i].s21) > 0.2) differ = true;
  CHECK(differ);
}

TEST_CASE("near-edge points are rejected") {
  KernelWorkspace ws(Polynomial::gaussian(), 16);
  CHECK_THROWS_AS(rescaled_matrix_kernel(ws, 1, 1.9999, {{0.0, 0.1}}), domain_error);
  CHECK_THROWS_AS(rescaled_matrix_kernel(ws, 3, 0.0, {{0.0, 0.1}}), domain_error);
}

TEST_CASE("deviation decreases with n and the rate is near -1/2") {
  DeviationTable t2 = bulk_deviation(Polynomial::gaussian(), 2, 0.0, {20, 40, 80}, 7);
  CHECK(t2.rows[2].deviation < t2.rows[0].deviation);
  CHECK(t2.monotone_ok);

  DeviationTable t1 = bulk_deviation(Polynomial::gaussian(), 1, 0.0, {16, 32, 64}, 5);
  CHECK(t1.fitted_exponent <= -0.4);
  CHECK(t1.rows[2].deviation < t1.rows[0].deviation);

  DeviationTable q4 = bulk_deviation(kQuarticStd, 4, 0.0, {16, 32, 64}, 5);
  CHECK(q4.rows[2].deviation < q4.rows[0].deviation);

  CHECK_THROWS_AS(bulk_deviation(Polynomial::gaussian(), 1, 0.0, {16, 32}, 5),
                  domain_error);
}
