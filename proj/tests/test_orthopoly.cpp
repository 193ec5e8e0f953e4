#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "betalab/correction.hpp"
#include "betalab/errors.hpp"
#include "betalab/orthopoly.hpp"
#include "doctest.h"

using namespace betalab;

namespace {
const Polynomial kQuarticStd({0, 0, 0, 0, 1.0 / 12});
}

TEST_CASE("quadratic weight reproduces the scaled Hermite recurrence") {
  int n = 16;
  RecurrenceTable rec = recurrence(Polynomial::gaussian(), n, n + 4);
  for (int k = 1; k < rec.levels; ++k)
    CHECK(rec.a[k] == doctest::Approx(std::sqrt(double(k) / n)).epsilon(1e-10));
  for (int k = 0; k < rec.levels; ++k)
    CHECK(std::abs(rec.b[k]) < 1e-10);
}

TEST_CASE("even potential gives vanishing diagonal coefficients") {
  RecurrenceTable rec = recurrence(kQuarticStd, 12, 18);
  for (int k = 0; k < rec.levels; ++k)
    CHECK(std::abs(rec.b[k]) < 1e-10);
}

TEST_CASE("recurrence coefficients stay bounded near k = n") {
  for (int n : {20, 40}) {
    RecurrenceTable rec = recurrence(kQuarticStd, n, n + 4);
    for (int k = n - 3; k < rec.levels; ++k) {
      CHECK(std::abs(rec.a[k]) < 3.0);
      CHECK(std::abs(rec.b[k]) < 3.0);
    }
  }
}

TEST_CASE("wavefunctions form an orthonormal system") {
  KernelWorkspace ws(kQuarticStd, 10);
  const auto& grid = ws.grid();
  const auto& psi = ws.psi_grid();
  int L = ws.n() + 2 * ws.m() - 1;
  Eigen::MatrixXd gram = psi.leftCols(L).transpose() *
                         (grid.weights().asDiagonal() * psi.leftCols(L));
  gram.diagonal().array() -= 1.0;
  CHECK(gram.cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("off-grid evaluation agrees with the stored grid values") {
  KernelWorkspace ws(kQuarticStd, 8);
  const auto& grid = ws.grid();
  for (int j : {0, 3, 7, 9}) {
    for (int i : {10, grid.size() / 2, grid.size() - 20}) {
      double x = grid.nodes()[i];
      CHECK(ws.psi(j, x) == doctest::Approx(ws.psi_grid()(i, j)).epsilon(1e-8));
    }
  }
}

TEST_CASE("differentiation matrix: Gaussian closed form and band structure") {
  int n = 12;
  KernelWorkspace ws(Polynomial::gaussian(), n);
  const auto& D = ws.D();
  for (int j = 0; j + 1 < D.rows(); ++j)
    CHECK(D(j, j + 1) ==
          doctest::Approx(-0.5 * n * std::sqrt((j + 1.0) / n)).epsilon(1e-9));
  CHECK((D + D.transpose()).cwiseAbs().maxCoeff() < 1e-10);
  for (int j = 0; j < D.rows(); ++j)
    for (int k = 0; k < D.cols(); ++k)
      if (std::abs(j - k) >= 2 * ws.m()) CHECK(D(j, k) == 0.0);
}

TEST_CASE("differentiation matrix acts as d/dx on the wavefunctions") {
  KernelWorkspace ws(kQuarticStd, 10);
  double h = 1e-6;
  for (int j : {2, 5, 9}) {
    for (double x : {-1.3, 0.2, 1.1}) {
      double fd = (ws.psi(j, x + h) - ws.psi(j, x - h)) / (2 * h);
      CHECK(ws.psi_deriv(j, x) == doctest::Approx(fd).epsilon(1e-5));
    }
  }
}

TEST_CASE("integration matrix: skew-symmetry and D M = 1 on interior rows") {
  KernelWorkspace ws(kQuarticStd, 12);
  const auto& M = ws.M();
  CHECK((M + M.transpose()).cwiseAbs().maxCoeff() < 1e-10);
  Eigen::MatrixXd prod = ws.D() * M;
  // rows whose band lies fully inside the stored range
  for (int j = 0; j < ws.n(); ++j)
    for (int l = 0; l < M.cols(); ++l)
      CHECK(std::abs(prod(j, l) - (j == l ? 1.0 : 0.0)) < 1e-7);
}

TEST_CASE("corner integration entries scale like 1/n") {
  double scaled[3];
  int idx = 0;
  for (int n : {20, 40, 80}) {
    KernelWorkspace ws(kQuarticStd, n);
    const auto& M = ws.M();
    int lo = n - 2 * ws.m() + 1, hi = n + 2 * ws.m() - 1;
    double mx = 0;
    for (int j = lo; j < hi; ++j)
      for (int k = lo; k < hi; ++k) mx = std::max(mx, std::abs(M(j, k)));
    scaled[idx++] = n * mx;
  }
  for (int i = 1; i < 3; ++i) {
    CHECK(scaled[i] < 2.0 * scaled[i - 1]);
    CHECK(scaled[i] > 0.5 * scaled[i - 1]);
  }
}

TEST_CASE("eps of the derivative returns the wavefunction") {
  KernelWorkspace ws(kQuarticStd, 10);
  // eps(psi_j') evaluated through the band expansion and the stored
  // antiderivatives
  for (int j : {1, 4, 8}) {
    for (double x : {-1.1, 0.4, 1.6}) {
      double s = 0;
      for (int k = std::max(0, j - 2 * ws.m() + 1);
           k < std::min(ws.n() + 2 * ws.m() - 1, j + 2 * ws.m()); ++k)
        s += ws.D()(j, k) * ws.eps_psi(k, x);
      CHECK(s == doctest::Approx(ws.psi(j, x)).epsilon(1e-6));
    }
  }
}

TEST_CASE("scaled sup of eps psi_n is stable in n") {
  double scaled[3];
  int idx = 0;
  for (int n : {20, 40, 80}) {
    KernelWorkspace ws(kQuarticStd, n);
    double mx = 0;
    for (double x = -1.5; x <= 1.5; x += 0.05)
      mx = std::max(mx, std::abs(ws.eps_psi(n, x)));
    scaled[idx++] = std::sqrt(double(n)) * mx;
  }
  for (int i = 1; i < 3; ++i) {
    CHECK(scaled[i] < 2.0 * scaled[i - 1]);
    CHECK(scaled[i] > 0.5 * scaled[i - 1]);
  }
}

TEST_CASE("reproducing property of K_n") {
  KernelWorkspace ws(kQuarticStd, 8);
  const auto& grid = ws.grid();
  for (double la : {-0.7, 0.5}) {
    for (double mu : {-0.2, 1.0}) {
      double s = 0;
      for (int i = 0; i < grid.size(); ++i)
        s += grid.weights()[i] * ws.kernel(la, grid.nodes()[i]) *
             ws.kernel(grid.nodes()[i], mu);
      CHECK(s == doctest::Approx(ws.kernel(la, mu)).epsilon(1e-8));
    }
  }
}

TEST_CASE("corrected kernel forms equal the direct matrix-inverse forms") {
  for (int n : {4, 6}) {
    KernelWorkspace ws(Polynomial::gaussian(), n);
    for (int beta : {1, 4}) {
      for (double la : {-0.8, 0.3}) {
        for (double mu : {-0.1, 0.9}) {
          double a = ws.tracy_widom_S(beta, la, mu);
          double b = ws.tracy_widom_S_direct(beta, la, mu);
          CHECK(a == doctest::Approx(b).epsilon(1e-8));
        }
      }
    }
  }
  // the same holds for a non-Gaussian weight
  KernelWorkspace wq(kQuarticStd, 6);
  CHECK(wq.tracy_widom_S(1, 0.4, -0.2) ==
        doctest::Approx(wq.tracy_widom_S_direct(1, 0.4, -0.2)).epsilon(1e-8));
  CHECK(wq.tracy_widom_S(4, 0.4, -0.2) ==
        doctest::Approx(wq.tracy_widom_S_direct(4, 0.4, -0.2)).epsilon(1e-8));
}

TEST_CASE("kernel corrections decay at a fixed bulk point") {
  double diffs[3];
  int idx = 0;
  for (int n : {16, 32, 64}) {
    KernelWorkspace ws(kQuarticStd, n);
    double s = ws.tracy_widom_S(1, 0.3, 0.3 + 1.0 / n);
    double k = ws.kernel(0.3, 0.3 + 1.0 / n);
    diffs[idx++] = std::abs(s - k) / std::abs(k);
  }
  CHECK(diffs[2] < diffs[0]);
}

TEST_CASE("odd levels require even n for the matrix kernels") {
  KernelWorkspace ws(kQuarticStd, 7);
  CHECK_THROWS_AS(ws.tracy_widom_S(1, 0.0, 0.1), domain_error);
  CHECK_THROWS_AS(ws.tracy_widom_S(2, 0.0, 0.1), domain_error);
}

TEST_CASE("the two T_n constructions agree; Gaussian T_n is scalar") {
  KernelWorkspace wg(Polynomial::gaussian(), 10);
  Eigen::MatrixXd T = wg.t_matrix();
  CHECK(T.rows() == 1);
  CHECK(T.cols() == 1);

  KernelWorkspace wq(kQuarticStd, 12);
  Eigen::MatrixXd Tq = wq.t_matrix();  // throws on disagreement
  CHECK(Tq.rows() == 2 * wq.m() - 1);
  double det_corner = Tq.fullPivLu().determinant();
  const int p = 2 * wq.m() - 1;
  Eigen::MatrixXd alt = Eigen::MatrixXd::Identity(p, p) -
                        wq.block_D(2, 1) * wq.block_M(1, 2);
  CHECK(det_corner == doctest::Approx(alt.fullPivLu().determinant()).epsilon(1e-8));
}

TEST_CASE("log det T_n stays bounded with a flat trend") {
  double prev = 0;
  double lo = 1e300, hi = -1e300;
  for (int n : {8, 16, 24, 32, 40}) {
    KernelWorkspace ws(kQuarticStd, n);
    double ld = ws.t_logdet();
    CHECK(std::abs(ld) < 5.0);
    lo = std::min(lo, ld);
    hi = std::max(hi, ld);
    prev = ld;
  }
  CHECK(hi - lo < 1.0);
}

TEST_CASE("determinant identity at small n") {
  StojanovicReport g2 = stojanovic_identity(Polynomial::gaussian(), 2);
  CHECK(g2.relative_error < 1e-6);
  CHECK(g2.q2_gamma_relerr < 1e-8);
  CHECK(g2.detM_relerr < 1e-6);
  // closed forms: Q_{2,1} = 4 sqrt(pi), Q_{2,2} = pi
  CHECK(g2.log_q_n1 == doctest::Approx(std::log(4 * std::sqrt(M_PI))).epsilon(1e-9));
  CHECK(g2.log_q_n2 == doctest::Approx(std::log(M_PI)).epsilon(1e-9));

  StojanovicReport g4 = stojanovic_identity(Polynomial::gaussian(), 4);
  CHECK(g4.relative_error < 1e-4);
  CHECK(g4.q2_gamma_relerr < 1e-8);

  StojanovicReport q4 = stojanovic_identity(kQuarticStd, 4);
  CHECK(q4.relative_error < 1e-4);

  CHECK_THROWS_AS(stojanovic_identity(Polynomial::gaussian(), 3), domain_error);
  // the corner blocks need n >= 2m
  CHECK_THROWS_AS(stojanovic_identity(kQuarticStd, 2), domain_error);
}
