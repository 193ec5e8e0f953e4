#include "betalab/equilibrium.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "betalab/errors.hpp"
#include "betalab/quad.hpp"

namespace betalab {

double dist_to_support(Complex z) {
  double x = z.real(), y = z.imag();
  if (x > 2.0) return std::abs(z - Complex(2.0, 0.0));
  if (x < -2.0) return std::abs(z + Complex(2.0, 0.0));
  return std::abs(y);
}

Complex sqrtX(Complex z) {
  return std::sqrt(z - 2.0) * std::sqrt(z + 2.0);
}

namespace {

double binom(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r *= double(n - k + i) / i;
  return r;
}

// (1/pi) int lambda^i / sqrt(4-lambda^2) on [-2,2]  (arcsine moments)
double arcsine_moment(int i) { return (i % 2) ? 0.0 : binom(i, i / 2); }

// (1/2pi) int lambda^{2j} sqrt(4-lambda^2) on [-2,2]  (semicircle moments)
double catalan(int j) { return binom(2 * j, j) / (j + 1); }

std::vector<Complex> poly_roots(const Polynomial& p) {
  int n = p.degree();
  std::vector<Complex> roots;
  if (n < 1) return roots;
  Eigen::MatrixXd C = Eigen::MatrixXd::Zero(n, n);
  const auto& c = p.coeffs();
  for (int i = 0; i < n; ++i) C(i, n - 1) = -c[i] / c[n];
  for (int i = 1; i < n; ++i) C(i, i - 1) = 1.0;
  Eigen::EigenSolver<Eigen::MatrixXd> es(C, false);
  for (int i = 0; i < n; ++i) roots.push_back(es.eigenvalues()[i]);
  return roots;
}

// (1/pi) int_0^pi f(c + r cos t) dt via the Chebyshev (midpoint) rule.
double angular_average(const Polynomial& f, double c, double r, int N = 256) {
  double s = 0;
  for (int k = 0; k < N; ++k)
    s += f.eval(c + r * std::cos(M_PI * (2 * k + 1) / (2.0 * N)));
  return s / N;
}

}  // namespace

std::pair<double, double> solve_support(const Polynomial& p) {
  GrowthCheck gc = check_growth(p);
  if (!gc.pass) throw domain_error("potential fails growth condition: " + gc.witness);
  Polynomial Vp = p.derivative();

  // Initial guess from the classical turning points (real roots of V').
  double lo = 0, hi = 0;
  bool have_root = false;
  for (const Complex& z : poly_roots(Vp)) {
    if (std::abs(z.imag()) < 1e-9) {
      double x = z.real();
      if (!have_root) { lo = hi = x; have_root = true; }
      lo = std::min(lo, x);
      hi = std::max(hi, x);
    }
  }
  double c = have_root ? (lo + hi) / 2 : 0.0;
  double r = std::max(1.0, (hi - lo) / 2 + 1.0);

  // Endpoint equations in (c, r):
  //   F1 = (1/pi) int_0^pi V'(c + r cos t) dt            = 0
  //   F2 = (1/pi) int_0^pi (c + r cos t) V'(c + r cos t) dt = 2
  std::vector<double> lam_vp(Vp.coeffs().size() + 1, 0.0);
  for (size_t k = 0; k < Vp.coeffs().size(); ++k) lam_vp[k + 1] = Vp.coeffs()[k];
  Polynomial lamVp(std::move(lam_vp));  // lambda * V'(lambda)
  auto resid = [&](double cc, double rr, double& f1, double& f2) {
    f1 = angular_average(Vp, cc, rr);
    f2 = angular_average(lamVp, cc, rr) - 2.0;
  };

  double f1, f2;
  resid(c, r, f1, f2);
  for (int it = 0; it < 200; ++it) {
    double nrm = std::hypot(f1, f2);
    if (nrm < 1e-12) break;
    double h = 1e-7 * std::max(1.0, r);
    double a1, a2, b1, b2;
    resid(c + h, r, a1, a2);
    resid(c, r + h, b1, b2);
    double J11 = (a1 - f1) / h, J12 = (b1 - f1) / h;
    double J21 = (a2 - f2) / h, J22 = (b2 - f2) / h;
    double det = J11 * J22 - J12 * J21;
    if (std::abs(det) < 1e-14)
      throw domain_error("solve_support: singular Jacobian (not one-cut?)");
    double dc = (f1 * J22 - f2 * J12) / det;
    double dr = (f2 * J11 - f1 * J21) / det;
    double damp = 1.0;
    for (; damp > 1e-6; damp *= 0.5) {
      double cn = c - damp * dc, rn = r - damp * dr;
      if (rn <= 0) continue;
      double g1, g2;
      resid(cn, rn, g1, g2);
      if (std::hypot(g1, g2) < nrm || damp <= 0.5) {
        c = cn; r = rn; f1 = g1; f2 = g2;
        break;
      }
    }
  }
  if (std::hypot(f1, f2) > 1e-10)
    throw domain_error("solve_support: Newton iteration did not converge (condition C1?)");
  return {c - r, c + r};
}

Complex compute_P(const Polynomial& V, Complex z, int nquad) {
  Polynomial Vp = V.derivative();
  Polynomial Vpp = Vp.derivative();
  Complex Vpz = Vp.eval(z);
  Complex sc(0.0, 0.0);
  for (double lam : chebyshev_nodes(nquad)) {
    Complex dz = z - lam;
    if (std::abs(dz) < 1e-8)
      sc += Vpp.eval(lam);
    else
      sc += (Vpz - Vp.eval(Complex(lam, 0.0))) / dz;
  }
  return sc / double(nquad);
}

Polynomial compute_P_coeffs(const Polynomial& V) {
  // P(z) = sum_k d_k sum_{i=0}^{k-1} m_i z^{k-1-i}, with d_k the
  // coefficients of V' and m_i the arcsine moments.
  Polynomial Vp = V.derivative();
  const auto& d = Vp.coeffs();
  int deg = Vp.degree();
  std::vector<double> out(std::max(deg, 1), 0.0);
  for (int k = 1; k <= deg; ++k)
    for (int i = 0; i < k; ++i) out[k - 1 - i] += d[k] * arcsine_moment(i);
  return Polynomial(std::move(out));
}

namespace {
void scan_zeros(EquilibriumMeasure& eq) {
  eq.P_zeros = poly_roots(eq.P);
  eq.d_max = std::numeric_limits<double>::infinity();
  for (const Complex& z : eq.P_zeros)
    eq.d_max = std::min(eq.d_max, dist_to_support(z) / 2.0);
}
}  // namespace

EquilibriumMeasure solve_equilibrium(const Polynomial& p) {
  auto [a, b] = solve_support(p);
  EquilibriumMeasure eq;
  eq.a = a;
  eq.b = b;
  auto rs = rescale_to_standard(p, a, b);
  eq.V = rs.rescaled;
  eq.map = rs.map;
  eq.rescaled = true;
  Polynomial P = compute_P_coeffs(eq.V);
  double mass = 0;
  for (int j = 0; 2 * j <= P.degree(); ++j) mass += P.coeffs()[2 * j] * catalan(j);
  if (std::abs(mass - 1.0) > 1e-8)
    throw domain_error("equilibrium inconsistency: int rho = " + std::to_string(mass));
  eq.normalization = 1.0 / mass;
  eq.P = P * eq.normalization;
  scan_zeros(eq);
  return eq;
}

EquilibriumMeasure interpolate_equilibrium(const EquilibriumMeasure& eq, double t) {
  if (t < 0.0 || t > 1.0) throw domain_error("interpolate_equilibrium: t outside [0,1]");
  EquilibriumMeasure out = eq;
  out.V = eq.V * t + Polynomial::gaussian() * (1.0 - t);
  out.P = eq.P * t + Polynomial({1.0}) * (1.0 - t);
  out.normalization = 1.0;
  scan_zeros(out);
  return out;
}

double EquilibriumMeasure::density(double lambda) const {
  if (lambda < -2.0 || lambda > 2.0)
    throw domain_error("density: point outside the support [-2,2]");
  return P.eval(lambda) * std::sqrt(4.0 - lambda * lambda) / (2.0 * M_PI);
}

Complex EquilibriumMeasure::stieltjes(Complex z) const {
  if (dist_to_support(z) == 0.0) throw domain_error("stieltjes: z on the cut");
  return (V.eval(z, 1) - P.eval(z) * sqrtX(z)) / 2.0;
}

Complex EquilibriumMeasure::stieltjes_deriv(Complex z) const {
  if (dist_to_support(z) == 0.0) throw domain_error("stieltjes_deriv: z on the cut");
  Complex X = sqrtX(z);
  return (V.eval(z, 2) - P.eval(z, 1) * X - P.eval(z) * z / X) / 2.0;
}

Complex stieltjes_by_quadrature(const EquilibriumMeasure& eq, Complex z, int ntheta) {
  GaussLegendre gl(ntheta);
  Complex s(0.0, 0.0);
  for (int i = 0; i < ntheta; ++i) {
    double th = M_PI * (gl.nodes[i] + 1.0) / 2.0;
    double lam = 2.0 * std::cos(th);
    double mu = (2.0 / M_PI) * eq.P.eval(lam) * std::sin(th) * std::sin(th);
    s += (M_PI / 2.0) * gl.weights[i] * mu / (z - lam);
  }
  return s;
}

double energy(const EquilibriumMeasure& eq, int ntheta) {
  GaussLegendre gl(ntheta);
  int kmax = eq.P.degree() + 4;
  std::vector<double> ck(kmax + 1, 0.0);
  double vint = 0;
  for (int i = 0; i < ntheta; ++i) {
    double th = M_PI * (gl.nodes[i] + 1.0) / 2.0;
    double w = (M_PI / 2.0) * gl.weights[i];
    double lam = 2.0 * std::cos(th);
    double mu = (2.0 / M_PI) * eq.P.eval(lam) * std::sin(th) * std::sin(th);
    for (int k = 1; k <= kmax; ++k) ck[k] += w * mu * std::cos(k * th);
    vint += w * mu * eq.V.eval(lam);
  }
  // intint log|l-m| rho rho = -2 sum_k c_k^2 / k  (finite sum: rho is a
  // trigonometric polynomial in theta)
  double loglog = 0;
  for (int k = 1; k <= kmax; ++k) loglog -= 2.0 * ck[k] * ck[k] / k;
  return loglog - vint;
}

ValidationReport validate(const EquilibriumMeasure& eq) {
  ValidationReport rep;
  rep.d_max = eq.d_max;

  rep.min_P = std::numeric_limits<double>::infinity();
  const int ngrid = 2048;
  for (int i = 0; i < ngrid; ++i) {
    double lam = -2.0 + 4.0 * i / (ngrid - 1);
    rep.min_P = std::min(rep.min_P, eq.P.eval(lam));
  }
  if (rep.min_P <= 0.0)
    rep.violations.push_back("C2 violated: inf P on [-2,2] = " + std::to_string(rep.min_P));

  // Identity 2g - V' = -P X^{1/2} with g recomputed by direct quadrature.
  double d = std::isfinite(eq.d_max) ? std::min(0.5, 0.45 * eq.d_max) : 0.5;
  if (d > 0) {
    rep.max_residual = 0;
    for (int i = 0; i < 64; ++i) {
      double s = double(i) / 64;
      Complex z;
      if (s < 0.25) {
        z = Complex(-2.0 + 16.0 * s, d);
      } else if (s < 0.5) {
        double phi = M_PI / 2 + M_PI * (s - 0.25) * 4;
        z = Complex(-2.0, 0.0) + d * Complex(std::cos(phi), std::sin(phi));
      } else if (s < 0.75) {
        z = Complex(-2.0 + 16.0 * (s - 0.5), -d);
      } else {
        double phi = -M_PI / 2 + M_PI * (s - 0.75) * 4;
        z = Complex(2.0, 0.0) + d * Complex(std::cos(phi), std::sin(phi));
      }
      Complex g = stieltjes_by_quadrature(eq, z);
      Complex res = 2.0 * g - eq.V.eval(z, 1) + eq.P.eval(z) * sqrtX(z);
      rep.max_residual = std::max(rep.max_residual, std::abs(res));
    }
    if (rep.max_residual > 1e-8)
      rep.violations.push_back("identity 2g-V' residual " + std::to_string(rep.max_residual));
  }

  rep.pass = rep.violations.empty();
  return rep;
}

}  // namespace betalab
