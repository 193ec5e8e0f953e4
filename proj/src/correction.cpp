#include "betalab/correction.hpp"

#include <cmath>

#include "betalab/errors.hpp"
#include "betalab/quad.hpp"

namespace betalab {

Contour build_contour(double d, int npoints) {
  if (d <= 0) throw domain_error("build_contour: d must be positive");
  int per = std::max(4, npoints / 4);
  GaussLegendre gl(per);
  Contour c;
  c.d = d;
  c.nodes.reserve(4 * per);
  c.dz_weights.reserve(4 * per);
  const Complex I(0.0, 1.0);
  // right semicircle (phi: -pi/2 -> pi/2), top segment (x: 2 -> -2),
  // left semicircle (phi: pi/2 -> 3pi/2), bottom segment (x: -2 -> 2)
  for (int i = 0; i < per; ++i) {
    double phi = -M_PI / 2 + M_PI * (gl.nodes[i] + 1) / 2;
    c.nodes.push_back(Complex(2.0, 0.0) + d * std::exp(I * phi));
    c.dz_weights.push_back((M_PI / 2) * gl.weights[i] * I * d * std::exp(I * phi));
  }
  for (int i = 0; i < per; ++i) {
    double x = 2.0 - 2.0 * (gl.nodes[i] + 1);
    c.nodes.push_back(Complex(x, d));
    c.dz_weights.push_back(Complex(-2.0 * gl.weights[i], 0.0));
  }
  for (int i = 0; i < per; ++i) {
    double phi = M_PI / 2 + M_PI * (gl.nodes[i] + 1) / 2;
    c.nodes.push_back(Complex(-2.0, 0.0) + d * std::exp(I * phi));
    c.dz_weights.push_back((M_PI / 2) * gl.weights[i] * I * d * std::exp(I * phi));
  }
  for (int i = 0; i < per; ++i) {
    double x = -2.0 + 2.0 * (gl.nodes[i] + 1);
    c.nodes.push_back(Complex(x, -d));
    c.dz_weights.push_back(Complex(2.0 * gl.weights[i], 0.0));
  }
  return c;
}

namespace {

Complex nested_integral(const EquilibriumMeasure& eq, const AnalyticFn& f,
                        double d, int npoints) {
  Contour outer = build_contour(2 * d, npoints);
  Contour inner = build_contour(d, npoints);
  const Complex two_pi_i(0.0, 2.0 * M_PI);
  // Precompute g'(zeta)/P(zeta) on the inner contour.
  std::vector<Complex> inner_val(inner.nodes.size());
  for (size_t j = 0; j < inner.nodes.size(); ++j)
    inner_val[j] = eq.stieltjes_deriv(inner.nodes[j]) / eq.P.eval(inner.nodes[j]);
  Complex total(0.0, 0.0);
  for (size_t i = 0; i < outer.nodes.size(); ++i) {
    Complex z = outer.nodes[i];
    Complex inner_sum(0.0, 0.0);
    for (size_t j = 0; j < inner.nodes.size(); ++j)
      inner_sum += inner.dz_weights[j] * inner_val[j] / (z - inner.nodes[j]);
    total += outer.dz_weights[i] * f(z) / sqrtX(z) * inner_sum;
  }
  return total / (two_pi_i * two_pi_i);
}

}  // namespace

double correction_integral(const EquilibriumMeasure& eq, const AnalyticFn& f,
                           double d, int npoints, int* npoints_used) {
  if (std::isfinite(eq.d_max) && d >= eq.d_max / 2)
    throw domain_error("correction: P has a zero inside L_{2d}; decrease d");
  // Sign pinned by the Gaussian f = lambda^2 oracle (shift = +(2/beta-1)).
  Complex prev = -nested_integral(eq, f, d, npoints);
  for (int n = 2 * npoints; n <= 16 * npoints; n *= 2) {
    Complex cur = -nested_integral(eq, f, d, n);
    if (std::abs(cur - prev) < 1e-8) {
      if (npoints_used) *npoints_used = n;
      if (std::abs(cur.imag()) > 1e-7)
        throw precision_error("correction integral has non-real value");
      return cur.real();
    }
    prev = cur;
  }
  throw precision_error("correction integral did not converge under node doubling");
}

CorrectionReport first_order_correction(const EquilibriumMeasure& eq,
                                        const AnalyticFn& f, double beta,
                                        double d) {
  if (beta <= 0) throw domain_error("beta must be positive");
  CorrectionReport rep;
  rep.beta = beta;
  rep.d = d;
  rep.prefactor = 2.0 / beta - 1.0;
  rep.integral_value = correction_integral(eq, f, d, 256, &rep.npoints);
  rep.predicted_shift = rep.prefactor * rep.integral_value;
  if (beta == 2.0) rep.predicted_shift = 0.0;  // prefactor vanishes exactly
  return rep;
}

CorrectionReport first_order_correction(const EquilibriumMeasure& eq,
                                        const Polynomial& f, double beta,
                                        double d) {
  return first_order_correction(
      eq, [&f](Complex z) { return f.eval(z); }, beta, d);
}

double selberg_log_q0(int n, double beta) {
  if (n < 1) throw domain_error("selberg_log_q0: n >= 1 required");
  if (beta <= 0) throw domain_error("selberg_log_q0: beta > 0 required");
  double s = std::lgamma(n + 1.0);
  s -= (beta * n * (n - 1.0) / 4.0 + n / 2.0) * std::log(n * beta / 2.0);
  s += (n / 2.0) * std::log(2.0 * M_PI);
  for (int j = 1; j <= n; ++j)
    s += std::lgamma(beta * j / 2.0) - std::lgamma(beta / 2.0);
  return s;
}

LogQExpansion logq_expansion(const EquilibriumMeasure& eq, int n, double beta,
                             double d) {
  LogQExpansion out;
  out.log_q0 = selberg_log_q0(n, beta);
  out.energy_term = n * double(n) * (beta / 2.0) * energy(eq);
  out.gaussian_term = n * double(n) * (3.0 / 8.0) * beta;
  AnalyticFn f = [&eq](Complex z) { return eq.V.eval(z) - z * z / 2.0; };
  double J = 0;
  if (beta != 2.0 && eq.V.coeffs() != Polynomial::gaussian().coeffs()) {
    GaussLegendre gl(16);
    for (int i = 0; i < 16; ++i) {
      double t = (gl.nodes[i] + 1.0) / 2.0;
      EquilibriumMeasure eqt = interpolate_equilibrium(eq, t);
      ValidationReport v = validate(eqt);
      if (!v.pass)
        throw domain_error("logq_expansion: V_t loses one-cut validity at t=" +
                           std::to_string(t));
      J += 0.5 * gl.weights[i] * correction_integral(eqt, f, d);
    }
  }
  out.correction_term = n * (1.0 - beta / 2.0) * J;
  out.total = out.log_q0 + out.energy_term + out.gaussian_term + out.correction_term;
  return out;
}

}  // namespace betalab
