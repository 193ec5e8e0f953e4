#include "betalab/universality.hpp"

#include <cmath>

#include "betalab/equilibrium.hpp"
#include "betalab/errors.hpp"
#include "betalab/quad.hpp"

namespace betalab {

double sinc_kernel(double t) {
  double x = M_PI * t;
  if (std::abs(x) < 1e-4) return 1.0 - x * x / 6.0 + x * x * x * x / 120.0;
  return std::sin(x) / x;
}

double sinc_kernel_deriv(double t) {
  double x = M_PI * t;
  if (std::abs(x) < 1e-4)
    return M_PI * (-x / 3.0 + x * x * x / 30.0);
  return M_PI * (x * std::cos(x) - std::sin(x)) / (x * x);
}

double sine_integral(double x) {
  if (x < 0) return -sine_integral(-x);
  // composite Gauss-Legendre in half-period panels
  int panels = std::max(1, int(std::ceil(x / M_PI)));
  static const GaussLegendre gl(24);
  double h = x / panels, s = 0;
  for (int p = 0; p < panels; ++p) {
    double mid = (p + 0.5) * h;
    for (int i = 0; i < gl.nodes.size(); ++i) {
      double t = mid + 0.5 * h * gl.nodes[i];
      s += 0.5 * h * gl.weights[i] * (t == 0.0 ? 1.0 : std::sin(t) / t);
    }
  }
  return s;
}

Eigen::Matrix2d sine_limit(int beta, double xi, double eta) {
  if (beta != 1 && beta != 4) throw domain_error("sine_limit: beta must be 1 or 4");
  double d = xi - eta;
  Eigen::Matrix2d k;
  k(0, 0) = sinc_kernel(d);
  k(0, 1) = sinc_kernel_deriv(d);
  k(1, 0) = sine_integral(M_PI * d) / M_PI;
  if (beta == 1 && d != 0.0) k(1, 0) -= 0.5 * (d > 0 ? 1.0 : -1.0);
  k(1, 1) = sinc_kernel(-d);
  return k;
}

std::vector<std::pair<double, double>> unit_grid(int grid_size) {
  std::vector<std::pair<double, double>> out;
  for (int i = 0; i < grid_size; ++i)
    for (int j = 0; j < grid_size; ++j) {
      double xi = -2.0 + 4.0 * i / (grid_size - 1);
      double eta = -2.0 + 4.0 * j / (grid_size - 1);
      out.emplace_back(xi, eta);
    }
  return out;
}

namespace {

// -int_la^mu S(t, mu) dt: the paper's shortcut for (eps S)(la, mu)
double eps_S_by_line(const KernelWorkspace& ws, int beta, double la, double mu) {
  static const GaussLegendre gl(32);
  double mid = 0.5 * (la + mu), h2 = 0.5 * (mu - la), s = 0;
  for (int i = 0; i < gl.nodes.size(); ++i)
    s += h2 * gl.weights[i] * ws.tracy_widom_S(beta, mid + h2 * gl.nodes[i], mu);
  return -s;
}

}  // namespace

RescaledSample rescaled_matrix_kernel(const KernelWorkspace& ws, int beta,
                                      double lambda0,
                                      const std::vector<std::pair<double, double>>& grid) {
  if (beta != 1 && beta != 2 && beta != 4)
    throw domain_error("rescaled_matrix_kernel: beta must be 1, 2 or 4");
  EquilibriumMeasure eq = solve_equilibrium(ws.V());
  if (std::abs(lambda0) > 1.5 || eq.density(lambda0) < 1e-3)
    throw domain_error("rescaled_matrix_kernel: lambda0 too close to the spectral edge");

  RescaledSample out;
  out.beta = beta;
  out.n = ws.n();
  out.lambda0 = lambda0;
  out.q_n = ws.n() * eq.density(lambda0);
  const double q = out.q_n;
  const double fd = 1e-5 / q;

  for (auto [xi, eta] : grid) {
    double la = lambda0 + xi / q, mu = lambda0 + eta / q;
    KernelEntry val{xi, eta, 0, 0, 0, 0}, lim{xi, eta, 0, 0, 0, 0};
    if (beta == 2) {
      val.s11 = ws.kernel(la, mu) / q;
      lim.s11 = sinc_kernel(xi - eta);
    } else {
      // (1/q) A^{(q)}-conjugation: diagonal unchanged, 12-entry / q^2,
      // 21-entry unscaled
      val.s11 = ws.tracy_widom_S(beta, la, mu) / q;
      val.s22 = ws.tracy_widom_S(beta, mu, la) / q;
      double dmu = (ws.tracy_widom_S(beta, la, mu + fd) -
                    ws.tracy_widom_S(beta, la, mu - fd)) / (2 * fd);
      val.s12 = -dmu / (q * q);
      double eps_conv = ws.eps_S(beta, la, mu);
      double eps_line = eps_S_by_line(ws, beta, la, mu);
      out.eps_route_gap = std::max(out.eps_route_gap, std::abs(eps_conv - eps_line));
      val.s21 = eps_conv;
      if (beta == 1 && la != mu) val.s21 -= 0.5 * (la > mu ? 1.0 : -1.0);
      Eigen::Matrix2d k = sine_limit(beta, xi, eta);
      lim.s11 = k(0, 0);
      lim.s12 = k(0, 1);
      lim.s21 = k(1, 0);
      lim.s22 = k(1, 1);
    }
    double dev = std::max({std::abs(val.s11 - lim.s11), std::abs(val.s12 - lim.s12),
                           std::abs(val.s21 - lim.s21), std::abs(val.s22 - lim.s22)});
    out.max_deviation = std::max(out.max_deviation, dev);
    out.values.push_back(val);
    out.limit.push_back(lim);
  }
  return out;
}

DeviationTable bulk_deviation(const Polynomial& V, int beta, double lambda0,
                              const std::vector<int>& ns, int grid_size) {
  if (ns.size() < 3)
    throw domain_error("bulk_deviation: need at least three values of n");
  DeviationTable table;
  auto grid = unit_grid(grid_size);
  for (int n : ns) {
    KernelWorkspace ws(V, n);
    RescaledSample s = rescaled_matrix_kernel(ws, beta, lambda0, grid);
    table.rows.push_back({n, s.max_deviation});
  }
  for (size_t i = 1; i < table.rows.size(); ++i)
    if (table.rows[i].deviation > 2.0 * table.rows[i - 1].deviation)
      table.monotone_ok = false;
  // least-squares slope of log(dev) against log(n)
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& r : table.rows) {
    double x = std::log(double(r.n)), y = std::log(r.deviation);
    sx += x; sy += y; sxx += x * x; sxy += x * y;
  }
  double k = table.rows.size();
  table.fitted_exponent = (k * sxy - sx * sy) / (k * sxx - sx * sx);
  return table;
}

}  // namespace betalab
