#ifndef BETALAB_UNIVERSALITY_HPP
#define BETALAB_UNIVERSALITY_HPP

#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "betalab/orthopoly.hpp"

namespace betalab {

// K_inf(t) = sin(pi t)/(pi t), its derivative, and int_0^x sin(t)/t dt
double sinc_kernel(double t);
double sinc_kernel_deriv(double t);
double sine_integral(double x);

// Limit matrix kernel for beta = 1 or 4 (beta = 2 is the scalar
// sinc_kernel(xi - eta)). Entry layout:
//   [ K(xi-eta)            K'(xi-eta)  ]
//   [ int_0^{xi-eta} K (-eps for beta=1)   K(eta-xi) ]
Eigen::Matrix2d sine_limit(int beta, double xi, double eta);

struct KernelEntry {
  double xi = 0, eta = 0;
  double s11 = 0, s12 = 0, s21 = 0, s22 = 0;
};

struct RescaledSample {
  int beta = 0, n = 0;
  double lambda0 = 0;
  double q_n = 0;               // n rho(lambda0)
  std::vector<KernelEntry> values;   // conjugated, 1/q_n-scaled kernel
  std::vector<KernelEntry> limit;    // sine_limit on the same pairs
  double max_deviation = 0;          // sup over entries and pairs
  double eps_route_gap = 0;          // |eps-conv - (-int_la^mu S)| worst case
};

// (1/q_n) K^{(q_n)} at (lambda0 + xi/q_n, lambda0 + eta/q_n); derivative
// entries by centered differences, 21-entries by direct eps-convolution
// with the line-integral shortcut cross-checked.
RescaledSample rescaled_matrix_kernel(const KernelWorkspace& ws, int beta,
                                      double lambda0,
                                      const std::vector<std::pair<double, double>>& grid);

// Uniform grid_size x grid_size pairs over [-2,2]^2 in (xi, eta).
std::vector<std::pair<double, double>> unit_grid(int grid_size);

struct DeviationRow {
  int n = 0;
  double deviation = 0;
};

struct DeviationTable {
  std::vector<DeviationRow> rows;
  double fitted_exponent = 0;   // slope of log(dev) vs log(n)
  bool monotone_ok = true;      // no increase beyond factor 2
};

DeviationTable bulk_deviation(const Polynomial& V, int beta, double lambda0,
                              const std::vector<int>& ns, int grid_size);

}  // namespace betalab

#endif
