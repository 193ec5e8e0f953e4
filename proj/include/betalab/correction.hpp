#ifndef BETALAB_CORRECTION_HPP
#define BETALAB_CORRECTION_HPP

#include <functional>
#include <vector>

#include "betalab/equilibrium.hpp"

namespace betalab {

// Closed discretized curve at distance d from [-2,2] (stadium), oriented
// counterclockwise. `dz_weights` fold the quadrature weight and the local
// tangent, so  oint F(z) dz  ~=  sum_i dz_weights[i] * F(nodes[i]).
struct Contour {
  double d = 0;
  std::vector<Complex> nodes;
  std::vector<Complex> dz_weights;
};

Contour build_contour(double d, int npoints);

using AnalyticFn = std::function<Complex(Complex)>;

struct CorrectionReport {
  double integral_value = 0;  // sign-pinned double contour integral
  double prefactor = 0;       // 2/beta - 1
  double predicted_shift = 0; // prefactor * integral_value
  double beta = 0;
  double d = 0;
  int npoints = 0;            // nodes per contour after adaptive doubling
};

// Sign-pinned value of the double contour integral
//   (1/(2 pi i)^2) oint_{L_2d} f(z)/X^{1/2}(z) oint_{L_d} g'(zeta)/(P(zeta)(z-zeta))
// with adaptive node doubling until successive values agree to 1e-8.
double correction_integral(const EquilibriumMeasure& eq, const AnalyticFn& f,
                           double d, int npoints = 256, int* npoints_used = nullptr);

CorrectionReport first_order_correction(const EquilibriumMeasure& eq,
                                        const AnalyticFn& f, double beta,
                                        double d);
CorrectionReport first_order_correction(const EquilibriumMeasure& eq,
                                        const Polynomial& f, double beta,
                                        double d);

// log Q^{(0)}_{n,beta} for the Gaussian case, by the Selberg formula.
double selberg_log_q0(int n, double beta);

struct LogQExpansion {
  double log_q0 = 0;        // Selberg reference
  double energy_term = 0;   // n^2 (beta/2) E_V
  double gaussian_term = 0; // n^2 (3/8) beta
  double correction_term = 0; // n (1 - beta/2) J
  double total = 0;
};

// Asymptotic expansion of log Q_{n,beta} for the (standard-support)
// potential of eq; J averages the contour integral over the Gaussian
// interpolation path with 16-point Gauss-Legendre in t.
LogQExpansion logq_expansion(const EquilibriumMeasure& eq, int n, double beta,
                             double d);

}  // namespace betalab

#endif
