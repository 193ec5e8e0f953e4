#ifndef BETALAB_EQUILIBRIUM_HPP
#define BETALAB_EQUILIBRIUM_HPP

#include <complex>
#include <limits>
#include <string>
#include <vector>

#include "betalab/potential.hpp"

namespace betalab {

using Complex = std::complex<double>;

// Distance from z to the segment [-2,2].
double dist_to_support(Complex z);

// Branch with X^{1/2}(z) ~ z at +infinity and Im X^{1/2}(x+i0) = sqrt(4-x^2).
Complex sqrtX(Complex z);

// One-cut equilibrium data in the standard variable (support [-2,2]).
// For a potential with support [a,b], `map` carries the affine change of
// variable and `V` is the potential already rescaled.
struct EquilibriumMeasure {
  double a = -2.0, b = 2.0;     // support of the original potential
  bool rescaled = true;
  Polynomial V;                 // potential in the standard variable
  Polynomial P;                 // analytic density factor, degree 2m-2
  AffineMap map;                // original -> standard
  double d_max = std::numeric_limits<double>::infinity();
  double normalization = 1.0;   // constant applied to enforce unit mass
  std::vector<Complex> P_zeros;

  double density(double lambda) const;         // (1/2pi) P sqrt(4-lambda^2)
  Complex stieltjes(Complex z) const;          // (V' - P sqrtX)/2
  Complex stieltjes_deriv(Complex z) const;    // g'(z), closed form
};

// Support endpoints of the equilibrium measure of p (damped Newton on the
// endpoint equations). Throws domain_error on divergence.
std::pair<double, double> solve_support(const Polynomial& p);

// P(z) by Gauss-Chebyshev quadrature of the divided-difference integral
// (normalized so the Gaussian gives P == 1).
Complex compute_P(const Polynomial& rescaled_V, Complex z, int nquad = 256);

// Exact coefficients of P for polynomial V via arcsine moments.
Polynomial compute_P_coeffs(const Polynomial& rescaled_V);

// Full pipeline: growth check, endpoints, rescale, P fit, normalization,
// zero scan.
EquilibriumMeasure solve_equilibrium(const Polynomial& p);

// Equilibrium of V_t = tV + (1-t)V0: P_t = tP + (1-t), same support.
EquilibriumMeasure interpolate_equilibrium(const EquilibriumMeasure& eq, double t);

// E_V = -intint log(1/|l-m|) rho rho - int V rho via the Chebyshev
// log-kernel expansion; ntheta controls the theta-quadrature order.
double energy(const EquilibriumMeasure& eq, int ntheta = 256);

struct ValidationReport {
  bool pass = false;
  double min_P = 0;             // inf P on [-2,2] (C2)
  double max_residual = 0;      // |2g - V' + P sqrtX| on L_d, g by quadrature
  double d_max = 0;
  std::vector<std::string> violations;
};

ValidationReport validate(const EquilibriumMeasure& eq);

// g(z) by direct quadrature of rho against 1/(z-lambda); the independent
// route used by validate().
Complex stieltjes_by_quadrature(const EquilibriumMeasure& eq, Complex z,
                                int ntheta = 512);

}  // namespace betalab

#endif
