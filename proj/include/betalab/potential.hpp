#ifndef BETALAB_POTENTIAL_HPP
#define BETALAB_POTENTIAL_HPP

#include <complex>
#include <string>
#include <vector>

namespace betalab {

constexpr int kMaxDegree = 32;

// Real-coefficient polynomial, constant term first.
class Polynomial {
public:
  Polynomial() : coeffs_{0.0} {}
  explicit Polynomial(std::vector<double> coeffs);

  static Polynomial gaussian();  // lambda^2/2

  const std::vector<double>& coeffs() const { return coeffs_; }
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  double leading() const { return coeffs_.back(); }
  bool is_even() const;

  // order-th derivative at z (order 0|1|2), by Horner.
  std::complex<double> eval(std::complex<double> z, int order = 0) const;
  double eval(double x, int order = 0) const;

  Polynomial derivative() const;
  // p(shift + x/scale): affine precomposition (Taylor shift then scale).
  Polynomial precompose_affine(double shift, double inv_scale) const;

  Polynomial operator*(double s) const;
  Polynomial operator+(const Polynomial& q) const;

private:
  std::vector<double> coeffs_;
};

// V_t = t*V + (1-t)*V0 with V0 = lambda^2/2.
struct PotentialFamily {
  Polynomial target;
  Polynomial reference = Polynomial::gaussian();
};

Polynomial interpolate(const PotentialFamily& fam, double t);

// lambda' = scale*(lambda - shift), mapping [a,b] onto [-2,2].
struct AffineMap {
  double shift = 0.0;
  double scale = 1.0;
  double forward(double x) const { return scale * (x - shift); }
  double inverse(double y) const { return shift + y / scale; }
};

// Potential expressed in the standard variable, plus the map that got there.
struct RescaleResult {
  Polynomial rescaled;
  AffineMap map;
};
RescaleResult rescale_to_standard(const Polynomial& p, double a, double b);

struct GrowthCheck {
  bool pass = false;
  std::string witness;  // violated asymptotic direction when failing
};
GrowthCheck check_growth(const Polynomial& p);

}  // namespace betalab

#endif
