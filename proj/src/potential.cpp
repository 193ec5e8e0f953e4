#include "betalab/potential.hpp"

#include <cmath>

#include "betalab/errors.hpp"

namespace betalab {

Polynomial::Polynomial(std::vector<double> coeffs) : coeffs_(std::move(coeffs)) {
  if (coeffs_.empty()) coeffs_ = {0.0};
  while (coeffs_.size() > 1 && coeffs_.back() == 0.0) coeffs_.pop_back();
  if (degree() > kMaxDegree)
    throw domain_error("polynomial degree exceeds " + std::to_string(kMaxDegree));
}

Polynomial Polynomial::gaussian() { return Polynomial({0.0, 0.0, 0.5}); }

bool Polynomial::is_even() const {
  double scale = 0.0;
  for (double c : coeffs_) scale = std::max(scale, std::abs(c));
  // tolerant of roundoff from affine rescaling of a symmetric potential
  for (size_t k = 1; k < coeffs_.size(); k += 2)
    if (std::abs(coeffs_[k]) > 1e-9 * scale) return false;
  return true;
}

Polynomial Polynomial::derivative() const {
  if (degree() == 0) return Polynomial({0.0});
  std::vector<double> d(coeffs_.size() - 1);
  for (size_t k = 1; k < coeffs_.size(); ++k) d[k - 1] = k * coeffs_[k];
  return Polynomial(std::move(d));
}

namespace {
template <typename T>
T horner(const std::vector<double>& c, T z) {
  T acc(0.0);
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * z + *it;
  return acc;
}
}  // namespace

std::complex<double> Polynomial::eval(std::complex<double> z, int order) const {
  if (order == 0) return horner(coeffs_, z);
  Polynomial d = derivative();
  return order == 1 ? horner(d.coeffs_, z) : d.derivative().eval(z, 0);
}

double Polynomial::eval(double x, int order) const {
  if (order == 0) return horner(coeffs_, x);
  Polynomial d = derivative();
  return order == 1 ? horner(d.coeffs_, x) : d.derivative().eval(x, 0);
}

Polynomial Polynomial::precompose_affine(double shift, double inv_scale) const {
  // Taylor shift: q(u) = p(shift + u)
  std::vector<double> c = coeffs_;
  int n = static_cast<int>(c.size());
  for (int i = 0; i < n - 1; ++i)
    for (int j = n - 2; j >= i; --j) c[j] += shift * c[j + 1];
  // u = x * inv_scale
  double f = 1.0;
  for (int k = 1; k < n; ++k) {
    f *= inv_scale;
    c[k] *= f;
  }
  return Polynomial(std::move(c));
}

Polynomial Polynomial::operator*(double s) const {
  std::vector<double> c = coeffs_;
  for (double& x : c) x *= s;
  return Polynomial(std::move(c));
}

Polynomial Polynomial::operator+(const Polynomial& q) const {
  std::vector<double> c(std::max(coeffs_.size(), q.coeffs_.size()), 0.0);
  for (size_t k = 0; k < coeffs_.size(); ++k) c[k] += coeffs_[k];
  for (size_t k = 0; k < q.coeffs_.size(); ++k) c[k] += q.coeffs_[k];
  return Polynomial(std::move(c));
}

Polynomial interpolate(const PotentialFamily& fam, double t) {
  if (t < 0.0 || t > 1.0)
    throw domain_error("interpolation parameter t outside [0,1]");
  return fam.target * t + fam.reference * (1.0 - t);
}

RescaleResult rescale_to_standard(const Polynomial& p, double a, double b) {
  if (a >= b) throw domain_error("rescale_to_standard: requires a < b");
  AffineMap map{(a + b) / 2.0, 4.0 / (b - a)};
  return {p.precompose_affine(map.shift, 1.0 / map.scale), map};
}

GrowthCheck check_growth(const Polynomial& p) {
  if (p.degree() < 2)
    return {false, "degree < 2: V grows slower than 2 log|lambda| at +/-inf"};
  if (p.degree() % 2 != 0)
    return {false, "odd degree: V unbounded below in one direction"};
  if (p.leading() <= 0.0)
    return {false, "non-positive leading coefficient: V -> -inf as |lambda| -> inf"};
  return {true, ""};
}

}  // namespace betalab
