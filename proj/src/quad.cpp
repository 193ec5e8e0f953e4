#include "betalab/quad.hpp"

#include <cmath>
#include <stdexcept>

namespace betalab {

GaussLegendre::GaussLegendre(int n) {
  if (n < 1) throw std::invalid_argument("GaussLegendre: need n >= 1");
  nodes.resize(n);
  weights.resize(n);
  // Newton iteration from Chebyshev initial guesses; symmetric rule.
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double pp = 0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        double p2 = p1;
        p1 = p0;
        p0 = ((2 * j + 1) * x * p1 - j * p2) / (j + 1);
      }
      pp = n * (x * p0 - p1) / (x * x - 1.0);
      double dx = p0 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    nodes[i] = -x;
    nodes[n - 1 - i] = x;
    double w = 2.0 / ((1.0 - x * x) * pp * pp);
    weights[i] = w;
    weights[n - 1 - i] = w;
  }
}

std::vector<double> chebyshev_nodes(int n) {
  std::vector<double> x(n);
  for (int k = 0; k < n; ++k)
    x[k] = 2.0 * std::cos(M_PI * (2 * k + 1) / (2.0 * n));
  return x;
}

namespace {
// P_0..P_{lmax} at x.
void legendre_all(int lmax, double x, double* out) {
  out[0] = 1.0;
  if (lmax >= 1) out[1] = x;
  for (int l = 1; l < lmax; ++l)
    out[l + 1] = ((2 * l + 1) * x * out[l] - l * out[l - 1]) / (l + 1);
}
}  // namespace

PanelGrid::PanelGrid(double lo, double hi, int npanels, int ppp)
    : lo_(lo), hi_(hi), npanels_(npanels), ppp_(ppp) {
  if (hi <= lo || npanels < 1 || ppp < 2)
    throw std::invalid_argument("PanelGrid: bad parameters");
  hpanel_ = (hi - lo) / npanels;
  GaussLegendre gl(ppp);
  nodes_.resize(npanels * ppp);
  weights_.resize(npanels * ppp);
  for (int p = 0; p < npanels; ++p) {
    double a = lo + p * hpanel_, mid = a + hpanel_ / 2, h2 = hpanel_ / 2;
    for (int i = 0; i < ppp; ++i) {
      nodes_[p * ppp + i] = mid + h2 * gl.nodes[i];
      weights_[p * ppp + i] = h2 * gl.weights[i];
    }
  }
  // values -> Legendre coefficients on the reference panel:
  //   c_l = (2l+1)/2 * sum_i w_i P_l(t_i) f_i   (exact for deg f <= ppp-1)
  coeff_op_.resize(ppp, ppp);
  std::vector<double> P(ppp + 1);
  Eigen::MatrixXd Pmat(ppp + 1, ppp);  // P_l(t_i)
  for (int i = 0; i < ppp; ++i) {
    legendre_all(ppp, gl.nodes[i], P.data());
    for (int l = 0; l <= ppp; ++l) Pmat(l, i) = P[l];
  }
  for (int l = 0; l < ppp; ++l)
    for (int i = 0; i < ppp; ++i)
      coeff_op_(l, i) = 0.5 * (2 * l + 1) * gl.weights[i] * Pmat(l, i);
  // coefficients -> antiderivative values at reference nodes:
  //   int_{-1}^t P_0 = t+1,  int_{-1}^t P_l = (P_{l+1}(t) - P_{l-1}(t))/(2l+1)
  Eigen::MatrixXd intmat(ppp, ppp);
  for (int i = 0; i < ppp; ++i) {
    legendre_all(ppp, gl.nodes[i], P.data());
    intmat(i, 0) = gl.nodes[i] + 1.0;
    for (int l = 1; l < ppp; ++l)
      intmat(i, l) = (P[l + 1] - P[l - 1]) / (2 * l + 1);
  }
  antideriv_op_ = intmat * coeff_op_;
  // int_{-1}^{1} f = 2*c_0
  panel_int_ = 2.0 * coeff_op_.row(0);
}

Eigen::VectorXd PanelGrid::antiderivative(const Eigen::VectorXd& f) const {
  Eigen::VectorXd F(f.size());
  double h2 = hpanel_ / 2, running = 0;
  for (int p = 0; p < npanels_; ++p) {
    auto seg = f.segment(p * ppp_, ppp_);
    F.segment(p * ppp_, ppp_) =
        Eigen::VectorXd::Constant(ppp_, running) + h2 * (antideriv_op_ * seg);
    running += h2 * panel_int_.dot(seg);
  }
  return F;
}

CumulativeFn::CumulativeFn(const PanelGrid& grid, const Eigen::VectorXd& f)
    : grid_(&grid) {
  int ppp = grid.ppp_, np = grid.npanels_;
  coeffs_.resize(ppp, np);
  prefix_.resize(np + 1);
  prefix_[0] = 0;
  double h2 = grid.hpanel_ / 2;
  for (int p = 0; p < np; ++p) {
    coeffs_.col(p) = grid.coeff_op_ * f.segment(p * ppp, ppp);
    prefix_[p + 1] = prefix_[p] + 2.0 * h2 * coeffs_(0, p);
  }
  total_ = prefix_[np];
}

double CumulativeFn::operator()(double x) const {
  const PanelGrid& g = *grid_;
  if (x <= g.lo_) return 0.0;
  if (x >= g.hi_) return total_;
  int p = static_cast<int>((x - g.lo_) / g.hpanel_);
  if (p >= g.npanels_) p = g.npanels_ - 1;
  double a = g.lo_ + p * g.hpanel_;
  double t = 2 * (x - a) / g.hpanel_ - 1.0;
  int ppp = g.ppp_;
  std::vector<double> P(ppp + 1);
  legendre_all(ppp, t, P.data());
  double s = coeffs_(0, p) * (t + 1.0);
  for (int l = 1; l < ppp; ++l)
    s += coeffs_(l, p) * (P[l + 1] - P[l - 1]) / (2 * l + 1);
  return prefix_[p] + (g.hpanel_ / 2) * s;
}

}  // namespace betalab
