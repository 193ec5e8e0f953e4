#ifndef BETALAB_QUAD_HPP
#define BETALAB_QUAD_HPP

#include <Eigen/Dense>
#include <vector>

namespace betalab {

// Gauss-Legendre rule on [-1,1].
struct GaussLegendre {
  Eigen::VectorXd nodes;
  Eigen::VectorXd weights;
  explicit GaussLegendre(int npoints);
};

// Nodes of the first-kind Gauss-Chebyshev rule mapped to [-2,2]:
//   (1/pi) * int_{-2}^{2} f(x)/sqrt(4-x^2) dx  ~=  (1/N) sum f(2 cos theta_k).
std::vector<double> chebyshev_nodes(int npoints);

// Composite Gauss-Legendre grid over [lo,hi]: npanels equal panels with
// ppp points each. Supports integration and antiderivatives of grid
// functions via per-panel Legendre expansions.
class PanelGrid {
public:
  PanelGrid() = default;
  PanelGrid(double lo, double hi, int npanels, int points_per_panel);

  double lo() const { return lo_; }
  double hi() const { return hi_; }
  int size() const { return static_cast<int>(nodes_.size()); }
  int panels() const { return npanels_; }
  int points_per_panel() const { return ppp_; }
  const Eigen::VectorXd& nodes() const { return nodes_; }
  const Eigen::VectorXd& weights() const { return weights_; }

  double integrate(const Eigen::VectorXd& fvals) const {
    return weights_.dot(fvals);
  }

  // Values of F(x) = int_lo^x f at all grid nodes.
  Eigen::VectorXd antiderivative(const Eigen::VectorXd& fvals) const;

private:
  double lo_ = 0, hi_ = 0, hpanel_ = 0;
  int npanels_ = 0, ppp_ = 0;
  Eigen::VectorXd nodes_, weights_;
  Eigen::MatrixXd antideriv_op_;  // ppp x ppp, maps panel values -> panel antiderivative values (on [-1,1])
  Eigen::RowVectorXd panel_int_;  // ppp, maps panel values -> panel integral (on [-1,1])

  friend class CumulativeFn;
  Eigen::MatrixXd coeff_op_;      // ppp x ppp, values -> Legendre coefficients
};

// Antiderivative F(x) = int_lo^x f of a grid function, evaluable at
// arbitrary x in [lo,hi] through the per-panel Legendre expansion.
class CumulativeFn {
public:
  CumulativeFn(const PanelGrid& grid, const Eigen::VectorXd& fvals);
  double total() const { return total_; }
  double operator()(double x) const;

private:
  const PanelGrid* grid_;
  Eigen::MatrixXd coeffs_;        // ppp x npanels Legendre coefficients per panel
  std::vector<double> prefix_;    // integral over panels [0, k)
  double total_;
};

}  // namespace betalab

#endif
