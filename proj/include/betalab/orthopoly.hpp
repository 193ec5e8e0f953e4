#ifndef BETALAB_ORTHOPOLY_HPP
#define BETALAB_ORTHOPOLY_HPP

#include <Eigen/Dense>
#include <vector>

#include "betalab/potential.hpp"
#include "betalab/quad.hpp"

namespace betalab {

// Three-term recurrence of the orthonormal system for the varying weight
// e^{-nV}:  x psi_k = a_{k+1} psi_{k+1} + b_k psi_k + a_k psi_{k-1}.
struct RecurrenceTable {
  std::vector<double> a;          // a[k] = a_k, k = 1..levels-1 (a[0] unused)
  std::vector<double> b;          // b[k], k = 0..levels-1
  std::vector<double> log_gamma;  // leading coefficients of p_k, log scale
  int n_weight = 0;
  int levels = 0;                 // psi_0 .. psi_{levels-1} available
};

// Everything needed to evaluate the beta = 1, 4 kernels for one (V, n):
// recurrence data, the differentiation and integration matrices, the
// corner blocks, and the wavefunctions on a quadrature grid.
class KernelWorkspace {
public:
  KernelWorkspace(const Polynomial& V, int n);

  int n() const { return n_; }
  int m() const { return m_; }
  const Polynomial& V() const { return V_; }
  const RecurrenceTable& rec() const { return rec_; }
  const PanelGrid& grid() const { return grid_; }
  const Eigen::MatrixXd& psi_grid() const { return psi_; }

  // log Gamma_n = sum_{j<n} log gamma_j
  double gamma_log() const;

  // psi_j at arbitrary x by upward recurrence (j < levels)
  double psi(int j, double x) const;
  // (eps psi_j)(x); constant +-(1/2) int psi_j outside the grid
  double eps_psi(int j, double x) const;
  // (psi_j)'(x) through the banded differentiation matrix
  double psi_deriv(int j, double x) const;

  // reproducing kernel K_n(la, mu) = sum_{j<n} psi_j(la) psi_j(mu)
  double kernel(double la, double mu) const;

  // S_{n,1} (beta = 1) or S_{n/2,4} (beta = 4), corner-block corrected form
  double tracy_widom_S(int beta, double la, double mu) const;
  // same quantities through the full inverse of M_n / D_n
  double tracy_widom_S_direct(int beta, double la, double mu) const;

  // (eps S)(la, mu) by direct quadrature of eps against S over the grid
  double eps_S(int beta, double la, double mu) const;

  // corner block of D_n M_n and log|det|; verifies it against 1 - D12 M21
  Eigen::MatrixXd t_matrix() const;
  double t_logdet() const;

  // dense matrices over levels 0 .. n+2m-2
  const Eigen::MatrixXd& D() const { return D_; }
  const Eigen::MatrixXd& M() const { return M_; }
  // (2m-1) x (2m-1) blocks with row/column index sets
  // r = 1: n-2m+1 .. n-1 and r = 2: n .. n+2m-2
  const Eigen::MatrixXd& block_D(int r, int s) const;
  const Eigen::MatrixXd& block_M(int r, int s) const;

private:
  Polynomial V_;
  int n_ = 0, m_ = 0, levels_ = 0;
  RecurrenceTable rec_;
  PanelGrid grid_;
  Eigen::MatrixXd psi_;       // grid.size() x levels
  Eigen::MatrixXd eps_psi_;   // grid.size() x (n+2m-1)
  std::vector<double> psi_integral_;
  std::vector<CumulativeFn> cumulative_;
  Eigen::MatrixXd D_, M_;     // (n+4m-2) x (n+4m-2)
  Eigen::MatrixXd D_blk_[2][2], M_blk_[2][2];
  Eigen::MatrixXd Ghat_;      // beta=1 correction matrix
  // beta=4 core: S_{n/2,4}(la,mu) = -Psi_B(la)^T S4_core Psi_n(mu), the
  // inverse of D_n folded in through the small corner inverse
  Eigen::MatrixXd S4_core_;   // (n+2m-1) x n

  void build_matrices();
  Eigen::VectorXd psi_vec(int count, double x) const;
};

RecurrenceTable recurrence(const Polynomial& V, int n, int levels);

struct StojanovicReport {
  double det_T = 0;
  double rhs = 0;               // (Q_{n,1} Q_{n/2,4} / (Q_{n,2} (n/2)! 2^n))^2
  double relative_error = 0;
  double log_q_n1 = 0, log_q_n2 = 0, log_q_half4 = 0;
  double q2_gamma_relerr = 0;   // Q_{n,2} vs Gamma_n^2/n!
  double detM_relerr = 0;       // det M_n vs (Q_{n,1} Gamma_n / (n! 2^{n/2}))^2
};

// Determinant identity at small even n (2 or 4), all partition functions
// by exact quadrature.
StojanovicReport stojanovic_identity(const Polynomial& V, int n);

}  // namespace betalab

#endif
