#include "betalab/orthopoly.hpp"

#include <cmath>

#include "betalab/errors.hpp"
#include "betalab/sampler.hpp"

namespace betalab {

namespace {

// Smallest half-width [-R,R] on which every integrand psi_j psi_k is
// resolved: weight decay must beat the polynomial growth of the highest
// level by a wide exponential margin.
double choose_halfwidth(const Polynomial& V, int n, int levels) {
  double R = 2.5;
  while (R < 60.0) {
    double decay = n * std::min(V.eval(R), V.eval(-R));
    if (decay - 2.0 * levels * std::log1p(R) >= 100.0) return R;
    R += 0.5;
  }
  throw precision_error("recurrence: weight decays too slowly for the requested levels");
}

struct LanczosResult {
  RecurrenceTable rec;
  PanelGrid grid;
  Eigen::MatrixXd psi;  // grid.size() x levels
};

LanczosResult lanczos(const Polynomial& V, int n, int levels) {
  if (levels < 2) throw domain_error("recurrence: need at least two levels");
  if (levels > n + 64)
    throw domain_error("recurrence: levels capped at n + 64");
  if (!check_growth(V).pass)
    throw domain_error("recurrence: potential must be even degree with positive leading coefficient");

  double R = choose_halfwidth(V, n, levels);
  int npanels = std::max((8 * (n + levels) + 15) / 16, int(std::ceil(2 * R)));

  for (int attempt = 0;; ++attempt) {
    PanelGrid grid(-R, R, npanels, 16);
    const int G = grid.size();
    const Eigen::VectorXd& x = grid.nodes();
    const Eigen::VectorXd& w = grid.weights();

    // log-domain start vector: psi_0 = gamma_0 e^{-nV/2}
    Eigen::VectorXd t(G);
    for (int i = 0; i < G; ++i) t[i] = -0.5 * n * V.eval(x[i]);
    double s = t.maxCoeff();
    Eigen::VectorXd h = (t.array() - s).exp();
    double norm0 = std::sqrt((w.array() * h.array().square()).sum());

    LanczosResult out;
    out.rec.n_weight = n;
    out.rec.levels = levels;
    out.rec.a.assign(levels, 0.0);
    out.rec.b.assign(levels, 0.0);
    out.rec.log_gamma.assign(levels, 0.0);
    out.rec.log_gamma[0] = -(s + std::log(norm0));
    out.psi.resize(G, levels);
    out.psi.col(0) = h / norm0;

    auto wdot = [&](const Eigen::VectorXd& u, const Eigen::VectorXd& v) {
      return (w.array() * u.array() * v.array()).sum();
    };

    for (int k = 0; k < levels; ++k) {
      Eigen::VectorXd u = x.array() * out.psi.col(k).array();
      out.rec.b[k] = wdot(u, out.psi.col(k));
      if (k + 1 == levels) break;
      u -= out.rec.b[k] * out.psi.col(k);
      if (k > 0) u -= out.rec.a[k] * out.psi.col(k - 1);
      // full reorthogonalization, two passes
      for (int pass = 0; pass < 2; ++pass) {
        Eigen::VectorXd c =
            out.psi.leftCols(k + 1).transpose() * (w.array() * u.array()).matrix();
        u -= out.psi.leftCols(k + 1) * c;
      }
      double ak = std::sqrt(wdot(u, u));
      if (!(ak > 1e-14))
        throw precision_error("recurrence: Lanczos breakdown at level " +
                              std::to_string(k + 1));
      out.rec.a[k + 1] = ak;
      out.rec.log_gamma[k + 1] = out.rec.log_gamma[k] - std::log(ak);
      out.psi.col(k + 1) = u / ak;
    }

    Eigen::MatrixXd gram =
        out.psi.transpose() * (w.asDiagonal() * out.psi);
    gram.diagonal().array() -= 1.0;
    double err = gram.cwiseAbs().maxCoeff();
    if (err < 1e-9) {
      out.grid = grid;
      return out;
    }
    if (attempt >= 2)
      throw precision_error(
          "recurrence: loss of orthogonality (" + std::to_string(err) +
          "); a finer quadrature grid did not help");
    npanels *= 2;
  }
}

}  // namespace

RecurrenceTable recurrence(const Polynomial& V, int n, int levels) {
  return lanczos(V, n, levels).rec;
}

KernelWorkspace::KernelWorkspace(const Polynomial& V, int n) : V_(V), n_(n) {
  m_ = V.degree() / 2;
  if (m_ < 1) throw domain_error("KernelWorkspace: potential degree >= 2 required");
  if (n < 2 * m_)
    throw domain_error("KernelWorkspace: n >= 2m required for the corner blocks");
  // stored matrices reach level n+4m-3 (the band of the Phi2 derivatives),
  // and the Jacobi truncation must sit another 2m levels beyond that
  levels_ = n_ + 6 * m_;
  LanczosResult lz = lanczos(V_, n_, levels_);
  rec_ = std::move(lz.rec);
  grid_ = std::move(lz.grid);
  psi_ = std::move(lz.psi);
  build_matrices();
}

void KernelWorkspace::build_matrices() {
  const int L = n_ + 4 * m_ - 2;  // stored matrix size, levels 0..n+4m-3
  const int K = levels_;
  const Eigen::VectorXd& w = grid_.weights();

  // V'(J) by Horner on the (truncated) Jacobi matrix; entries are exact
  // away from the truncation corner, which is 2m-1 levels beyond L.
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(K, K);
  for (int k = 0; k < K; ++k) {
    J(k, k) = rec_.b[k];
    if (k > 0) J(k, k - 1) = J(k - 1, k) = rec_.a[k];
  }
  Polynomial Vp = V_.derivative();
  const auto& c = Vp.coeffs();
  Eigen::MatrixXd VpJ =
      c.back() * Eigen::MatrixXd::Identity(K, K);
  for (int k = int(c.size()) - 2; k >= 0; --k) {
    VpJ = J * VpJ;
    VpJ.diagonal().array() += c[k];
  }

  double scale = VpJ.cwiseAbs().maxCoeff();
  D_.setZero(L, L);
  for (int j = 0; j < L; ++j)
    for (int k = j + 1; k < L; ++k) {
      if (k - j >= 2 * m_) {
        if (std::abs(VpJ(j, k)) > 1e-9 * scale)
          throw precision_error("differentiation matrix: band structure violated");
        continue;
      }
      D_(j, k) = -0.5 * n_ * VpJ(j, k);
      D_(k, j) = -D_(j, k);
    }

  // eps psi_j on the grid: antiderivative minus half the total integral
  eps_psi_.resize(grid_.size(), L);
  psi_integral_.resize(L);
  cumulative_.reserve(L);
  for (int j = 0; j < L; ++j) {
    psi_integral_[j] = grid_.integrate(psi_.col(j));
    eps_psi_.col(j) =
        grid_.antiderivative(psi_.col(j)).array() - 0.5 * psi_integral_[j];
    cumulative_.emplace_back(grid_, psi_.col(j));
  }

  M_ = eps_psi_.transpose() * (w.asDiagonal() * psi_.leftCols(L));
  double skew = (M_ + M_.transpose()).cwiseAbs().maxCoeff();
  if (skew > 1e-9)
    throw precision_error("integration matrix: skew-symmetry violated (" +
                          std::to_string(skew) + ")");
  M_ = 0.5 * (M_ - M_.transpose()).eval();

  const int p = 2 * m_ - 1;
  int start[2] = {n_ - 2 * m_ + 1, n_};
  for (int r = 0; r < 2; ++r)
    for (int s = 0; s < 2; ++s) {
      D_blk_[r][s] = D_.block(start[r], start[s], p, p);
      M_blk_[r][s] = M_.block(start[r], start[s], p, p);
    }

  // correction matrices only exist for even n (odd principal blocks of a
  // skew matrix are singular)
  if (n_ % 2 == 0) {
    auto checked_inverse = [p](const Eigen::MatrixXd& A, const char* what) {
      Eigen::JacobiSVD<Eigen::MatrixXd> svd(A);
      if (svd.singularValues()(p - 1) < 1e-12)
        throw precision_error(std::string(what) +
                              " is numerically singular; corner-block bound fails");
      return A.inverse().eval();
    };
    Eigen::MatrixXd I = Eigen::MatrixXd::Identity(p, p);
    Ghat_ = D_blk_[0][1] * M_blk_[1][1] *
            checked_inverse(I - D_blk_[1][0] * M_blk_[0][1], "1 - D21 M12") *
            D_blk_[1][0];
    // D_n^{-1} = M_n + M_n E1 D12 (1 - M21 D12)^{-1} M[r2, 0:n]
    // (Woodbury on D_n M_n = 1 - E1 D12 M[r2, 0:n])
    Eigen::MatrixXd C4 =
        D_blk_[0][1] *
        checked_inverse(I - M_blk_[1][0] * D_blk_[0][1], "1 - M21 D12");
    const int B = n_ + 2 * m_ - 1;  // band of Psi' over the first n levels
    Eigen::MatrixXd A =
        D_.topLeftCorner(n_, B).transpose() * M_.topLeftCorner(n_, n_);
    S4_core_ = A + A.middleCols(start[0], p) * (C4 * M_.block(start[1], 0, p, n_));
  }
}

const Eigen::MatrixXd& KernelWorkspace::block_D(int r, int s) const {
  return D_blk_[r - 1][s - 1];
}
const Eigen::MatrixXd& KernelWorkspace::block_M(int r, int s) const {
  return M_blk_[r - 1][s - 1];
}

double KernelWorkspace::gamma_log() const {
  double s = 0;
  for (int j = 0; j < n_; ++j) s += rec_.log_gamma[j];
  return s;
}

Eigen::VectorXd KernelWorkspace::psi_vec(int count, double x) const {
  Eigen::VectorXd v(count);
  v[0] = std::exp(rec_.log_gamma[0] - 0.5 * n_ * V_.eval(x));
  if (count > 1) v[1] = (x - rec_.b[0]) * v[0] / rec_.a[1];
  for (int k = 1; k + 1 < count; ++k)
    v[k + 1] = ((x - rec_.b[k]) * v[k] - rec_.a[k] * v[k - 1]) / rec_.a[k + 1];
  return v;
}

double KernelWorkspace::psi(int j, double x) const {
  if (j < 0 || j >= levels_) throw domain_error("psi: level out of range");
  return psi_vec(j + 1, x)[j];
}

double KernelWorkspace::eps_psi(int j, double x) const {
  if (j < 0 || j >= int(cumulative_.size()))
    throw domain_error("eps_psi: level out of range");
  if (x <= grid_.lo()) return -0.5 * psi_integral_[j];
  if (x >= grid_.hi()) return 0.5 * psi_integral_[j];
  return cumulative_[j](x) - 0.5 * psi_integral_[j];
}

double KernelWorkspace::psi_deriv(int j, double x) const {
  if (j < 0 || j > n_ + 2 * m_ - 2)
    throw domain_error("psi_deriv: level out of range");
  Eigen::VectorXd v = psi_vec(std::min(j + 2 * m_, int(D_.cols())), x);
  double s = 0;
  for (int k = std::max(0, j - 2 * m_ + 1); k < v.size(); ++k)
    s += D_(j, k) * v[k];
  return s;
}

double KernelWorkspace::kernel(double la, double mu) const {
  Eigen::VectorXd a = psi_vec(n_, la), b = psi_vec(n_, mu);
  return a.dot(b);
}

double KernelWorkspace::tracy_widom_S(int beta, double la, double mu) const {
  if (beta != 1 && beta != 4) throw domain_error("tracy_widom_S: beta must be 1 or 4");
  if (n_ % 2 != 0) throw domain_error("tracy_widom_S: n must be even");
  const int p = 2 * m_ - 1;
  Eigen::VectorXd v = psi_vec(n_ + p, la), u = psi_vec(n_, mu);
  double K = v.head(n_).dot(u);
  Eigen::VectorXd phi1 = v.segment(n_ - 2 * m_ + 1, p);
  if (beta == 1) {
    Eigen::VectorXd eps1(p), eps2(p);
    for (int i = 0; i < p; ++i) {
      eps1[i] = eps_psi(n_ - 2 * m_ + 1 + i, mu);
      eps2[i] = eps_psi(n_ + i, mu);
    }
    return K - phi1.dot(D_blk_[0][1] * eps2) - phi1.dot(Ghat_ * eps1);
  }
  return -v.dot(S4_core_ * u);
}

double KernelWorkspace::tracy_widom_S_direct(int beta, double la, double mu) const {
  if (beta != 1 && beta != 4) throw domain_error("tracy_widom_S_direct: beta must be 1 or 4");
  if (n_ % 2 != 0) throw domain_error("tracy_widom_S_direct: n must be even");
  if (beta == 1) {
    Eigen::VectorXd v = psi_vec(n_, la), e(n_);
    for (int k = 0; k < n_; ++k) e[k] = eps_psi(k, mu);
    Eigen::VectorXd y = M_.topLeftCorner(n_, n_).partialPivLu().solve(e);
    return v.dot(y);
  }
  Eigen::VectorXd v = psi_vec(n_ + 2 * m_ - 1, la);
  Eigen::VectorXd dpsi = D_.topRows(n_).leftCols(v.size()) * v;
  Eigen::VectorXd u = psi_vec(n_, mu);
  Eigen::VectorXd y = D_.topLeftCorner(n_, n_).partialPivLu().solve(u);
  return -dpsi.dot(y);
}

double KernelWorkspace::eps_S(int beta, double la, double mu) const {
  if (beta != 1 && beta != 4) throw domain_error("eps_S: beta must be 1 or 4");
  if (n_ % 2 != 0) throw domain_error("eps_S: n must be even");
  const int p = 2 * m_ - 1;
  Eigen::VectorXd u = psi_vec(n_, mu);
  // S(x_i, mu) over the whole grid from the stored wavefunction values
  Eigen::VectorXd svals = psi_.leftCols(n_) * u;
  if (beta == 1) {
    Eigen::VectorXd eps1(p), eps2(p);
    for (int i = 0; i < p; ++i) {
      eps1[i] = eps_psi(n_ - 2 * m_ + 1 + i, mu);
      eps2[i] = eps_psi(n_ + i, mu);
    }
    svals -= psi_.middleCols(n_ - 2 * m_ + 1, p) *
             (D_blk_[0][1] * eps2 + Ghat_ * eps1);
  } else {
    svals = -psi_.leftCols(n_ + p) * (S4_core_ * u);
  }
  CumulativeFn F(grid_, svals);
  double total = F.total();
  double at;
  if (la <= grid_.lo()) at = 0.0;
  else if (la >= grid_.hi()) at = total;
  else at = F(la);
  return at - 0.5 * total;
}

Eigen::MatrixXd KernelWorkspace::t_matrix() const {
  const int p = 2 * m_ - 1;
  Eigen::MatrixXd prod = D_.topLeftCorner(n_, n_) * M_.topLeftCorner(n_, n_);
  Eigen::MatrixXd corner = prod.block(n_ - 2 * m_ + 1, n_ - 2 * m_ + 1, p, p);
  Eigen::MatrixXd widom =
      Eigen::MatrixXd::Identity(p, p) - D_blk_[0][1] * M_blk_[1][0];
  if ((corner - widom).cwiseAbs().maxCoeff() > 1e-8)
    throw precision_error("t_matrix: corner block and 1 - D12 M21 disagree");
  return corner;
}

double KernelWorkspace::t_logdet() const {
  Eigen::MatrixXd T = t_matrix();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(T);
  if (svd.singularValues()(T.rows() - 1) < 1e-12)
    throw precision_error("t_matrix: T_n numerically singular");
  return std::log(std::abs(T.fullPivLu().determinant()));
}

StojanovicReport stojanovic_identity(const Polynomial& V, int n) {
  if (n != 2 && n != 4)
    throw domain_error("stojanovic_identity: n must be 2 or 4");
  KernelWorkspace ws(V, n);
  StojanovicReport rep;
  rep.det_T = ws.t_matrix().fullPivLu().determinant();

  auto logq = [&](int nn, double beta) {
    EnsembleConfig cfg;
    cfg.n = nn;
    cfg.beta = beta;
    cfg.V = V;
    return exact_partition(cfg);
  };
  rep.log_q_n1 = logq(n, 1.0);
  rep.log_q_n2 = logq(n, 2.0);
  rep.log_q_half4 = logq(n / 2, 4.0);

  rep.rhs = std::exp(2.0 * (rep.log_q_n1 + rep.log_q_half4 - rep.log_q_n2 -
                            std::lgamma(n / 2 + 1.0) - n * std::log(2.0)));
  rep.relative_error = std::abs(rep.det_T - rep.rhs) / std::abs(rep.rhs);

  double glog = ws.gamma_log();
  // Q_{n,2} = n! / Gamma_n^2 (n! times the product of the squared monic norms)
  rep.q2_gamma_relerr =
      std::abs(std::exp(std::lgamma(n + 1.0) - 2.0 * glog - rep.log_q_n2) - 1.0);
  double detM = ws.M().topLeftCorner(n, n).fullPivLu().determinant();
  double detM_target = std::exp(
      2.0 * (rep.log_q_n1 + glog - std::lgamma(n + 1.0) - 0.5 * n * std::log(2.0)));
  rep.detM_relerr = std::abs(detM / detM_target - 1.0);
  return rep;
}

}  // namespace betalab
