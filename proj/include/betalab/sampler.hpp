#ifndef BETALAB_SAMPLER_HPP
#define BETALAB_SAMPLER_HPP

#include <complex>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "betalab/potential.hpp"

namespace betalab {

struct EnsembleConfig {
  int n = 16;
  double beta = 2.0;
  Polynomial V = Polynomial::gaussian();
  double epsilon = 0.5;               // sigma_eps half-width beyond [-2,2]
  std::optional<Polynomial> h;        // 1/n perturbation of the potential
};

struct BatchParams {
  int chains = 8;
  long steps = 20000;                 // sweeps per chain (after burn-in)
  long burnin = -1;                   // default: steps/5
  std::uint64_t seed = 1;
  int thin = 1;
  int threads = 1;
};

// Observable: configuration -> vector of scalars, accumulated per batch.
using Observable = std::function<void(const std::vector<double>&, std::vector<double>&)>;

struct Estimate {
  double mean = 0;
  double stderr_mean = 0;  // batch-means standard error
};

struct SampleBatch {
  EnsembleConfig cfg;
  BatchParams params;
  double acceptance_rate = 0;
  long samples = 0;                       // retained configurations
  std::vector<Estimate> estimates;        // one per observable component
  // raw batch means, [component][batch] over all chains (32 per chain),
  // for derived nonlinear statistics
  std::vector<std::vector<double>> batch_means;
  std::vector<std::vector<double>> retained;  // thinned configs when requested
};

// Single-site random-walk Metropolis for the truncated density (p(la)),
// step size auto-tuned during burn-in. Deterministic for fixed seed.
SampleBatch run_chains(const EnsembleConfig& cfg, const BatchParams& params,
                       const std::vector<Observable>& observables,
                       int obs_width, bool retain_samples = false);

struct LinStatEstimate {
  double mean = 0;
  double variance = 0;      // Var N_n[f]
  double stderr_mean = 0;
  Polynomial f;
};

// Convenience front-end accumulating sum f(lambda_i) and its square.
LinStatEstimate linear_statistic(const EnsembleConfig& cfg,
                                 const BatchParams& params, const Polynomial& f);

// log Q_{n,beta} by ordered-simplex tensor Gauss-Legendre quadrature
// (n <= 4), integration box auto-extended until the weight tail is
// negligible.
double exact_partition(const EnsembleConfig& cfg);

struct StieltjesEstimate {
  std::complex<double> g_n;      // (1/n) E sum 1/(z - lambda_i)
  double stderr_re = 0, stderr_im = 0;
  std::complex<double> u_n;      // n (g_n - g), filled by callers knowing g
};

struct LoopDiagnostics {
  std::vector<std::complex<double>> z;
  std::vector<StieltjesEstimate> stieltjes;
  std::vector<double> residual;      // |(eq_3) residual|
  std::vector<double> residual_err;  // batch-means error bar
};

// Empirical Stieltjes transform and the loop-equation (eq_3) residual on a
// z-grid. Requires dist(z, sigma_eps) >= dmin.
LoopDiagnostics loop_diagnostics(const EnsembleConfig& cfg,
                                 const BatchParams& params,
                                 const std::vector<std::complex<double>>& zgrid,
                                 double dmin = 0.2);

// Var(sum f(lambda_i)) = intint k_n f f  (bilinear form of the connected
// two-point kernel).
double connected_kernel_form(const EnsembleConfig& cfg, const BatchParams& params,
                             const Polynomial& f);

}  // namespace betalab

#endif
