#include "betalab/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <thread>

#include "betalab/errors.hpp"
#include "betalab/quad.hpp"

namespace betalab {

namespace {

constexpr int kBatchesPerChain = 32;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

struct ChainResult {
  std::vector<std::vector<double>> batch_sums;  // [component][batch]
  std::vector<std::vector<long>> batch_counts;  // [component unused][batch] -> use [batch]
  std::vector<long> counts;                     // per batch
  long accepted = 0, proposed = 0;
  std::vector<std::vector<double>> retained;
};

void run_one_chain(const EnsembleConfig& cfg, const BatchParams& params,
                   const std::vector<Observable>& observables, int obs_width,
                   bool retain, int chain_index, ChainResult& out) {
  const int n = cfg.n;
  const double lo = -2.0 - cfg.epsilon, hi = 2.0 + cfg.epsilon;
  std::mt19937_64 rng(splitmix64(params.seed ^ (0x6b7a5ce1d3f4a2b9ULL * (chain_index + 1))));
  std::uniform_real_distribution<double> unif(0.0, 1.0);

  Polynomial Vh = cfg.V;
  if (cfg.h) Vh = cfg.V + (*cfg.h) * (1.0 / n);

  std::vector<double> lam(n);
  for (int i = 0; i < n; ++i)
    lam[i] = -1.8 + 3.6 * (i + 0.5) / n;
  std::vector<double> Vval(n);
  for (int i = 0; i < n; ++i) Vval[i] = Vh.eval(lam[i]);

  const double halfnb = 0.5 * n * cfg.beta;
  double step = 1.0 / std::sqrt(double(n));

  auto sweep = [&](long* acc, long* prop) {
    for (int i = 0; i < n; ++i) {
      double x = lam[i] + step * (2.0 * unif(rng) - 1.0);
      ++*prop;
      if (x < lo || x > hi) continue;
      double vnew = Vh.eval(x);
      double dlog = -halfnb * (vnew - Vval[i]);
      bool coincide = false;
      for (int j = 0; j < n && !coincide; ++j) {
        if (j == i) continue;
        double dn = std::abs(x - lam[j]), dd = std::abs(lam[i] - lam[j]);
        if (dn == 0.0) { coincide = true; break; }
        dlog += cfg.beta * (std::log(dn) - std::log(dd));
      }
      if (coincide) continue;
      if (dlog >= 0.0 || std::log(unif(rng)) < dlog) {
        lam[i] = x;
        Vval[i] = vnew;
        ++*acc;
      }
    }
  };

  // Burn-in with step tuning towards acceptance in [0.3, 0.5].
  long burnin = params.burnin >= 0 ? params.burnin : params.steps / 5;
  long tune_acc = 0, tune_prop = 0;
  for (long s = 0; s < burnin; ++s) {
    sweep(&tune_acc, &tune_prop);
    if ((s + 1) % 200 == 0 || s + 1 == burnin) {
      double rate = tune_prop ? double(tune_acc) / tune_prop : 0.0;
      if (rate > 0.5) step *= 1.25;
      else if (rate < 0.3) step /= 1.25;
      tune_acc = tune_prop = 0;
    }
  }

  long total_accums = std::max<long>(1, params.steps / params.thin);
  out.batch_sums.assign(obs_width, std::vector<double>(kBatchesPerChain, 0.0));
  out.counts.assign(kBatchesPerChain, 0);
  std::vector<double> obs_out;
  long accum = 0;
  for (long s = 0; s < params.steps; ++s) {
    sweep(&out.accepted, &out.proposed);
    if ((s + 1) % params.thin == 0 && accum < total_accums) {
      int batch = std::min<long>(kBatchesPerChain - 1,
                                 accum * kBatchesPerChain / total_accums);
      obs_out.clear();
      for (const auto& ob : observables) ob(lam, obs_out);
      for (int c = 0; c < obs_width; ++c) out.batch_sums[c][batch] += obs_out[c];
      ++out.counts[batch];
      ++accum;
      if (retain && accum % std::max<long>(1, total_accums / 64) == 0)
        out.retained.push_back(lam);
    }
  }
}

}  // namespace

SampleBatch run_chains(const EnsembleConfig& cfg, const BatchParams& params,
                       const std::vector<Observable>& observables, int obs_width,
                       bool retain_samples) {
  if (cfg.n < 1 || cfg.beta <= 0 || cfg.epsilon <= 0)
    throw domain_error("run_chains: invalid ensemble configuration");
  SampleBatch batch;
  batch.cfg = cfg;
  batch.params = params;

  std::vector<ChainResult> results(params.chains);
  int nthreads = std::max(1, params.threads);
  if (nthreads <= 1) {
    for (int c = 0; c < params.chains; ++c)
      run_one_chain(cfg, params, observables, obs_width, retain_samples, c, results[c]);
  } else {
    // Chains are independent; merge order below is fixed regardless of
    // thread count.
    std::vector<std::thread> pool;
    for (int t = 0; t < nthreads; ++t) {
      pool.emplace_back([&, t]() {
        for (int c = t; c < params.chains; c += nthreads)
          run_one_chain(cfg, params, observables, obs_width, retain_samples, c, results[c]);
      });
    }
    for (auto& th : pool) th.join();
  }

  long acc = 0, prop = 0;
  for (const auto& r : results) {
    acc += r.accepted;
    prop += r.proposed;
    for (const auto& v : r.retained) batch.retained.push_back(v);
  }
  batch.acceptance_rate = prop ? double(acc) / prop : 0.0;
  if (batch.acceptance_rate < 0.05 || batch.acceptance_rate > 0.95)
    throw precision_error("run_chains: acceptance rate " +
                          std::to_string(batch.acceptance_rate) +
                          " outside [0.05, 0.95] after tuning");

  // Merge per-chain batch means in fixed chain order.
  batch.batch_means.assign(obs_width, {});
  batch.estimates.assign(obs_width, {});
  for (int c = 0; c < obs_width; ++c) {
    for (const auto& r : results)
      for (int b = 0; b < kBatchesPerChain; ++b)
        if (r.counts[b] > 0) {
          batch.batch_means[c].push_back(r.batch_sums[c][b] / r.counts[b]);
          if (c == 0) batch.samples += r.counts[b];
        }
    const auto& bm = batch.batch_means[c];
    double m = 0;
    for (double x : bm) m += x;
    m /= bm.size();
    double v = 0;
    for (double x : bm) v += (x - m) * (x - m);
    v = bm.size() > 1 ? v / (bm.size() - 1) : 0.0;
    batch.estimates[c] = {m, std::sqrt(v / bm.size())};
  }
  return batch;
}

LinStatEstimate linear_statistic(const EnsembleConfig& cfg,
                                 const BatchParams& params, const Polynomial& f) {
  std::vector<Observable> obs{[&f](const std::vector<double>& lam,
                                   std::vector<double>& out) {
    double s = 0;
    for (double x : lam) s += f.eval(x);
    out.push_back(s);
    out.push_back(s * s);
  }};
  SampleBatch b = run_chains(cfg, params, obs, 2);
  LinStatEstimate est;
  est.f = f;
  est.mean = b.estimates[0].mean;
  est.stderr_mean = b.estimates[0].stderr_mean;
  est.variance = b.estimates[1].mean - est.mean * est.mean;
  return est;
}

double connected_kernel_form(const EnsembleConfig& cfg, const BatchParams& params,
                             const Polynomial& f) {
  return linear_statistic(cfg, params, f).variance;
}

double exact_partition(const EnsembleConfig& cfg) {
  const int n = cfg.n;
  if (n < 1 || n > 4)
    throw domain_error("exact_partition: supported only for 1 <= n <= 4");
  const double beta = cfg.beta;
  // Integration box [-L,L]: extend until the weight tail is negligible
  // (the Q integrals run over the whole line).
  double L = std::max(2.0 + cfg.epsilon, 2.5);
  auto tail_exponent = [&](double x) {
    return 0.5 * n * beta * cfg.V.eval(x) - beta * (n - 1) * std::log(2 * x) -
           std::log(2 * x);
  };
  while (L < 50.0 && std::min(tail_exponent(L), tail_exponent(-L)) < 40.0)
    L += 0.5;

  auto log_q = [&](int order) {
    GaussLegendre gl(order);
    std::vector<double> lam(n);
    double total = 0;
    // ordered simplex lam[0] < lam[1] < ... < lam[n-1], times n!
    std::function<double(int, double)> rec = [&](int d, double lower) -> double {
      double a = (d == 0) ? -L : lower, b = L;
      if (a >= b) return 0.0;
      double mid = (a + b) / 2, h2 = (b - a) / 2, s = 0;
      for (int i = 0; i < order; ++i) {
        double x = mid + h2 * gl.nodes[i];
        lam[d] = x;
        double val;
        if (d + 1 == n) {
          double expo = 0;
          for (int k = 0; k < n; ++k) expo -= 0.5 * n * beta * cfg.V.eval(lam[k]);
          for (int k = 0; k < n; ++k)
            for (int l = k + 1; l < n; ++l)
              expo += beta * std::log(lam[l] - lam[k]);
          val = std::exp(expo);
        } else {
          val = rec(d + 1, x);
        }
        s += h2 * gl.weights[i] * val;
      }
      return s;
    };
    double simplex = rec(0, 0.0);
    return std::log(simplex) + std::lgamma(n + 1.0);
  };

  double tol = (n <= 2) ? 1e-10 : (n == 3 ? 1e-9 : 1e-6);
  double prev = log_q(24);
  for (int order : {32, 48, 64, 96}) {
    double cur = log_q(order);
    if (std::abs(cur - prev) < tol) return cur;
    prev = cur;
  }
  if (n >= 4) return prev;  // best effort at the largest feasible order
  throw precision_error("exact_partition: quadrature did not converge");
}

LoopDiagnostics loop_diagnostics(const EnsembleConfig& cfg,
                                 const BatchParams& params,
                                 const std::vector<std::complex<double>>& zgrid,
                                 double dmin) {
  using C = std::complex<double>;
  for (const C& z : zgrid) {
    double x = std::clamp(z.real(), -2.0 - cfg.epsilon, 2.0 + cfg.epsilon);
    if (std::abs(z - C(x, 0.0)) < dmin)
      throw domain_error("loop_diagnostics: z too close to sigma_eps");
  }
  Polynomial Vp = cfg.V.derivative();
  Polynomial hp = cfg.h ? cfg.h->derivative() : Polynomial();
  const int per_z = 8;  // Re/Im of S1, S1^2, S2, sum V(z,l) [, + h-term folded in]
  std::vector<Observable> obs{[&](const std::vector<double>& lam,
                                  std::vector<double>& out) {
    for (const C& z : zgrid) {
      C s1(0, 0), s2(0, 0), sv(0, 0);
      for (double l : lam) {
        C d = z - l;
        s1 += 1.0 / d;
        s2 += 1.0 / (d * d);
        sv += (Vp.eval(z) - Vp.eval(C(l, 0))) / d;
      }
      C s1sq = s1 * s1;
      out.insert(out.end(), {s1.real(), s1.imag(), s1sq.real(), s1sq.imag(),
                             s2.real(), s2.imag(), sv.real(), sv.imag()});
    }
  }};
  SampleBatch b = run_chains(cfg, params, obs, per_z * int(zgrid.size()));

  LoopDiagnostics out;
  out.z = zgrid;
  const double n = cfg.n;
  auto residual_from = [&](const std::vector<double>& m, size_t base, const C& z) {
    C s1(m[base + 0], m[base + 1]);
    C s1sq(m[base + 2], m[base + 3]);
    C s2(m[base + 4], m[base + 5]);
    C sv(m[base + 6], m[base + 7]);
    C gn = s1 / n;
    C delta = s1sq - s1 * s1;  // Var S1
    C lhs = gn * gn - Vp.eval(z) * gn + sv / n;
    C rhs = -(2.0 / cfg.beta - 1.0) * s2 / (n * n) - delta / (n * n);
    return lhs - rhs;
  };

  std::vector<double> means;
  for (const auto& e : b.estimates) means.push_back(e.mean);
  size_t nb = b.batch_means[0].size();
  for (size_t zi = 0; zi < zgrid.size(); ++zi) {
    size_t base = per_z * zi;
    StieltjesEstimate se;
    se.g_n = C(means[base], means[base + 1]) / n;
    se.stderr_re = b.estimates[base].stderr_mean / n;
    se.stderr_im = b.estimates[base + 1].stderr_mean / n;
    out.stieltjes.push_back(se);
    C r = residual_from(means, base, zgrid[zi]);
    out.residual.push_back(std::abs(r));
    // error bar: spread of the residual recomputed per batch
    double acc = 0;
    std::vector<double> bm(per_z * zgrid.size());
    for (size_t bidx = 0; bidx < nb; ++bidx) {
      for (size_t c = 0; c < bm.size(); ++c) bm[c] = b.batch_means[c][bidx];
      C rb = residual_from(bm, base, zgrid[zi]);
      acc += std::norm(rb - r);
    }
    out.residual_err.push_back(std::sqrt(acc / nb / nb));
  }
  return out;
}

}  // namespace betalab
