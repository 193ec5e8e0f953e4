#include "betalab/commands.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "betalab/correction.hpp"
#include "betalab/equilibrium.hpp"
#include "betalab/errors.hpp"
#include "betalab/orthopoly.hpp"
#include "betalab/sampler.hpp"
#include "betalab/universality.hpp"
#include "json.hpp"

namespace betalab {

namespace {

using nlohmann::json;

Polynomial parse_poly(const json& j, const char* what) {
  if (!j.is_array() || j.empty())
    throw domain_error(std::string(what) + ": expected a non-empty coefficient array");
  std::vector<double> c;
  for (const auto& v : j) {
    if (!v.is_number())
      throw domain_error(std::string(what) + ": coefficients must be numbers");
    c.push_back(v.get<double>());
  }
  return Polynomial(c);
}

// fills defaults so the emitted config alone reproduces the run
struct Resolved {
  json cfg;
  Polynomial V{std::vector<double>{0, 0, 0.5}};
  Polynomial f{std::vector<double>{0, 0, 1}};

  double num(const char* key, double dflt) {
    if (!cfg.contains(key)) cfg[key] = dflt;
    if (!cfg[key].is_number()) throw domain_error(std::string(key) + ": expected a number");
    return cfg[key].get<double>();
  }
  long integer(const char* key, long dflt) {
    if (!cfg.contains(key)) cfg[key] = dflt;
    if (!cfg[key].is_number_integer())
      throw domain_error(std::string(key) + ": expected an integer");
    return cfg[key].get<long>();
  }
};

Resolved resolve(const json& in) {
  Resolved r;
  r.cfg = in;
  if (!r.cfg.contains("potential")) r.cfg["potential"] = {0.0, 0.0, 0.5};
  r.V = parse_poly(r.cfg["potential"], "potential");
  if (r.cfg.contains("f")) r.f = parse_poly(r.cfg["f"], "f");
  else r.cfg["f"] = {0.0, 0.0, 1.0};
  return r;
}

std::string csv_row(std::initializer_list<double> vals) {
  std::ostringstream os;
  os.precision(15);
  bool first = true;
  for (double v : vals) {
    if (!first) os << ',';
    os << v;
    first = false;
  }
  os << '\n';
  return os.str();
}

json equilibrium_summary(const EquilibriumMeasure& eq) {
  json out;
  out["support"] = {eq.a, eq.b};
  out["d_max"] = eq.d_max;
  out["normalization"] = eq.normalization;
  out["P"] = eq.P.coeffs();
  out["map"] = {{"shift", eq.map.shift}, {"scale", eq.map.scale}};
  return out;
}

// chooses a contour distance respecting d < d_max/2
double default_d(const EquilibriumMeasure& eq) {
  return std::min(0.5, 0.4 * eq.d_max);
}

json cmd_equilibrium(Resolved& r) {
  EquilibriumMeasure eq = solve_equilibrium(r.V);
  ValidationReport rep = validate(eq);
  json out;
  out["equilibrium"] = equilibrium_summary(eq);
  out["validation"] = {{"pass", rep.pass},
                       {"min_P", rep.min_P},
                       {"max_residual", rep.max_residual},
                       {"violations", rep.violations}};
  if (!rep.pass) {
    std::string msg = "equilibrium validation failed:";
    for (const auto& v : rep.violations) msg += " " + v;
    throw domain_error(msg);
  }
  out["energy"] = energy(eq);
  std::string csv = "lambda,rho\n";
  int pts = int(r.integer("density_points", 201));
  for (int i = 0; i < pts; ++i) {
    double la = -2.0 + 4.0 * i / (pts - 1);
    csv += csv_row({la, eq.density(la)});
  }
  out["csv"]["density"] = csv;
  return out;
}

json cmd_correction(Resolved& r) {
  double beta = r.num("beta", 2.0);
  EquilibriumMeasure eq = solve_equilibrium(r.V);
  double d = r.num("d", default_d(eq));
  CorrectionReport rep = first_order_correction(eq, r.f, beta, d);
  json out;
  out["equilibrium"] = equilibrium_summary(eq);
  out["integral_value"] = rep.integral_value;
  out["prefactor"] = rep.prefactor;
  out["predicted_shift"] = rep.predicted_shift;
  out["npoints"] = rep.npoints;
  return out;
}

json cmd_logq(Resolved& r) {
  double beta = r.num("beta", 2.0);
  int n = int(r.integer("n", 16));
  EquilibriumMeasure eq = solve_equilibrium(r.V);
  double d = r.num("d", default_d(eq));
  LogQExpansion ex = logq_expansion(eq, n, beta, d);
  json out;
  out["log_q0"] = ex.log_q0;
  out["energy_term"] = ex.energy_term;
  out["gaussian_term"] = ex.gaussian_term;
  out["correction_term"] = ex.correction_term;
  out["total"] = ex.total;
  return out;
}

json cmd_sample(Resolved& r) {
  EnsembleConfig cfg;
  cfg.n = int(r.integer("n", 16));
  cfg.beta = r.num("beta", 2.0);
  cfg.V = r.V;
  cfg.epsilon = r.num("epsilon", 2.0);
  if (r.cfg.contains("h")) cfg.h = parse_poly(r.cfg["h"], "h");
  BatchParams p;
  p.chains = int(r.integer("chains", 8));
  p.steps = r.integer("steps", 20000);
  p.burnin = r.integer("burnin", -1);
  p.seed = std::uint64_t(r.integer("seed", 1));
  p.threads = int(r.integer("threads", 1));
  LinStatEstimate est = linear_statistic(cfg, p, r.f);
  json out;
  out["mean"] = est.mean;
  out["variance"] = est.variance;
  out["stderr"] = est.stderr_mean;
  return out;
}

json cmd_kernel(Resolved& r) {
  int beta = int(r.integer("beta", 2));
  if (beta != 1 && beta != 2 && beta != 4)
    throw domain_error("kernel: beta must be 1, 2 or 4");
  int n = int(r.integer("n", 16));
  KernelWorkspace ws(r.V, n);
  std::vector<std::pair<double, double>> pts;
  if (r.cfg.contains("points")) {
    for (const auto& pr : r.cfg["points"]) {
      if (!pr.is_array() || pr.size() != 2)
        throw domain_error("kernel: points must be [lambda, mu] pairs");
      pts.emplace_back(pr[0].get<double>(), pr[1].get<double>());
    }
  } else {
    int g = int(r.integer("grid_size", 15));
    for (int i = 0; i < g; ++i)
      for (int j = 0; j < g; ++j)
        pts.emplace_back(-1.5 + 3.0 * i / (g - 1), -1.5 + 3.0 * j / (g - 1));
  }
  std::string csv = "lambda,mu,value\n";
  for (auto [la, mu] : pts) {
    double v = (beta == 2) ? ws.kernel(la, mu) : ws.tracy_widom_S(beta, la, mu);
    csv += csv_row({la, mu, v});
  }
  json out;
  out["rows"] = pts.size();
  out["log_det_T"] = ws.t_logdet();
  out["csv"]["kernel"] = csv;
  return out;
}

json cmd_universality(Resolved& r) {
  int beta = int(r.integer("beta", 2));
  double lambda0 = r.num("lambda0", 0.0);
  int g = int(r.integer("grid_size", 7));
  json out;
  if (r.cfg.contains("ns")) {
    std::vector<int> ns;
    for (const auto& v : r.cfg["ns"]) ns.push_back(v.get<int>());
    DeviationTable t = bulk_deviation(r.V, beta, lambda0, ns, g);
    std::string csv = "n,deviation\n";
    for (const auto& row : t.rows) csv += csv_row({double(row.n), row.deviation});
    out["fitted_exponent"] = t.fitted_exponent;
    out["monotone_ok"] = t.monotone_ok;
    out["csv"]["deviation"] = csv;
    return out;
  }
  int n = int(r.integer("n", 32));
  KernelWorkspace ws(r.V, n);
  RescaledSample s = rescaled_matrix_kernel(ws, beta, lambda0, unit_grid(g));
  std::string csv =
      "xi,eta,s11,s12,s21,s22,lim11,lim12,lim21,lim22,deviation\n";
  for (size_t i = 0; i < s.values.size(); ++i) {
    const auto& v = s.values[i];
    const auto& l = s.limit[i];
    double dev = std::max({std::abs(v.s11 - l.s11), std::abs(v.s12 - l.s12),
                           std::abs(v.s21 - l.s21), std::abs(v.s22 - l.s22)});
    csv += csv_row({v.xi, v.eta, v.s11, v.s12, v.s21, v.s22, l.s11, l.s12,
                    l.s21, l.s22, dev});
  }
  out["q_n"] = s.q_n;
  out["max_deviation"] = s.max_deviation;
  out["eps_route_gap"] = s.eps_route_gap;
  out["csv"]["rescaled_kernel"] = csv;
  return out;
}

// the structural-invariant suite behind `betalab check`
json cmd_check(Resolved& r) {
  if (r.cfg.value("target", "") == std::string("stojanovic")) {
    int n = int(r.integer("n", 2));
    StojanovicReport rep = stojanovic_identity(r.V, n);
    json out;
    out["relative_error"] = rep.relative_error;
    out["det_T"] = rep.det_T;
    out["rhs"] = rep.rhs;
    return out;
  }
  int n = int(r.integer("n", 12));
  KernelWorkspace ws(r.V, n);
  json checks = json::array();
  bool all_ok = true;
  auto record = [&](const char* name, double value, double tol) {
    bool ok = value <= tol;
    checks.push_back({{"name", name}, {"value", value}, {"tolerance", tol}, {"pass", ok}});
    all_ok = all_ok && ok;
  };

  const auto& grid = ws.grid();
  const auto& psi = ws.psi_grid();
  int L = ws.n() + 2 * ws.m() - 1;
  Eigen::MatrixXd gram = psi.leftCols(L).transpose() *
                         (grid.weights().asDiagonal() * psi.leftCols(L));
  gram.diagonal().array() -= 1.0;
  record("gram_identity", gram.cwiseAbs().maxCoeff(), 1e-9);

  record("D_skew", (ws.D() + ws.D().transpose()).cwiseAbs().maxCoeff(), 1e-10);
  record("M_skew", (ws.M() + ws.M().transpose()).cwiseAbs().maxCoeff(), 1e-10);

  double band = 0;
  for (int j = 0; j < ws.D().rows(); ++j)
    for (int k = 0; k < ws.D().cols(); ++k)
      if (std::abs(j - k) >= 2 * ws.m()) band = std::max(band, std::abs(ws.D()(j, k)));
  record("D_band", band, 0.0);

  Eigen::MatrixXd prod = ws.D() * ws.M();
  double dm = 0;
  for (int j = 0; j < ws.n(); ++j)
    for (int l = 0; l < prod.cols(); ++l)
      dm = std::max(dm, std::abs(prod(j, l) - (j == l ? 1.0 : 0.0)));
  record("DM_identity", dm, 1e-7);

  double reproduce = 0;
  for (double la : {-0.6, 0.4}) {
    for (double mu : {-0.1, 0.8}) {
      double s = 0;
      for (int i = 0; i < grid.size(); ++i)
        s += grid.weights()[i] * ws.kernel(la, grid.nodes()[i]) *
             ws.kernel(grid.nodes()[i], mu);
      reproduce = std::max(reproduce, std::abs(s - ws.kernel(la, mu)));
    }
  }
  record("kernel_reproducing", reproduce, 1e-8);

  json out;
  out["checks"] = checks;
  out["pass"] = all_ok;
  if (!all_ok) throw precision_error("structural invariant check failed");
  return out;
}

}  // namespace

std::string run_command(const std::string& config_json) {
  json in;
  try {
    in = json::parse(config_json);
  } catch (const json::exception& e) {
    throw domain_error(std::string("config parse error: ") + e.what());
  }
  if (!in.is_object() || !in.contains("command") || !in["command"].is_string())
    throw domain_error("config must be an object with a \"command\" string");
  std::string cmd = in["command"].get<std::string>();

  Resolved r = resolve(in);
  json out;
  if (cmd == "equilibrium") out = cmd_equilibrium(r);
  else if (cmd == "correction") out = cmd_correction(r);
  else if (cmd == "logq") out = cmd_logq(r);
  else if (cmd == "sample") out = cmd_sample(r);
  else if (cmd == "kernel") out = cmd_kernel(r);
  else if (cmd == "universality") out = cmd_universality(r);
  else if (cmd == "check") out = cmd_check(r);
  else throw domain_error("unknown command: " + cmd);

  out["config"] = r.cfg;
  return out.dump(2);
}

}  // namespace betalab
