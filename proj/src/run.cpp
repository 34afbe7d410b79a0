#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include "kvwave/config.hpp"
#include "kvwave/error.hpp"
#include "kvwave/evolution.hpp"
#include "kvwave/quasimode.hpp"
#include "kvwave/resolvent.hpp"

namespace kvwave {

namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::string& meta, const std::string& header) : out_(path) {
    if (!out_) throw Error(ErrorCode::IoError, "cannot open " + path);
    out_ << "# " << meta << '\n' << header << '\n';
  }

  template <class... T>
  void row(const T&... cells) {
    std::string line;
    ((line += cell(cells), line += ','), ...);
    line.pop_back();
    out_ << line << '\n';
  }

 private:
  static std::string cell(double v) { return num(v); }
  static std::string cell(int v) { return std::to_string(v); }
  static std::string cell(std::size_t v) { return std::to_string(v); }
  static std::string cell(const std::string& v) { return v; }
  static std::string cell(const char* v) { return v; }

  std::ofstream out_;
};

std::string metadata(const RunConfig& r) {
  std::ostringstream os;
  os << "kvwavelab " << artifact_version << " command=" << to_string(r.command) << " c=" << num(r.params.c)
     << " d=" << num(r.params.d) << " support=[" << num(r.params.damping_support.lo) << ","
     << num(r.params.damping_support.hi) << "]";
  if (r.command != Command::audit && r.command != Command::quasimode)
    os << " N=" << r.N << " h=" << num(2.0 / static_cast<double>(r.N));
  if (r.command == Command::quasimode) os << " mesh=" << r.mesh_factor << "*n";
  os << " seed=" << r.seed;
  return os.str();
}

int run_simulate(const RunConfig& r, std::ostream& log) {
  Mesh mesh(r.N);
  GramMatrices g = assemble(mesh, r.params);
  StateBlock x0 = r.init == "random" ? random_smooth_state(mesh, r.seed) : sine_state(mesh, 1);
  if (r.smooth) x0 = smooth_initial_data(x0, g, r.params);
  const double dt = r.dt > 0.0 ? r.dt : mesh.h / 4.0;
  EnergyTrace trace = simulate(x0, r.T, dt, g, r.params);

  CsvWriter csv(r.output, metadata(r) + " T=" + num(r.T) + " dt=" + num(dt), "t,E,D");
  for (const auto& s : trace.samples) csv.row(s.t, s.E, s.D);

  const double e0 = trace.samples.front().E, e1 = trace.samples.back().E;
  log << "E(0) = " << num(e0) << ", E(T) = " << num(e1) << ", balance defect = " << num(trace.balance_defect)
      << '\n';
  if (e1 > 0.0) {
    try {
      DecayFit fit = fit_decay(trace, r.T / 10.0, r.T);
      log << "log-log slope on [" << num(fit.t_min) << ", " << num(fit.t_max) << "] = " << num(fit.slope) << '\n';
    } catch (const Error&) {
    }
  }
  return 0;
}

int run_scan(const RunConfig& r, std::ostream& log) {
  Mesh mesh(r.N);
  GramMatrices g = assemble(mesh, r.params);
  GridSpec spec{r.beta_min, r.beta_max, r.beta_points, r.beta_log, {}};
  if (r.insert_quasimodes) {
    for (int n = 1; r.n_max == 0 || n <= r.n_max; ++n) {
      if (omega_n(n, r.params.c) > r.beta_max * 1.05) break;
      spec.insert.push_back(discrete_omega_n(n, r.params.c, r.N));
    }
  }
  std::vector<double> grid = build_grid(spec);
  auto samples = scan(grid, g, r.params, {r.tol, r.max_iter, false});

  CsvWriter csv(r.output, metadata(r) + " grid=" + (r.beta_log ? "log" : "linear") + " points=" + num(r.beta_points) +
                              " insert_quasimodes=" + (r.insert_quasimodes ? "1" : "0"),
                "beta,norm,iterations,converged");
  std::size_t unconverged = 0;
  for (const auto& s : samples) {
    csv.row(s.beta, s.norm_estimate, s.iterations, s.converged ? 1 : 0);
    if (!s.converged) ++unconverged;
  }
  PolyBoundReport raw = poly_bound_probe(0.0, samples);
  log << samples.size() << " samples, max norm = " << num(raw.sup_value) << " at beta=" << num(raw.argmax_beta);
  if (unconverged) log << " (" << unconverged << " not converged)";
  log << '\n';
  if (r.has_gamma) {
    PolyBoundReport rep = poly_bound_probe(r.gamma, samples);
    char g[32];
    std::snprintf(g, sizeof g, "%g", r.gamma);
    log << "sup beta^-" << g << " * norm = " << num(rep.sup_value) << " at beta=" << num(rep.argmax_beta) << '\n';
  }
  return 0;
}

int run_quasimode(const RunConfig& r, std::ostream& log) {
  const double c = r.params.c, d = r.params.d;
  if (r.strict_theta)
    for (int n : r.n_list) require_nondegenerate_theta(constants(n, c, d));
  const int factor = r.mesh_factor;
  BlowupTable t = blowup_experiment(r.n_list, c, d, [factor](int n) { return static_cast<std::size_t>(factor * n); });

  CsvWriter csv(r.output, metadata(r), "n,quantity,exact,model,residual,order");
  const BlowupRow* prev = nullptr;
  for (const auto& row : t.rows) {
    const auto& s = row.at_resonance;
    double growth = NAN, growth_cont = NAN;
    if (prev) {
      double ln = std::log(static_cast<double>(row.n) / prev->n);
      growth = std::log(s.vx_norm / prev->at_resonance.vx_norm) / ln;
      growth_cont = std::log(row.vx_norm_continuum_freq / prev->vx_norm_continuum_freq) / ln;
    }
    ForcingNorm fn = forcing_norm(row.n, c);
    csv.row(row.n, "frequency", omega_n(row.n, c), s.beta, std::abs(s.beta - omega_n(row.n, c)), NAN);
    csv.row(row.n, "vx_norm", s.vx_exact, s.vx_norm, s.vx_mismatch, growth);
    csv.row(row.n, "vx_norm_continuum_freq", s.vx_exact, row.vx_norm_continuum_freq,
            std::abs(row.vx_norm_continuum_freq / s.vx_exact - 1.0), growth_cont);
    csv.row(row.n, "forcing_norm", row.forcing_exact, s.forcing_discrete,
            std::abs(s.forcing_discrete / row.forcing_exact - 1.0), NAN);
    csv.row(row.n, "forcing_norm_sq_claim", fn.quadrature, fn.claimed_formula, std::abs(fn.quadrature - fn.claimed_formula),
            NAN);
    csv.row(row.n, "omega1_trace", row.omega1_trace_abs, row.omega1_model_abs,
            std::abs(row.omega1_trace_abs / row.omega1_model_abs - 1.0), NAN);
    log << "n=" << row.n << " N=" << s.N << " |v1_x| discrete=" << num(s.vx_norm) << " exact=" << num(s.vx_exact)
        << " forcing=" << num(s.forcing_discrete) << '\n';
    prev = &row;
  }
  for (const auto& w : t.warnings) log << "warning: " << w << '\n';
  if (!t.strictly_increasing) {
    log << "error: v1_x norms are not strictly increasing along n_list\n";
    return 3;
  }
  log << "v1_x norms strictly increasing, min ratio " << num(t.min_ratio) << ", forcing spread "
      << num(t.forcing_spread) << '\n';
  return 0;
}

int run_audit(const RunConfig& r, std::ostream& log) {
  const double c = r.params.c, d = r.params.d;
  auto names = r.quantities.empty() ? audit_registry() : r.quantities;
  if (r.strict_theta)
    for (int n : r.n_list) require_nondegenerate_theta(constants(n, c, d));
  CsvWriter csv(r.output, metadata(r), "n,quantity,exact,model,residual,order");
  int passed = 0;
  for (const auto& name : names) {
    AuditReport rep = expansion_audit(name, r.n_list, c, d);
    for (const auto& row : rep.rows) csv.row(row.n, name, row.exact_abs, row.model_abs, row.residual, rep.fitted_order);
    log << (rep.pass ? "PASS " : "FAIL ") << name << " order " << num(rep.fitted_order) << " (claimed "
        << num(rep.claimed_order) << ")\n";
    passed += rep.pass ? 1 : 0;
  }
  for (int n : r.n_list) {
    double id = defining_identity_residual(n, c, d);
    csv.row(n, "defining_identity", 0.0, id, id, NAN);
  }
  log << passed << " of " << names.size() << " expansions pass\n";
  return 0;
}

int run_spectrum(const RunConfig& r, std::ostream& log) {
  Mesh mesh(r.N);
  GramMatrices g = assemble(mesh, r.params);
  CsvWriter csv(r.output, metadata(r), "shift_re,shift_im,lambda_re,lambda_im,iterations");
  for (int k = 0; k < r.probes; ++k) {
    cplx shift(r.shift_re, r.shift_im + k * r.shift_step);
    SpectrumEstimate e = spectrum_probe(shift, g, r.params, 1e-10, r.max_iter);
    csv.row(shift.real(), shift.imag(), e.eigenvalue.real(), e.eigenvalue.imag(), e.iterations);
    log << "shift " << num(shift.real()) << (shift.imag() < 0 ? "" : "+") << num(shift.imag()) << "i -> "
        << num(e.eigenvalue.real()) << (e.eigenvalue.imag() < 0 ? "" : "+") << num(e.eigenvalue.imag()) << "i\n";
  }
  return 0;
}

int run_stationary(const RunConfig& r, std::ostream& log) {
  Mesh mesh(r.N);
  GramMatrices g = assemble(mesh, r.params);
  ShiftedSolver solver(0.0, g, r.params);
  CsvWriter csv(r.output, metadata(r), "probe,forcing_norm,solution_norm,ratio");
  double worst = 0.0;
  for (int k = 0; k < r.probes; ++k) {
    StateBlock f = random_smooth_state(mesh, r.seed + static_cast<std::uint64_t>(k));
    StateBlock x = solver.solve(f);
    double fn = energy_norm(f, g, r.params), xn = energy_norm(x, g, r.params);
    csv.row(k, fn, xn, xn / fn);
    worst = std::max(worst, xn / fn);
  }
  log << "max |A^-1 F| / |F| over " << r.probes << " probes = " << num(worst) << '\n';
  return 0;
}

}  // namespace

int run(const RunConfig& config, std::ostream& log) {
  try {
    switch (config.command) {
      case Command::simulate: return run_simulate(config, log);
      case Command::scan: return run_scan(config, log);
      case Command::quasimode: return run_quasimode(config, log);
      case Command::audit: return run_audit(config, log);
      case Command::spectrum: return run_spectrum(config, log);
      case Command::stationary: return run_stationary(config, log);
    }
  } catch (const std::exception& e) {
    log << "error: " << to_string(config.command) << ": " << e.what() << '\n';
    return 2;
  }
  return 2;
}

}  // namespace kvwave
