#include "kvwave/resolvent.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <thread>

#include "kvwave/error.hpp"

namespace kvwave {

namespace {

StateBlock seeded_state(std::size_t m, std::uint64_t seed, bool real_only) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd(0.0, 1.0);
  StateBlock x(m);
  for (CVec* f : {&x.u, &x.v, &x.w, &x.z})
    for (auto& e : *f) {
      double re = nd(rng);
      double im = real_only ? 0.0 : nd(rng);
      e = {re, im};
    }
  return x;
}

void normalize(StateBlock& x, const GramMatrices& g, const ModelParams& p) {
  double n = energy_norm(x, g, p);
  if (n > 0.0) x *= 1.0 / n;
}

}  // namespace

ResolventSample resolvent_norm(double beta, const GramMatrices& g, const ModelParams& p,
                               const ResolventOptions& opts, StateBlock* top_vector) {
  ShiftedSolver solver(cplx(0.0, beta), g, p);
  StateBlock x = seeded_state(g.size(), 0x6b7677ULL, false);
  normalize(x, g, p);

  ResolventSample out;
  out.beta = beta;
  double best = 0.0;
  double prev = 0.0;
  for (int it = 1; it <= opts.max_iter; ++it) {
    StateBlock y = solver.solve(x);
    double ry = energy_norm(y, g, p);
    best = std::max(best, ry);
    StateBlock z = solver.adjoint_apply(y);
    double rayleigh = ry * ry;
    double zn = energy_norm(z, g, p);
    // sqrt(|R^# R x|) lies between |R x| and the operator norm
    best = std::max(best, std::sqrt(zn));
    out.iterations = it;
    if (zn == 0.0) {
      out.converged = true;
      break;
    }
    x = (1.0 / zn) * std::move(z);
    if (it > 1 && std::abs(rayleigh - prev) < opts.tol * rayleigh) {
      out.converged = true;
      break;
    }
    prev = rayleigh;
  }
  // one more probe with the final iterate
  best = std::max(best, energy_norm(solver.solve(x), g, p));
  out.norm_estimate = best;
  if (top_vector) *top_vector = x;
  if (!out.converged && opts.throw_on_no_convergence) {
    std::ostringstream os;
    os << "power iteration at beta=" << beta << " did not converge in " << opts.max_iter << " iterations";
    throw Error(ErrorCode::NoConvergence, os.str());
  }
  return out;
}

unsigned scan_thread_cap() {
  unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("KVWAVELAB_THREADS")) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end != env && v > 0) hw = std::min<unsigned>(hw, static_cast<unsigned>(v));
  }
  return hw;
}

std::vector<ResolventSample> scan(const std::vector<double>& beta_grid, const GramMatrices& g,
                                  const ModelParams& p, const ResolventOptions& opts,
                                  unsigned threads) {
  std::vector<ResolventSample> out(beta_grid.size());
  std::vector<std::string> errors(beta_grid.size());
  std::vector<ErrorCode> codes(beta_grid.size(), ErrorCode::ResidualTooLarge);
  if (beta_grid.empty()) return out;

  ResolventOptions local = opts;
  local.throw_on_no_convergence = false;
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < beta_grid.size(); i = next++) {
      try {
        out[i] = resolvent_norm(beta_grid[i], g, p, local);
      } catch (const Error& e) {
        errors[i] = e.what();
        codes[i] = e.code();
        out[i].beta = beta_grid[i];
      } catch (const std::exception& e) {
        errors[i] = e.what();
        out[i].beta = beta_grid[i];
      }
    }
  };

  unsigned cap = threads == 0 ? scan_thread_cap() : std::min(threads, scan_thread_cap());
  cap = std::max(1u, std::min<unsigned>(cap, static_cast<unsigned>(beta_grid.size())));
  if (cap == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < cap; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  std::ostringstream os;
  std::size_t failed = 0;
  ErrorCode first = ErrorCode::ResidualTooLarge;
  for (std::size_t i = 0; i < errors.size(); ++i) {
    if (errors[i].empty()) continue;
    if (failed == 0) first = codes[i];
    if (failed++ < 5) os << "\n  beta=" << beta_grid[i] << ": " << errors[i];
  }
  if (failed > 0) throw Error(first, std::to_string(failed) + " scan samples failed" + os.str());
  return out;
}

PolyBoundReport poly_bound_probe(double gamma, const std::vector<ResolventSample>& samples) {
  if (!(gamma >= 0.0)) throw Error(ErrorCode::ValidationError, "gamma must be nonnegative");
  PolyBoundReport rep;
  rep.gamma = gamma;
  bool any = false;
  for (const auto& s : samples) {
    if (gamma > 0.0 && s.beta <= 0.0) continue;
    double weight = gamma == 0.0 ? 1.0 : std::pow(s.beta, -gamma);
    double v = weight * s.norm_estimate;
    if (!any || v > rep.sup_value) {
      rep.sup_value = v;
      rep.argmax_beta = s.beta;
      any = true;
    }
  }
  return rep;
}

PolyBoundReport poly_bound_probe(double gamma, const std::vector<double>& beta_grid,
                                 const GramMatrices& g, const ModelParams& p,
                                 const ResolventOptions& opts) {
  return poly_bound_probe(gamma, scan(beta_grid, g, p, opts));
}

SpectrumEstimate spectrum_probe(cplx shift, const GramMatrices& g, const ModelParams& p,
                                double tol, int max_iter) {
  const std::size_t m = g.size();
  StateBlock a = seeded_state(m, 0x51ULL, true);
  StateBlock b = seeded_state(m, 0x52ULL, true);

  auto orthonormalize = [&](StateBlock& x, StateBlock& y) {
    normalize(x, g, p);
    for (int pass = 0; pass < 2; ++pass) y -= energy_inner(y, x, g, p) * x;
    normalize(y, g, p);
  };
  orthonormalize(a, b);

  // Fixed-shift phase: a few two-vector sweeps locate the eigenvalue nearest
  // the shift. Real seeds keep conjugate shifts exactly conjugate, and the 2x2
  // Ritz step separates a pair placed symmetrically about the shift.
  const int warmup = std::min(max_iter, 40);
  ShiftedSolver solver(shift, g, p);
  cplx lam = shift;
  StateBlock x;
  cplx prev{std::numeric_limits<double>::quiet_NaN(), 0.0};
  int it = 0;
  while (it < warmup) {
    ++it;
    a = solver.solve(a);
    b = solver.solve(b);
    orthonormalize(a, b);
    StateBlock aa = generator_apply(a, g, p);
    StateBlock ab = generator_apply(b, g, p);
    // Ritz matrix B_ij = <A q_j, q_i>_H
    cplx b11 = energy_inner(aa, a, g, p), b12 = energy_inner(ab, a, g, p);
    cplx b21 = energy_inner(aa, b, g, p), b22 = energy_inner(ab, b, g, p);
    cplx half_tr = 0.5 * (b11 + b22);
    cplx disc = std::sqrt(0.25 * (b11 - b22) * (b11 - b22) + b12 * b21);
    cplx l1 = half_tr + disc, l2 = half_tr - disc;
    double d1 = std::abs(l1 - shift), d2 = std::abs(l2 - shift);
    bool first = d1 < d2 || (d1 == d2 && l1.imag() >= l2.imag());
    lam = first ? l1 : l2;
    // Ritz vector: null vector of B - lam I
    cplx ca = b12, cb = lam - b11;
    if (std::abs(ca) + std::abs(cb) == 0.0) {
      ca = lam - b22;
      cb = b21;
    }
    if (std::abs(ca) + std::abs(cb) == 0.0) ca = 1.0;
    x = ca * a + cb * b;
    normalize(x, g, p);
    bool settled = std::abs(lam - prev) <= 1e-4 * std::max(1.0, std::abs(lam));
    prev = lam;
    if (settled) break;
  }

  // Rayleigh quotient refinement from the warm start.
  for (; it <= max_iter; ++it) {
    StateBlock ax = generator_apply(x, g, p);
    lam = energy_inner(ax, x, g, p);
    double res = energy_norm(ax - lam * x, g, p);
    if (res <= tol * std::max(1.0, std::abs(lam))) return {lam, it};
    try {
      ShiftedSolver near(lam, g, p);
      // solves at a converging shift are ill-conditioned by design
      near.residual_tol = std::numeric_limits<double>::infinity();
      x = near.solve(x);
    } catch (const Error& e) {
      // the shift sits on an eigenvalue to working precision
      if (e.code() == ErrorCode::NearSingularShift) return {lam, it};
      throw;
    }
    normalize(x, g, p);
  }
  std::ostringstream os;
  os << "inverse iteration at shift " << shift << " did not converge in " << max_iter << " iterations";
  throw Error(ErrorCode::NoConvergence, os.str());
}

std::vector<double> build_grid(const GridSpec& spec) {
  std::vector<double> grid;
  if (spec.beta_max < spec.beta_min) throw Error(ErrorCode::ValidationError, "beta_max < beta_min");
  if (spec.log_spaced) {
    if (!(spec.beta_min > 0.0)) throw Error(ErrorCode::ValidationError, "log grid needs beta_min > 0");
    auto n = static_cast<std::size_t>(std::max(2.0, std::round(spec.density)));
    double ratio = std::log(spec.beta_max / spec.beta_min) / static_cast<double>(n - 1);
    for (std::size_t k = 0; k < n; ++k) grid.push_back(spec.beta_min * std::exp(ratio * static_cast<double>(k)));
    grid.back() = spec.beta_max;
  } else {
    double span = spec.beta_max - spec.beta_min;
    auto n = static_cast<std::size_t>(std::ceil(span * spec.density)) + 1;
    if (span == 0.0) n = 1;
    for (std::size_t k = 0; k < n; ++k)
      grid.push_back(n == 1 ? spec.beta_min : spec.beta_min + span * static_cast<double>(k) / static_cast<double>(n - 1));
  }
  for (double b : spec.insert)
    if (b >= spec.beta_min && b <= spec.beta_max) grid.push_back(b);
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  return grid;
}

}  // namespace kvwave
