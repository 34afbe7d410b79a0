#include "kvwave/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "kvwave/error.hpp"

namespace kvwave {

namespace {

double checked_step(double dt) {
  if (!(dt > 0.0)) throw Error(ErrorCode::ValidationError, "time step must be positive");
  return dt;
}

}  // namespace

CnStepper::CnStepper(double dt, const GramMatrices& g, const ModelParams& p)
    : dt_(checked_step(dt)), g_(&g), p_(p), solver_(2.0 / dt_, g, p) {}

// With Y = (2/dt - A)^{-1} X the midpoint update is X+ = (4/dt) Y - X.
StateBlock CnStepper::step(const StateBlock& x) const {
  StateBlock y = solver_.solve(x);
  y *= 4.0 / dt_;
  y -= x;
  double before = energy_norm(x, *g_, p_);
  double after = energy_norm(y, *g_, p_);
  if (after > before * (1.0 + 1e-10)) {
    std::ostringstream os;
    os << "step increased the energy norm from " << before << " to " << after;
    throw Error(ErrorCode::ResidualTooLarge, os.str());
  }
  return y;
}

StateBlock cn_step(const StateBlock& x, double dt, const GramMatrices& g, const ModelParams& p) {
  return CnStepper(dt, g, p).step(x);
}

EnergyTrace simulate(const StateBlock& x0, double T, double dt, const GramMatrices& g,
                     const ModelParams& p, const SimulateOptions& opts) {
  if (!(T > 0.0) || !(dt > 0.0)) throw Error(ErrorCode::ValidationError, "T and dt must be positive");
  auto steps = static_cast<std::size_t>(std::llround(T / dt));
  steps = std::max<std::size_t>(steps, 1);
  const double step = T / static_cast<double>(steps);

  CnStepper stepper(step, g, p);
  EnergyTrace trace;
  trace.samples.reserve(steps + 1);
  StateBlock x = x0;
  trace.samples.push_back({0.0, discrete_energy(x, g, p), -dissipation_rate(x, g)});
  double integral = 0.0;
  for (std::size_t k = 1; k <= steps; ++k) {
    x = stepper.step(x);
    EnergySample s{step * static_cast<double>(k), discrete_energy(x, g, p), -dissipation_rate(x, g)};
    integral += 0.5 * step * (std::abs(s.D) + std::abs(trace.samples.back().D));
    trace.samples.push_back(s);
  }
  const double e0 = trace.samples.front().E;
  trace.balance_defect = e0 - trace.samples.back().E - integral;
  if (opts.check_balance && step <= g.h / 4.0 * (1.0 + 1e-12) &&
      std::abs(trace.balance_defect) > opts.balance_tol * e0) {
    std::ostringstream os;
    os << "integrated dissipation misses the energy drop by " << trace.balance_defect / e0 << " E(0), tolerance "
       << opts.balance_tol << " E(0); smoothing the initial data or refining the mesh helps";
    throw Error(ErrorCode::EnergyBalance, os.str());
  }
  return trace;
}

DecayFit fit_decay(const EnergyTrace& trace, double t_min, double t_max, std::size_t targets) {
  const auto& s = trace.samples;
  auto first = std::lower_bound(s.begin(), s.end(), t_min,
                                [](const EnergySample& a, double t) { return a.t < t; });
  auto last = std::upper_bound(s.begin(), s.end(), t_max,
                               [](double t, const EnergySample& a) { return t < a.t; });
  if (!(t_min > 0.0) || std::distance(first, last) < 10)
    throw Error(ErrorCode::EmptyWindow, "decay window needs at least 10 samples at t > 0");

  std::vector<std::size_t> picks;
  const double lo = first->t;
  const double hi = std::prev(last)->t;
  const double ratio = std::pow(hi / lo, 1.0 / static_cast<double>(std::max<std::size_t>(targets - 1, 1)));
  double target = lo;
  for (std::size_t k = 0; k < targets; ++k, target *= ratio) {
    auto it = std::lower_bound(first, last, target,
                               [](const EnergySample& a, double t) { return a.t < t; });
    if (it == last) it = std::prev(last);
    auto idx = static_cast<std::size_t>(std::distance(s.begin(), it));
    if (picks.empty() || picks.back() != idx) picks.push_back(idx);
  }
  if (picks.size() < 10) {
    picks.clear();
    for (auto it = first; it != last; ++it) picks.push_back(static_cast<std::size_t>(std::distance(s.begin(), it)));
  }

  const double n = static_cast<double>(picks.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (auto i : picks) {
    if (!(s[i].E > 0.0)) throw Error(ErrorCode::NonPositiveEnergy, "energy must be positive in the window");
    double lx = std::log(s[i].t), ly = std::log(s[i].E);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double denom = n * sxx - sx * sx;
  DecayFit fit;
  fit.slope = denom > 0.0 ? (n * sxy - sx * sy) / denom : 0.0;
  const double icpt = (sy - fit.slope * sx) / n;
  double ss = 0.0;
  for (auto i : picks) {
    double r = std::log(s[i].E) - icpt - fit.slope * std::log(s[i].t);
    ss += r * r;
  }
  fit.residual = std::sqrt(ss / n);
  fit.t_min = lo;
  fit.t_max = hi;
  fit.points = picks.size();
  return fit;
}

double energy_at(const EnergyTrace& trace, double time) {
  const auto& s = trace.samples;
  auto it = std::lower_bound(s.begin(), s.end(), time - 1e-12,
                             [](const EnergySample& a, double t) { return a.t < t; });
  if (it == s.end()) throw Error(ErrorCode::EmptyWindow, "time beyond the end of the trace");
  return it->E;
}

StateBlock smooth_initial_data(const StateBlock& y, const GramMatrices& g, const ModelParams& p) {
  return shifted_solve(1.0, y, g, p);
}

StateBlock sine_state(const Mesh& mesh, int k) {
  const std::size_t m = mesh.interior();
  StateBlock x(m);
  for (std::size_t i = 0; i < m; ++i)
    x.u[i] = std::sin(k * std::numbers::pi * (mesh.nodes[i + 1] + 1.0) / 2.0);
  return x;
}

StateBlock random_smooth_state(const Mesh& mesh, std::uint64_t seed, int modes) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> amp(0.0, 1.0);
  const std::size_t m = mesh.interior();
  StateBlock x(m);
  for (CVec* f : {&x.u, &x.v, &x.w, &x.z}) {
    for (int k = 1; k <= modes; ++k) {
      double a = amp(rng) / k;
      for (std::size_t i = 0; i < m; ++i)
        (*f)[i] += a * std::sin(k * std::numbers::pi * (mesh.nodes[i + 1] + 1.0) / 2.0);
    }
  }
  return x;
}

}  // namespace kvwave
