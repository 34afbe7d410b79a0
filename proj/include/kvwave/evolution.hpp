#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "kvwave/discretization.hpp"

namespace kvwave {

struct EnergySample {
  double t;
  double E;
  double D;  // -w^* Ka w, never positive
};

struct EnergyTrace {
  std::vector<EnergySample> samples;
  // E(0) - E(T) minus the trapezoidal integral of |D|
  double balance_defect = 0.0;
};

struct DecayFit {
  double slope = 0.0;
  double t_min = 0.0;
  double t_max = 0.0;
  double residual = 0.0;  // RMS of the log-log fit
  std::size_t points = 0;
};

// Crank-Nicolson stepper. The shift 2/dt is factored once.
class CnStepper {
 public:
  CnStepper(double dt, const GramMatrices& g, const ModelParams& p);
  StateBlock step(const StateBlock& x) const;
  double dt() const { return dt_; }

 private:
  double dt_;
  const GramMatrices* g_;
  ModelParams p_;
  ShiftedSolver solver_;
};

StateBlock cn_step(const StateBlock& x, double dt, const GramMatrices& g, const ModelParams& p);

struct SimulateOptions {
  // Throw EnergyBalance when dt <= h/4 and the integrated identity misses
  // by more than balance_tol * E(0).
  bool check_balance = true;
  double balance_tol = 1e-4;
};

EnergyTrace simulate(const StateBlock& x0, double T, double dt, const GramMatrices& g,
                     const ModelParams& p, const SimulateOptions& opts = {});

// Least-squares slope of log E against log t on geometrically spaced samples
// in [t_min, t_max].
DecayFit fit_decay(const EnergyTrace& trace, double t_min, double t_max, std::size_t targets = 64);

// Energy read off the trace at the first sample with t >= time.
double energy_at(const EnergyTrace& trace, double time);

// One resolvent smoothing step (I - A_h)^{-1} Y, so the data lies in the
// discrete domain of the generator with a controlled graph norm.
StateBlock smooth_initial_data(const StateBlock& y, const GramMatrices& g, const ModelParams& p);

// u = sin(k*pi*(x+1)/2) at the interior nodes, all other fields zero.
StateBlock sine_state(const Mesh& mesh, int k);

// A few sine modes in every field with seeded random amplitudes.
StateBlock random_smooth_state(const Mesh& mesh, std::uint64_t seed, int modes = 4);

}  // namespace kvwave
