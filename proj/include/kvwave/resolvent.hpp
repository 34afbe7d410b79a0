#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <vector>

#include "kvwave/discretization.hpp"

namespace kvwave {

struct ResolventSample {
  double beta = 0.0;
  double norm_estimate = 0.0;
  int iterations = 0;
  bool converged = false;
};

struct PolyBoundReport {
  double gamma = 0.0;
  double sup_value = 0.0;
  double argmax_beta = 0.0;
};

struct ResolventOptions {
  double tol = 1e-6;
  int max_iter = 500;
  bool throw_on_no_convergence = true;
};

// Largest singular value of (i beta - A_h)^{-1} in the energy geometry, by
// power iteration on R^# R. If top_vector is given it receives the final
// normalized iterate.
ResolventSample resolvent_norm(double beta, const GramMatrices& g, const ModelParams& p,
                               const ResolventOptions& opts = {},
                               StateBlock* top_vector = nullptr);

// Samples are independent; up to `threads` workers (0 = hardware, capped by
// KVWAVELAB_THREADS). Non-converged samples are kept with converged = false.
std::vector<ResolventSample> scan(const std::vector<double>& beta_grid, const GramMatrices& g,
                                  const ModelParams& p, const ResolventOptions& opts = {},
                                  unsigned threads = 0);

PolyBoundReport poly_bound_probe(double gamma, const std::vector<ResolventSample>& samples);
PolyBoundReport poly_bound_probe(double gamma, const std::vector<double>& beta_grid,
                                 const GramMatrices& g, const ModelParams& p,
                                 const ResolventOptions& opts = {});

struct SpectrumEstimate {
  cplx eigenvalue;
  int iterations = 0;
};

// Eigenvalue of A_h nearest to the shift by two-vector inverse iteration with
// a Rayleigh-Ritz step in the energy inner product. A pair of eigenvalues
// symmetric about a real shift is resolved instead of oscillating.
SpectrumEstimate spectrum_probe(cplx shift, const GramMatrices& g, const ModelParams& p,
                                double tol = 1e-10, int max_iter = 500);

struct GridSpec {
  double beta_min = 1.0;
  double beta_max = 300.0;
  // Points per unit beta for linear grids, total count for log grids.
  double density = 8.0;
  bool log_spaced = false;
  std::vector<double> insert;  // extra frequencies added inside [min, max]
};

std::vector<double> build_grid(const GridSpec& spec);

unsigned scan_thread_cap();

}  // namespace kvwave
