#pragma once

#include <complex>
#include <functional>
#include <string>
#include <vector>

#include "kvwave/discretization.hpp"
#include "kvwave/model.hpp"

namespace kvwave {

// Every scalar of the explicit quasimode construction for one mode index.
// Values are computed in 50-digit arithmetic and rounded to double.
struct QuasimodeConstants {
  int n = 0;
  double c = 0.0, d = 0.0;
  double omega = 0.0;
  cplx lambda;

  // auxiliaries of the eta roots and of the polar form of beta
  double a = 0.0, b = 0.0, r = 0.0, phi = 0.0;
  double a_plus = 0.0, a_minus = 0.0, b_plus = 0.0, b_minus = 0.0;
  double r_plus = 0.0, r_minus = 0.0, phi_plus = 0.0, phi_minus = 0.0;

  cplx alpha_plus, alpha_minus;
  double mu_plus = 0.0, mu_minus = 0.0;
  cplx eta_plus, eta_minus;
  cplx beta_plus_sq, beta_minus_sq;
  cplx beta_plus, beta_minus;              // selected branch
  cplx beta_plus_polar, beta_minus_polar;  // polar recipe, before sign selection
  cplx theta;

  cplx A_n, B_n, A_n_prime, B_n_prime;
  cplx one_minus_AA;  // 1 - A_n A_n', vanishes at the resonance

  // interface unknowns from the 4x4 matching system
  cplx c1_prime, c3_prime, c1, c3;
  cplx omega1_trace, omega2_trace;  // values of the characteristic variables at x = -1

  double sin_theta = 0.0;
  bool sin_theta_degenerate = false;  // |sin theta| < 1e-3
  double identity_residual = 0.0;     // |mu+ (lambda - alpha+/c) - 2 i n pi|
};

double omega_n(int n, double c);
// omega_n for the wavenumber k instead of 2 n pi.
double omega_of_wavenumber(double k, double c);
// Resonant frequency of the P1 scheme: omega for the discrete wavenumber of
// sin(2 n pi x) on a mesh with N elements.
double discrete_omega_n(int n, double c, std::size_t N);

QuasimodeConstants constants(int n, double c, double d);
// Throws SinThetaDegenerate when the flag above is set.
void require_nondegenerate_theta(const QuasimodeConstants& k);

struct ForcingValues {
  cplx F1, G1, F2, G2;
};

ForcingValues forcing_eval(int n, double c, double x);

// Forcing as a discrete state: G1 in the v slot and G2 in the v_t slot.
StateBlock forcing_state(int n, double c, const Mesh& mesh);

struct ForcingNorm {
  double quadrature = 0.0;   // squared energy norm by Gauss quadrature
  double closed_form = 0.0;  // c/2 + c^2/(2 mu-^2)
  double claimed_formula = 0.0;  // 1/2 + 1/(2 mu-)
  double claimed_limit = 0.0;  // (1 + 1/sqrt(c))/2, stated as the limit of claimed_formula
};

ForcingNorm forcing_norm(int n, double c);

struct ClosedFormValue {
  cplx u1, v1, v1x;
};

// Exact solution of the forced resolvent problem at lambda = i omega_n.
ClosedFormValue closed_form_solution(const QuasimodeConstants& k, double x);
ClosedFormValue closed_form_solution(int n, double c, double d, double x);

// Same v1_x on (-1, 0) assembled from the characteristic variables.
cplx characteristic_v1x(const QuasimodeConstants& k, double x);

// Mismatch of the (0-) and (0+) traces of u1, v1 and (1+lambda d) u1x, v1x.
double interface_mismatch(const QuasimodeConstants& k);

double closed_form_vx_norm(const QuasimodeConstants& k, int gauss_cells = 0);

enum class FrequencyChoice { discrete, continuum };

struct DiscreteQuasimodeSolve {
  int n = 0;
  std::size_t N = 0;
  double beta = 0.0;
  double vx_norm = 0.0;            // discrete, on (-1, 0)
  double vx_exact = 0.0;           // closed form, on (-1, 0)
  double vx_mismatch = 0.0;        // relative L2 distance on (-1, 0)
  double forcing_discrete = 0.0;   // energy norm of the interpolated forcing
  double solution_norm = 0.0;      // energy norm of the discrete solution
};

DiscreteQuasimodeSolve solve_discrete_quasimode(int n, double c, double d, std::size_t N,
                                                FrequencyChoice freq = FrequencyChoice::discrete);

std::size_t default_mesh_rule(int n);

struct BlowupRow {
  int n = 0;
  DiscreteQuasimodeSolve at_resonance;
  double vx_norm_continuum_freq = 0.0;
  double forcing_exact = 0.0;  // sqrt of the quadrature value
  double omega1_trace_abs = 0.0;
  double omega1_model_abs = 0.0;
};

struct BlowupTable {
  std::vector<BlowupRow> rows;
  bool strictly_increasing = false;
  double min_ratio = 0.0;
  double forcing_spread = 0.0;  // max relative deviation from the last row
  std::vector<std::string> warnings;
};

BlowupTable blowup_experiment(const std::vector<int>& n_list, double c, double d,
                              const std::function<std::size_t(int)>& mesh_rule = default_mesh_rule);

struct AuditRow {
  int n = 0;
  double exact_abs = 0.0;
  double model_abs = 0.0;
  double residual = 0.0;
};

struct AuditReport {
  std::string name;
  double claimed_order = 0.0;
  double fitted_order = 0.0;
  bool relative = false;
  bool pass = false;
  std::vector<AuditRow> rows;
};

std::vector<std::string> audit_registry();
AuditReport expansion_audit(const std::string& name, const std::vector<int>& n_list, double c, double d);
// |mu+ (lambda - alpha+/c) - 2 i n pi| in 50-digit arithmetic
double defining_identity_residual(int n, double c, double d);

}  // namespace kvwave
