#include "kvwave/quasimode.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <cmath>
#include <numbers>
#include <sstream>

#include "exact_constants.hpp"
#include "kvwave/error.hpp"

namespace kvwave {

namespace {

constexpr double pi = std::numbers::pi;
using boost::math::quadrature::gauss;

double mu_minus_of(double omega, double c) {
  double s = std::sqrt((c - 1.0) * (c - 1.0) + 4.0 * c / (omega * omega));
  return std::sqrt(2.0 * c / (c + 1.0 + s));
}

// c' (e^{bx} - e^{b(2-x)}) / (1 - e^{2b}) and its x-derivative
std::pair<cplx, cplx> boundary_mode(cplx b, cplx cprime, double x) {
  if (b.real() > 0.0) {
    cplx den = std::exp(-2.0 * b) - 1.0;
    cplx e1 = std::exp(b * (x - 2.0)), e2 = std::exp(-b * x);
    return {cprime * (e1 - e2) / den, cprime * b * (e1 + e2) / den};
  }
  cplx den = 1.0 - std::exp(2.0 * b);
  cplx e1 = std::exp(b * x), e2 = std::exp(b * (2.0 - x));
  return {cprime * (e1 - e2) / den, cprime * b * (e1 + e2) / den};
}

struct LeftSide {
  cplx w1p, w1m, w2p, w2m;
};

// characteristic variables on (-1, 0)
LeftSide characteristic(const QuasimodeConstants& k, double x) {
  const cplx I(0.0, 1.0);
  const double kk = 2.0 * k.n * pi;
  const double ratio = k.mu_plus / k.mu_minus;
  const cplx ap = k.alpha_plus, am = k.alpha_minus, th = k.theta;
  const double sk = std::sin(kk * x);
  LeftSide s;
  s.w1p = k.omega1_trace * std::exp(I * kk * x) -
          ap / 2.0 * ((1.0 - ratio) * (x + 1.0) * std::exp(I * kk * x) + (1.0 + ratio) * sk / kk);
  s.w1m = -k.omega1_trace * std::exp(-I * kk * x) -
          ap / 2.0 * ((1.0 - ratio) * (x + 1.0) * std::exp(-I * kk * x) + (1.0 + ratio) * sk / kk);
  const cplx part = am / (I * (kk + th));
  s.w2p = k.omega2_trace * std::exp(I * th * (x + 1.0)) + part * (std::exp(-I * kk * x) - std::exp(I * th * (x + 1.0)));
  s.w2m = -k.omega2_trace * std::exp(-I * th * (x + 1.0)) - part * (std::exp(I * kk * x) - std::exp(-I * th * (x + 1.0)));
  return s;
}

struct LeftState {
  cplx u, v, ux, vx;
};

LeftState left_state(const QuasimodeConstants& k, double x) {
  const double kk = 2.0 * k.n * pi;
  const double g1 = std::sin(kk * x) / kk;
  LeftSide s = characteristic(k, x);
  const cplx ap = k.alpha_plus, am = k.alpha_minus;
  cplx plus = (0.5 * (s.w1p + s.w1m) + ap * g1) / k.lambda;   // u + alpha+ v
  cplx minus = (0.5 * (s.w2p + s.w2m) + am * g1) / k.lambda;  // u + alpha- v
  cplx dplus = (s.w1p - s.w1m) / (2.0 * k.mu_plus);           // u_x + alpha+ v_x
  cplx dminus = (s.w2p - s.w2m) / (2.0 * k.mu_minus);
  LeftState st;
  st.v = (plus - minus) / (ap - am);
  st.u = plus - ap * st.v;
  st.vx = (dplus - dminus) / (ap - am);
  st.ux = dplus - ap * st.vx;
  return st;
}

struct RightState {
  cplx u, v, ux, vx;
};

RightState right_state(const QuasimodeConstants& k, double x) {
  const cplx de = k.eta_plus - k.eta_minus;
  auto [ep, dep] = boundary_mode(k.beta_plus, k.c1_prime, x);
  auto [em, dem] = boundary_mode(k.beta_minus, k.c3_prime, x);
  RightState st;
  st.u = (-k.eta_minus * ep + k.eta_plus * em) / de;
  st.v = (ep - em) / de;
  st.ux = (-k.eta_minus * dep + k.eta_plus * dem) / de;
  st.vx = (dep - dem) / de;
  return st;
}

void check_resolution(int n, double c, std::size_t N) {
  double per_wave = static_cast<double>(N) / (2.0 * n * std::max(1.0, std::sqrt(c)));
  if (per_wave < 8.0) {
    std::ostringstream os;
    os << "N=" << N << " gives " << per_wave << " elements per wavelength at n=" << n << " (need 8)";
    throw Error(ErrorCode::MeshTooCoarse, os.str());
  }
}

}  // namespace

double omega_n(int n, double c) {
  const double nn = n;
  double big = 8.0 * c * (c - 1.0) * pi * pi * nn * nn;
  double delta = big * big + 32.0 * (c + 1.0) * (c * pi * nn) * (c * pi * nn) + 4.0 * c * c;
  return std::sqrt((8.0 * c * (c + 1.0) * nn * nn * pi * pi + 2.0 * c + std::sqrt(delta)) / (4.0 * c));
}

double omega_of_wavenumber(double k, double c) {
  double k2 = k * k;
  double root = std::sqrt((c - 1.0) * (c - 1.0) * k2 * k2 + 2.0 * (c + 1.0) * k2 + 1.0);
  return std::sqrt(((c + 1.0) * k2 + 1.0 + root) / 2.0);
}

double discrete_omega_n(int n, double c, std::size_t N) {
  const double h = 2.0 / static_cast<double>(N);
  const double kh = 2.0 * n * pi * h;
  const double s = std::sin(kh / 2.0);
  // stiffness over mass symbol of P1 for the mode sin(kx)
  double k2 = 12.0 * s * s / (h * h * (2.0 + std::cos(kh)));
  return omega_of_wavenumber(std::sqrt(k2), c);
}

QuasimodeConstants constants(int n, double c, double d) {
  return detail::to_double(detail::exact_constants(n, c, d));
}

ForcingValues forcing_eval(int n, double c, double x) {
  ForcingValues f{};
  if (x < -1.0 || x > 1.0) throw Error(ErrorCode::ValidationError, "x outside [-1, 1]");
  if (x >= 0.0) return f;
  const double kk = 2.0 * n * pi;
  const double sk = std::sin(kk * x);
  f.G1 = sk / kk;
  f.G2 = c * sk / cplx(0.0, mu_minus_of(omega_n(n, c), c));
  return f;
}

StateBlock forcing_state(int n, double c, const Mesh& mesh) {
  const std::size_t m = mesh.interior();
  StateBlock f(m);
  for (std::size_t i = 0; i < m; ++i) {
    ForcingValues v = forcing_eval(n, c, mesh.nodes[i + 1]);
    f.v[i] = v.G1;
    f.z[i] = v.G2;
  }
  return f;
}

ForcingNorm forcing_norm(int n, double c) {
  const double kk = 2.0 * n * pi;
  const double mum = mu_minus_of(omega_n(n, c), c);
  auto density = [&](double x) {
    double g1x = std::cos(kk * x);
    double g2 = c * std::sin(kk * x) / mum;
    return c * g1x * g1x + g2 * g2;
  };
  const int cells = 8 * n;
  double total = 0.0;
  for (int j = 0; j < cells; ++j) {
    double a = -1.0 + static_cast<double>(j) / cells, b = -1.0 + static_cast<double>(j + 1) / cells;
    total += gauss<double, 10>::integrate(density, a, b);
  }
  ForcingNorm out;
  out.quadrature = total;
  out.closed_form = c / 2.0 + c * c / (2.0 * mum * mum);
  out.claimed_formula = 0.5 + 1.0 / (2.0 * mum);
  out.claimed_limit = 0.5 * (1.0 + 1.0 / std::sqrt(c));
  return out;
}

ClosedFormValue closed_form_solution(const QuasimodeConstants& k, double x) {
  if (x < -1.0 || x > 1.0) throw Error(ErrorCode::ValidationError, "x outside [-1, 1]");
  ClosedFormValue out;
  if (x >= 0.0) {
    RightState st = right_state(k, x);
    out.u1 = st.u;
    out.v1 = st.v;
    out.v1x = st.vx;
    return out;
  }
  LeftState st = left_state(k, x);
  out.u1 = st.u;
  out.v1 = st.v;
  // expanded form of v1_x on (-1, 0)
  const cplx I(0.0, 1.0);
  const double kk = 2.0 * k.n * pi;
  const double ratio = k.mu_plus / k.mu_minus;
  const cplx ap = k.alpha_plus, am = k.alpha_minus, th = k.theta;
  cplx first = k.mu_minus * (2.0 * k.omega1_trace * std::cos(kk * x) -
                             I * ap * (1.0 - ratio) * (x + 1.0) * std::sin(kk * x));
  cplx second = k.mu_plus * (2.0 * k.omega2_trace * std::cos(th * (x + 1.0)) +
                             2.0 * am / (I * (kk + th)) * (std::cos(kk * x) - std::cos(th * (x + 1.0))));
  out.v1x = (first - second) / (2.0 * k.mu_minus * k.mu_plus * (ap - am));
  return out;
}

ClosedFormValue closed_form_solution(int n, double c, double d, double x) {
  return closed_form_solution(constants(n, c, d), x);
}

void require_nondegenerate_theta(const QuasimodeConstants& k) {
  if (k.sin_theta_degenerate) {
    std::ostringstream os;
    os << "|sin theta| = " << k.sin_theta << " < 1e-3 at n=" << k.n;
    throw Error(ErrorCode::SinThetaDegenerate, os.str());
  }
}

cplx characteristic_v1x(const QuasimodeConstants& k, double x) {
  return left_state(k, std::min(x, 0.0)).vx;
}

double interface_mismatch(const QuasimodeConstants& k) {
  LeftState l = left_state(k, 0.0);
  RightState r = right_state(k, 0.0);
  const cplx q = 1.0 + k.lambda * k.d;
  double scale = std::max({std::abs(l.u), std::abs(l.v), std::abs(l.ux), std::abs(l.vx), 1e-300});
  double dev = std::max({std::abs(l.u - r.u), std::abs(l.v - r.v), std::abs(l.ux - q * r.ux),
                         std::abs(l.vx - r.vx)});
  return dev / scale;
}

double closed_form_vx_norm(const QuasimodeConstants& k, int gauss_cells) {
  const int cells = gauss_cells > 0 ? gauss_cells : 32 * k.n;
  auto density = [&](double x) { return std::norm(closed_form_solution(k, x).v1x); };
  double total = 0.0;
  for (int j = 0; j < cells; ++j) {
    double a = -1.0 + static_cast<double>(j) / cells, b = -1.0 + static_cast<double>(j + 1) / cells;
    total += gauss<double, 10>::integrate(density, a, b);
  }
  return std::sqrt(total);
}

DiscreteQuasimodeSolve solve_discrete_quasimode(int n, double c, double d, std::size_t N,
                                                FrequencyChoice freq) {
  check_resolution(n, c, N);
  ModelParams p{c, d, {0.0, 1.0}};
  Mesh mesh(N);
  GramMatrices g = assemble(mesh, p);
  QuasimodeConstants k = constants(n, c, d);

  DiscreteQuasimodeSolve out;
  out.n = n;
  out.N = N;
  out.beta = freq == FrequencyChoice::discrete ? discrete_omega_n(n, c, N) : k.omega;
  StateBlock f = forcing_state(n, c, mesh);
  StateBlock x = shifted_solve(cplx(0.0, out.beta), f, g, p);
  out.forcing_discrete = energy_norm(f, g, p);
  out.solution_norm = energy_norm(x, g, p);

  const double h = mesh.h;
  auto node_v = [&](std::size_t j) { return (j == 0 || j == N) ? cplx{} : x.v[j - 1]; };
  double vx2 = 0.0, err2 = 0.0, ex2 = 0.0;
  for (std::size_t e = 0; e < mesh.interface_index; ++e) {
    cplx slope = (node_v(e + 1) - node_v(e)) / h;
    vx2 += std::norm(slope) * h;
    double a = mesh.nodes[e], b = mesh.nodes[e + 1];
    err2 += gauss<double, 5>::integrate(
        [&](double t) { return std::norm(closed_form_solution(k, t).v1x - slope); }, a, b);
    ex2 += gauss<double, 5>::integrate([&](double t) { return std::norm(closed_form_solution(k, t).v1x); }, a, b);
  }
  out.vx_norm = std::sqrt(vx2);
  out.vx_exact = std::sqrt(ex2);
  out.vx_mismatch = std::sqrt(err2 / ex2);
  return out;
}

std::size_t default_mesh_rule(int n) { return static_cast<std::size_t>(64 * n); }

BlowupTable blowup_experiment(const std::vector<int>& n_list, double c, double d,
                              const std::function<std::size_t(int)>& mesh_rule) {
  BlowupTable table;
  ModelParams p{c, d, {0.0, 1.0}};
  table.warnings = validate_params(p, Purpose::quasimode);
  for (int n : n_list) {
    BlowupRow row;
    row.n = n;
    std::size_t N = mesh_rule(n);
    row.at_resonance = solve_discrete_quasimode(n, c, d, N, FrequencyChoice::discrete);
    row.vx_norm_continuum_freq = solve_discrete_quasimode(n, c, d, N, FrequencyChoice::continuum).vx_norm;
    row.forcing_exact = std::sqrt(forcing_norm(n, c).quadrature);
    QuasimodeConstants k = constants(n, c, d);
    if (k.sin_theta_degenerate)
      table.warnings.push_back("|sin theta| = " + std::to_string(k.sin_theta) + " at n=" + std::to_string(n));
    row.omega1_trace_abs = std::abs(k.omega1_trace);
    row.omega1_model_abs = std::abs(k.c3_prime) * std::sqrt(c / d) * std::pow(2.0 * pi * std::sqrt(c) * n, 1.5);
    table.rows.push_back(row);
  }
  table.strictly_increasing = !table.rows.empty();
  table.min_ratio = table.rows.size() > 1 ? INFINITY : 0.0;
  for (std::size_t i = 1; i < table.rows.size(); ++i) {
    double ratio = table.rows[i].at_resonance.vx_norm / table.rows[i - 1].at_resonance.vx_norm;
    table.min_ratio = std::min(table.min_ratio, ratio);
    if (!(ratio > 1.0)) table.strictly_increasing = false;
  }
  if (!table.rows.empty()) {
    double ref = table.rows.back().at_resonance.forcing_discrete;
    for (const auto& r : table.rows)
      table.forcing_spread = std::max(table.forcing_spread, std::abs(r.at_resonance.forcing_discrete / ref - 1.0));
  }
  return table;
}

}  // namespace kvwave
