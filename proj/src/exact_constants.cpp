#include "exact_constants.hpp"

#include <array>
#include <boost/math/constants/constants.hpp>
#include <sstream>

#include "kvwave/error.hpp"

namespace kvwave::detail {

namespace {

using std::array;

mp_cplx cis(const mp_real& t) { return mp_cplx(cos(t), sin(t)); }

// (1 + e^{2b}) / (1 - e^{2b}), rewritten with e^{-2b} when Re b > 0
mp_cplx coth_ratio(const mp_cplx& b) {
  if (b.real() > 0) {
    mp_cplx e = exp(-2 * b);
    return (e + 1) / (e - 1);
  }
  mp_cplx e = exp(2 * b);
  return (1 + e) / (1 - e);
}

array<mp_cplx, 4> solve4(array<array<mp_cplx, 4>, 4> a, array<mp_cplx, 4> rhs, int n) {
  mp_real scale = 0;
  for (auto& row : a)
    for (auto& e : row) scale = std::max(scale, mp_real(abs(e)));
  for (int k = 0; k < 4; ++k) {
    int p = k;
    for (int i = k + 1; i < 4; ++i)
      if (abs(a[i][k]) > abs(a[p][k])) p = i;
    if (abs(a[p][k]) < scale * mp_real(1e-40)) {
      std::ostringstream os;
      os << "interface system is singular at n=" << n;
      throw Error(ErrorCode::DegenerateDenominator, os.str());
    }
    std::swap(a[k], a[p]);
    std::swap(rhs[k], rhs[p]);
    for (int i = k + 1; i < 4; ++i) {
      mp_cplx l = a[i][k] / a[k][k];
      for (int j = k; j < 4; ++j) a[i][j] -= l * a[k][j];
      rhs[i] -= l * rhs[k];
    }
  }
  array<mp_cplx, 4> x;
  for (int k = 3; k >= 0; --k) {
    mp_cplx acc = rhs[k];
    for (int j = k + 1; j < 4; ++j) acc -= a[k][j] * x[j];
    x[k] = acc / a[k][k];
  }
  return x;
}

}  // namespace

ExactConstants exact_constants(int n, double c_in, double d_in) {
  if (n < 1) throw Error(ErrorCode::ValidationError, "mode index must be >= 1");
  if (!(c_in > 1.0)) throw Error(ErrorCode::ValidationError, "quasimode constants need c > 1");
  if (!(d_in > 0.0)) throw Error(ErrorCode::ValidationError, "quasimode constants need d > 0");

  ExactConstants k;
  k.n = n;
  const mp_real c = c_in, d = d_in;
  const mp_real pi = boost::math::constants::pi<mp_real>();
  const mp_real nn = n;
  const mp_cplx I(0, 1);
  k.c = c;
  k.d = d;
  k.pi = pi;

  mp_real big = 8 * c * (c - 1) * pi * pi * nn * nn;
  mp_real delta = big * big + 32 * (c + 1) * (c * pi * nn) * (c * pi * nn) + 4 * c * c;
  const mp_real w = sqrt((8 * c * (c + 1) * nn * nn * pi * pi + 2 * c + sqrt(delta)) / (4 * c));
  const mp_cplx lam(0, w);
  k.omega = w;
  k.lambda = lam;

  k.a = -(1 - c) * (1 - c) + d * d * w * w - 4 * c / (w * w);
  k.b = -2 * d * ((1 - c) * w + 2 * c / w);
  k.r = sqrt(k.a * k.a + k.b * k.b);
  k.phi = atan2(k.b, k.a);

  const mp_real sr = sqrt(k.r);
  const mp_cplx half = cis(k.phi / 2);
  const mp_cplx q = 1 + lam * d;
  k.eta_plus = (-lam * (q - c) + w * sr * half) / (2 * q);
  k.eta_minus = (-lam * (q - c) - w * sr * half) / (2 * q);

  auto beta_sq = [&](const mp_cplx& eta) { return (c * lam * lam - lam * eta * q) / (c * q); };
  k.beta_plus_sq = beta_sq(k.eta_plus);
  k.beta_minus_sq = beta_sq(k.eta_minus);

  const mp_real dw = d * w;
  const mp_real cp = cos(k.phi / 2), sp = sin(k.phi / 2);
  k.a_plus = -(1 + c) - dw * dw + sr * (-dw * cp + sp);
  k.a_minus = -(1 + c) - dw * dw - sr * (-dw * cp + sp);
  k.b_plus = c * dw + sr * (-cp - dw * sp);
  k.b_minus = c * dw - sr * (-cp - dw * sp);
  k.r_plus = sqrt(k.a_plus * k.a_plus + k.b_plus * k.b_plus);
  k.r_minus = sqrt(k.a_minus * k.a_minus + k.b_minus * k.b_minus);
  k.phi_plus = atan2(k.b_plus, k.a_plus);
  k.phi_minus = atan2(k.b_minus, k.a_minus);
  const mp_real pref = w / sqrt(2 * c * (1 + dw * dw));
  k.beta_plus_polar = pref * sqrt(k.r_plus) * cis(k.phi_plus / 2);
  k.beta_minus_polar = pref * sqrt(k.r_minus) * cis(k.phi_minus / 2);

  k.beta_plus = sqrt(k.beta_plus_sq);
  k.beta_minus = sqrt(k.beta_minus_sq);
  if (k.beta_minus.real() < 0) k.beta_minus = -k.beta_minus;

  const mp_real s = sqrt((1 - c) * (1 - c) + 4 * c / (w * w));
  k.alpha_plus = lam / 2 * (c - 1 + s);
  k.alpha_minus = lam / 2 * (c - 1 - s);
  k.mu_plus = sqrt(2 * c) / sqrt(c + 1 - s);
  k.mu_minus = sqrt(2 * c) / sqrt(c + 1 + s);
  k.theta = -I * k.mu_minus * (lam - k.alpha_minus / c);
  k.sin_theta = abs(sin(k.theta));

  const mp_cplx &ep = k.eta_plus, &em = k.eta_minus, &ap = k.alpha_plus, &am = k.alpha_minus;
  const mp_cplx de = ep - em;
  const mp_real ratio = k.mu_plus / k.mu_minus;
  k.A_n = (em - ap) / (ep - ap);
  k.B_n = ap * de * (ratio - 1) / (2 * lam * (ep - ap));
  k.A_n_prime = k.beta_minus_sq * (ap - q * ep) / (k.beta_plus_sq * (ap - q * em));
  k.B_n_prime = I * nn * pi * ap * de * (ratio - 1) / (k.mu_plus * k.beta_plus_sq * (ap - q * em));

  // Unknowns (c1', c3', W1, W2) with W1, W2 the traces at x = -1. Rows: sum
  // and difference of the first characteristic pair at 0, then the same for
  // the second pair.
  const mp_real kk = 2 * nn * pi;
  const mp_cplx& th = k.theta;
  const mp_cplx Kp = coth_ratio(k.beta_plus), Km = coth_ratio(k.beta_minus);
  const mp_cplx bp = k.beta_plus, bm = k.beta_minus;
  const mp_real mup = k.mu_plus, mum = k.mu_minus;
  array<array<mp_cplx, 4>, 4> A;
  array<mp_cplx, 4> rhs;
  A[0] = {2 * lam / de * (ap - em), 2 * lam / de * (ep - ap), mp_cplx(0), mp_cplx(0)};
  rhs[0] = ap * (ratio - 1);
  A[1] = {2 * lam / de * (am - em), 2 * lam / de * (ep - am), mp_cplx(0), -2 * I * sin(th)};
  rhs[1] = -2 * am * sin(th) / (kk + th);
  A[2] = {2 * mup / de * bp * Kp * (ap - q * em), 2 * mup / de * bm * Km * (q * ep - ap), mp_cplx(-2),
          mp_cplx(0)};
  rhs[2] = mp_cplx(0);
  A[3] = {2 * mum / de * bp * Kp * (am - q * em), 2 * mum / de * bm * Km * (q * ep - am), mp_cplx(0),
          -2 * cos(th)};
  rhs[3] = 2 * am / (I * (kk + th)) * (1 - cos(th));
  auto x = solve4(A, rhs, n);
  k.c1_prime = x[0];
  k.c3_prime = x[1];
  k.omega1_trace = x[2];
  k.omega2_trace = x[3];
  k.c1 = x[0] / (1 - exp(2 * bp));
  k.c3 = x[1] / (1 - exp(2 * bm));
  return k;
}

QuasimodeConstants to_double(const ExactConstants& e) {
  QuasimodeConstants k;
  auto r = [](const mp_real& x) { return static_cast<double>(x); };
  k.n = e.n;
  k.c = r(e.c);
  k.d = r(e.d);
  k.omega = r(e.omega);
  k.lambda = to_cplx(e.lambda);
  k.a = r(e.a);
  k.b = r(e.b);
  k.r = r(e.r);
  k.phi = r(e.phi);
  k.a_plus = r(e.a_plus);
  k.a_minus = r(e.a_minus);
  k.b_plus = r(e.b_plus);
  k.b_minus = r(e.b_minus);
  k.r_plus = r(e.r_plus);
  k.r_minus = r(e.r_minus);
  k.phi_plus = r(e.phi_plus);
  k.phi_minus = r(e.phi_minus);
  k.alpha_plus = to_cplx(e.alpha_plus);
  k.alpha_minus = to_cplx(e.alpha_minus);
  k.mu_plus = r(e.mu_plus);
  k.mu_minus = r(e.mu_minus);
  k.eta_plus = to_cplx(e.eta_plus);
  k.eta_minus = to_cplx(e.eta_minus);
  k.beta_plus_sq = to_cplx(e.beta_plus_sq);
  k.beta_minus_sq = to_cplx(e.beta_minus_sq);
  k.beta_plus = to_cplx(e.beta_plus);
  k.beta_minus = to_cplx(e.beta_minus);
  k.beta_plus_polar = to_cplx(e.beta_plus_polar);
  k.beta_minus_polar = to_cplx(e.beta_minus_polar);
  k.theta = to_cplx(e.theta);
  k.A_n = to_cplx(e.A_n);
  k.B_n = to_cplx(e.B_n);
  k.A_n_prime = to_cplx(e.A_n_prime);
  k.B_n_prime = to_cplx(e.B_n_prime);
  k.one_minus_AA = to_cplx(1 - e.A_n * e.A_n_prime);
  k.c1_prime = to_cplx(e.c1_prime);
  k.c3_prime = to_cplx(e.c3_prime);
  k.c1 = to_cplx(e.c1);
  k.c3 = to_cplx(e.c3);
  k.omega1_trace = to_cplx(e.omega1_trace);
  k.omega2_trace = to_cplx(e.omega2_trace);
  k.sin_theta = r(e.sin_theta);
  k.sin_theta_degenerate = k.sin_theta < 1e-3;
  mp_cplx ident = e.mu_plus * (e.lambda - e.alpha_plus / e.c) - mp_cplx(0, 2 * e.n * e.pi);
  k.identity_residual = r(abs(ident));
  return k;
}

}  // namespace kvwave::detail
