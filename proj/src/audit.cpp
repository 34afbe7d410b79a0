#include <boost/math/constants/constants.hpp>
#include <cmath>
#include <functional>
#include <map>

#include "exact_constants.hpp"
#include "kvwave/error.hpp"
#include "kvwave/quasimode.hpp"

namespace kvwave {

namespace {

using detail::ExactConstants;
using detail::mp_cplx;
using detail::mp_real;

struct Entry {
  double claimed;
  bool relative;  // asymptotic equivalence, residual |exact/model - 1|
  std::function<std::pair<mp_cplx, mp_cplx>(const ExactConstants&)> eval;
};

const std::map<std::string, Entry>& registry() {
  static const std::map<std::string, Entry> table = [] {
    std::map<std::string, Entry> t;
    const mp_cplx I(0, 1);
    auto expi = [](const mp_real& a) { return mp_cplx(cos(a), sin(a)); };

    t["omega_n"] = {3, false, [](const ExactConstants& k) {
      const auto &c = k.c, &pi = k.pi;
      mp_real n = k.n;
      mp_real model = sqrt(c) * (2 * n * pi + 1 / (4 * pi * (c - 1) * n) -
                                 c / (32 * pi * pi * pi * (c - 1) * (c - 1) * (c - 1) * n * n * n));
      return std::pair{mp_cplx(k.omega), mp_cplx(model)};
    }};
    t["eta_plus"] = {3, false, [](const ExactConstants& k) {
      const auto &c = k.c, &d = k.d;
      const mp_cplx& lam = k.lambda;
      mp_real cm = c - 1;
      mp_cplx model = -lam + c / d - c / (d * d) / lam +
                      (cm * cm * cm + d * d * (c + 1) + 2 * c) / (2 * d * d * d) / (lam * lam) +
                      (cm * cm * cm * cm - cm * cm * cm - d * d * cm * (c - 2) - 2 * c) / (2 * d * d * d * d);
      return std::pair{k.eta_plus, model};
    }};
    t["eta_minus"] = {3, false, [](const ExactConstants& k) {
      const auto &c = k.c, &d = k.d;
      const mp_cplx& lam = k.lambda;
      mp_real cm = c - 1;
      mp_cplx model = -(cm * cm * cm + d * d * (c + 1)) / (2 * d * d * d) / (lam * lam) +
                      (cm * cm * cm * (2 - c) + d * d * cm * (c - 2 - 2 * c * d)) / (2 * d * d * d * d) /
                          (lam * lam * lam);
      return std::pair{k.eta_minus, model};
    }};
    t["beta_plus"] = {1, false, [](const ExactConstants& k) {
      const auto &c = k.c, &d = k.d;
      mp_cplx model = k.lambda / sqrt(c) - (c - 1) * (c - 2) / (8 * sqrt(mp_real(2)) * d * d);
      return std::pair{k.beta_plus, model};
    }};
    t["beta_plus_sq"] = {0, false, [](const ExactConstants& k) {
      return std::pair{k.beta_plus_sq, k.lambda * k.lambda / k.c};
    }};
    t["beta_minus"] = {1, false, [expi](const ExactConstants& k) {
      const auto &d = k.d, &w = k.omega, &pi = k.pi;
      mp_cplx model = sqrt(w / d) * expi(pi / 4) - 1 / (sqrt(w) * 2 * d * sqrt(d)) * expi(-pi / 4);
      return std::pair{k.beta_minus, model};
    }};
    t["beta_minus_sq"] = {2, false, [](const ExactConstants& k) {
      const auto &c = k.c, &d = k.d;
      const mp_cplx& lam = k.lambda;
      mp_real cm = c - 1;
      mp_cplx model = lam / d - 1 / (d * d) + (cm * cm * cm + d * cm + 2 * c) / (2 * c * d * d * d) / lam -
                      (cm * cm * cm * (2 - c) + d * cm * (c - 2 - 2 * c * d) + 2 * c) / (2 * c * d * d * d * d) /
                          (lam * lam);
      return std::pair{k.beta_minus_sq, model};
    }};
    t["mu_plus"] = {2, false, [](const ExactConstants& k) {
      const auto& c = k.c;
      mp_cplx model = sqrt(c) * (1 - c / (2 * (c - 1)) / (k.lambda * k.lambda));
      return std::pair{mp_cplx(k.mu_plus), model};
    }};
    t["mu_minus"] = {2, false, [](const ExactConstants& k) {
      mp_cplx model = 1 + 1 / (2 * (k.c - 1)) / (k.lambda * k.lambda);
      return std::pair{mp_cplx(k.mu_minus), model};
    }};
    t["mu_ratio"] = {2, false, [](const ExactConstants& k) {
      const auto& c = k.c;
      mp_cplx model = sqrt(c) * (1 - (c + 1) / (2 * (c - 1)) / (k.lambda * k.lambda));
      return std::pair{mp_cplx(k.mu_plus / k.mu_minus), model};
    }};
    t["A_n"] = {2, false, [](const ExactConstants& k) {
      const auto &c = k.c, &d = k.d;
      const mp_cplx& lam = k.lambda;
      mp_cplx model = (c - 1) / c * (1 + 1 / (d * lam) - 1 / ((c - 1) * lam * lam));
      return std::pair{k.A_n, model};
    }};
    t["A_n_nform"] = {2, false, [I](const ExactConstants& k) {
      const auto &c = k.c, &d = k.d, &pi = k.pi;
      mp_real n = k.n;
      mp_cplx model = (c - 1) / c * (1 + 1 / (2 * I * pi * d * sqrt(c) * n) - 1 / (4 * pi * pi * c * (c - 1) * n * n));
      return std::pair{k.A_n, model};
    }};
    t["B_n"] = {2, false, [](const ExactConstants& k) {
      const auto &c = k.c, &d = k.d;
      const mp_cplx& lam = k.lambda;
      mp_real sc = sqrt(c);
      mp_real x2 = 1 / ((c - 1) * (c - 1)) + sc * (c + 1) / (2 * (sc - 1) * (c - 1));
      mp_cplx model = (c - 1) * (sc - 1) / (2 * c) * (1 - (c - 1) / d / lam - x2 / (lam * lam));
      return std::pair{k.B_n, model};
    }};
    t["B_n_nform"] = {2, false, [I](const ExactConstants& k) {
      const auto &c = k.c, &d = k.d, &pi = k.pi;
      mp_real n = k.n, sc = sqrt(c);
      mp_real x2 = 1 / ((c - 1) * (c - 1)) + sc * (c + 1) / (2 * (sc - 1) * (c - 1));
      mp_cplx model = (c - 1) * (sc - 1) / (2 * c) *
                      (1 - (c - 1) / (2 * I * pi * d * sc) / n - x2 / (4 * pi * pi * c * n * n));
      return std::pair{k.B_n, model};
    }};
    auto a_prime_coeff = [](const mp_real& c, const mp_real& d) {
      mp_real cm = c - 1;
      return cm * cm * cm / (2 * c * d * d) + cm / (2 * c * d) + (3 - c) / (2 * d * d) + mp_real(1) / 2;
    };
    t["A_n_prime"] = {2, false, [a_prime_coeff](const ExactConstants& k) {
      const auto &c = k.c, &d = k.d;
      const mp_cplx& lam = k.lambda;
      mp_cplx model = c / (c - 1) * (1 - 1 / (d * lam) + a_prime_coeff(c, d) / (lam * lam));
      return std::pair{k.A_n_prime, model};
    }};
    t["A_n_prime_nform"] = {2, false, [a_prime_coeff, I](const ExactConstants& k) {
      const auto &c = k.c, &d = k.d, &pi = k.pi;
      mp_real n = k.n;
      mp_cplx model = c / (c - 1) *
                      (1 - 1 / (2 * I * pi * d * sqrt(c) * n) + a_prime_coeff(c, d) / (4 * pi * pi * c * n * n));
      return std::pair{k.A_n_prime, model};
    }};
    t["B_n_prime"] = {2, false, [](const ExactConstants& k) {
      const auto &c = k.c, &d = k.d, &pi = k.pi, &w = k.omega;
      const mp_cplx& lam = k.lambda;
      mp_real n = k.n, sc = sqrt(c);
      mp_real x2 = (c + sc + 3) / (2 * (c - 1) * (c - 1)) - (c + 1 + d * d) / (2 * d * d);
      mp_cplx model = n * pi * (c - sc) / (2 * w) * (-1 + c / d / lam + x2 / (lam * lam));
      return std::pair{k.B_n_prime, model};
    }};
    t["B_n_prime_nform"] = {2, false, [I](const ExactConstants& k) {
      const auto &c = k.c, &d = k.d, &pi = k.pi;
      mp_real n = k.n, sc = sqrt(c);
      mp_real x2 = (sc + 4) / (c - 1) - (c + 1 + d) / (d * d);
      mp_cplx model = (sc - 1) / 2 * (-1 + sc / (2 * I * pi * d) / n + x2 / (8 * c * pi * pi * n * n));
      return std::pair{k.B_n_prime, model};
    }};
    t["theta"] = {1, false, [](const ExactConstants& k) {
      const auto &c = k.c, &pi = k.pi;
      mp_real n = k.n;
      mp_real model = sqrt(c) * (2 * n * pi + (c * pi - 12) / (4 * c * pi * pi * (c - 1)) / n);
      return std::pair{k.theta, mp_cplx(model)};
    }};
    t["theta_omega"] = {1, false, [](const ExactConstants& k) {
      const auto &c = k.c, &w = k.omega;
      mp_real model = w * (1 - 3 / (2 * (c - 1)) / (w * w));
      return std::pair{k.theta, mp_cplx(model)};
    }};
    t["omega2_trace"] = {0, true, [](const ExactConstants& k) {
      mp_real n = k.n;
      mp_cplx model = 2 * k.pi * n * sqrt(k.c) * k.c3_prime / sin(k.theta);
      return std::pair{k.omega2_trace, model};
    }};
    t["omega1_trace"] = {0, true, [expi](const ExactConstants& k) {
      const auto &c = k.c, &d = k.d, &pi = k.pi;
      mp_real n = k.n;
      mp_real base = 2 * pi * sqrt(c) * n;
      mp_cplx model = k.c3_prime * sqrt(c / d) * expi(-pi / 4) * base * sqrt(base);
      return std::pair{k.omega1_trace, model};
    }};
    return t;
  }();
  return table;
}

}  // namespace

std::vector<std::string> audit_registry() {
  std::vector<std::string> names;
  for (const auto& [name, entry] : registry()) names.push_back(name);
  return names;
}

AuditReport expansion_audit(const std::string& name, const std::vector<int>& n_list, double c, double d) {
  auto it = registry().find(name);
  if (it == registry().end()) throw Error(ErrorCode::RegistryMiss, name);
  if (n_list.size() < 2) throw Error(ErrorCode::ValidationError, "audit needs at least two mode indices");
  const Entry& entry = it->second;

  AuditReport rep;
  rep.name = name;
  rep.claimed_order = entry.claimed;
  rep.relative = entry.relative;
  for (int n : n_list) {
    ExactConstants k = detail::exact_constants(n, c, d);
    auto [exact, model] = entry.eval(k);
    mp_real res = entry.relative ? mp_real(abs(exact / model - 1)) : mp_real(abs(exact - model));
    AuditRow row;
    row.n = n;
    row.exact_abs = static_cast<double>(abs(exact));
    row.model_abs = static_cast<double>(abs(model));
    row.residual = static_cast<double>(res);
    rep.rows.push_back(row);
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double m = static_cast<double>(rep.rows.size());
  for (const auto& r : rep.rows) {
    double lx = std::log(static_cast<double>(r.n));
    double ly = std::log(std::max(r.residual, 1e-300));
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  rep.fitted_order = -(m * sxy - sx * sy) / (m * sxx - sx * sx);
  rep.pass = rep.fitted_order >= rep.claimed_order - 0.3;
  return rep;
}

double defining_identity_residual(int n, double c, double d) {
  ExactConstants k = detail::exact_constants(n, c, d);
  mp_cplx ident = k.mu_plus * (k.lambda - k.alpha_plus / k.c) - mp_cplx(0, 2 * n * k.pi);
  return static_cast<double>(abs(ident));
}

}  // namespace kvwave
