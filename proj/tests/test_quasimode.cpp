#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "kvwave/error.hpp"
#include "kvwave/quasimode.hpp"

using namespace kvwave;

TEST_CASE("resonant frequency") {
  CHECK(std::abs(omega_n(1, 4.0) - 12.6192) <= 5e-4);
  const double c = 4.0, n = 100.0;
  double asym = std::sqrt(c) * (2.0 * n * M_PI + 1.0 / (n * 4.0 * M_PI * (c - 1.0)));
  CHECK(std::abs(omega_n(100, c) - asym) <= 1e-5);
  double prev = 2.0;
  for (int k : {10, 100, 1000}) {
    double ratio = omega_n(k, c) / (2.0 * M_PI * k * std::sqrt(c));
    CHECK(std::abs(ratio - 1.0) < std::abs(prev - 1.0) + 1e-15);
    CHECK(std::abs(ratio - 1.0) < 1e-2);
    prev = ratio;
  }
  CHECK(omega_of_wavenumber(2.0 * M_PI, c) == doctest::Approx(omega_n(1, c)));
  CHECK(discrete_omega_n(3, c, 1 << 16) == doctest::Approx(omega_n(3, c)).epsilon(1e-7));
  CHECK(discrete_omega_n(3, c, 256) > omega_n(3, c));
}

TEST_CASE("constants at n = 100") {
  QuasimodeConstants k = constants(100, 4.0, 1.0);
  CHECK(std::abs(k.mu_plus - 2.0) <= 1e-3);
  CHECK(std::abs(k.A_n - 0.75) <= 1e-2);
  CHECK(k.identity_residual <= 1e-8);
  CHECK(defining_identity_residual(100, 4.0, 1.0) <= 1e-8);
  CHECK(k.lambda == cplx(0.0, k.omega));
}

TEST_CASE("polar and principal square roots of beta^2") {
  for (int n : {10, 100}) {
    QuasimodeConstants k = constants(n, 4.0, 1.0);
    for (auto [sel, polar, sq] : {std::tuple{k.beta_plus, k.beta_plus_polar, k.beta_plus_sq},
                                  std::tuple{k.beta_minus, k.beta_minus_polar, k.beta_minus_sq}}) {
      double scale = std::abs(sel);
      CHECK(std::min(std::abs(sel - polar), std::abs(sel + polar)) <= 1e-10 * scale);
      CHECK(std::abs(sel * sel - sq) <= 1e-10 * std::abs(sq));
    }
    CHECK(k.beta_minus.real() > 0.0);
  }
}

TEST_CASE("constants reject the excluded parameter range") {
  CHECK_THROWS_AS(constants(1, 0.5, 1.0), Error);
  CHECK_THROWS_AS(constants(1, 4.0, 0.0), Error);
  CHECK_THROWS_AS(constants(0, 4.0, 1.0), Error);
  QuasimodeConstants k = constants(3, 4.0, 1.0);
  CHECK_FALSE(k.sin_theta_degenerate);
  CHECK_NOTHROW(require_nondegenerate_theta(k));
  k.sin_theta_degenerate = true;
  CHECK_THROWS_AS(require_nondegenerate_theta(k), Error);
}

TEST_CASE("forcing values") {
  ForcingValues right = forcing_eval(1, 4.0, 0.5);
  CHECK(right.F1 == cplx(0.0));
  CHECK(right.G1 == cplx(0.0));
  CHECK(right.F2 == cplx(0.0));
  CHECK(right.G2 == cplx(0.0));
  CHECK(forcing_eval(1, 4.0, -0.125).G1.real() == doctest::Approx(-0.11254).epsilon(1e-4));
  for (int n : {1, 7, 50}) CHECK(std::abs(forcing_eval(n, 4.0, -1.0).G1) < 1e-14);
}

TEST_CASE("forcing norm") {
  double lo = 1e300, hi = 0.0;
  for (int n = 1; n <= 200; ++n) {
    ForcingNorm f = forcing_norm(n, 4.0);
    CHECK(std::isfinite(f.quadrature));
    CHECK(f.quadrature == doctest::Approx(f.closed_form).epsilon(1e-10));
    lo = std::min(lo, f.quadrature);
    hi = std::max(hi, f.quadrature);
  }
  CHECK(hi / lo < 1.01);
  ForcingNorm far = forcing_norm(200, 4.0);
  // the claimed formula tends to 1 since mu- -> 1, yet its stated limit is 0.75
  CHECK(far.claimed_formula == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(far.claimed_limit == doctest::Approx(0.75));
  // the integral itself tends to c/2 + c^2/2 = 10 at c = 4
  CHECK(far.quadrature == doctest::Approx(10.0).epsilon(1e-3));
}

TEST_CASE("closed-form solution") {
  for (int n : {1, 5, 20}) {
    QuasimodeConstants k = constants(n, 4.0, 1.0);
    ClosedFormValue end = closed_form_solution(k, 1.0);
    CHECK(std::abs(end.u1) <= 1e-12 * std::max(1.0, std::abs(closed_form_solution(k, 0.5).u1)));
    CHECK(std::abs(end.v1) <= 1e-12 * std::max(1.0, std::abs(closed_form_solution(k, 0.5).v1)));
  }
  QuasimodeConstants k10 = constants(10, 4.0, 1.0);
  CHECK(interface_mismatch(k10) <= 1e-6);
  for (int n : {2, 8, 32}) CHECK(interface_mismatch(constants(n, 4.0, 1.0)) <= 1e-5 / n);
}

TEST_CASE("expanded and characteristic forms of v1_x agree") {
  for (int n : {2, 6}) {
    QuasimodeConstants k = constants(n, 4.0, 1.0);
    for (double x : {-0.9, -0.5, -0.25, -0.01}) {
      cplx a = closed_form_solution(k, x).v1x, b = characteristic_v1x(k, x);
      CHECK(std::abs(a - b) <= 1e-8 * std::max(1.0, std::abs(b)));
    }
  }
}

TEST_CASE("discrete cross-validation at n = 4") {
  DiscreteQuasimodeSolve s = solve_discrete_quasimode(4, 4.0, 1.0, 1024);
  CHECK(s.vx_mismatch <= 0.03);
  CHECK(s.vx_norm == doctest::Approx(s.vx_exact).epsilon(0.03));
  CHECK_THROWS_AS(solve_discrete_quasimode(8, 4.0, 1.0, 64), Error);
}

TEST_CASE("blow-up table") {
  BlowupTable t = blowup_experiment({2, 4, 8, 16}, 4.0, 1.0);
  CHECK(t.strictly_increasing);
  CHECK(t.min_ratio >= 1.2);
  CHECK(t.forcing_spread < 0.1);
  REQUIRE(t.rows.size() == 4);
  // growth close to linear in n; the claimed n^{3/2} trace order does not show
  double order = std::log(t.rows[3].at_resonance.vx_norm / t.rows[0].at_resonance.vx_norm) / std::log(8.0);
  CHECK(order == doctest::Approx(1.0).epsilon(0.1));
}

TEST_CASE("expansion audit examples") {
  std::vector<int> ns{10, 20, 40, 80};
  CHECK(expansion_audit("omega_n", ns, 4.0, 1.0).fitted_order >= 2.7);
  CHECK(expansion_audit("mu_minus", ns, 4.0, 1.0).fitted_order >= 1.7);
  CHECK(expansion_audit("theta", ns, 4.0, 1.0).fitted_order >= 0.7);
  CHECK_THROWS_AS(expansion_audit("no_such_quantity", ns, 4.0, 1.0), Error);
  for (int n : ns) CHECK(defining_identity_residual(n, 4.0, 1.0) <= 1e-10 * n);
  auto names = audit_registry();
  CHECK(std::find(names.begin(), names.end(), "omega_n") != names.end());
}
