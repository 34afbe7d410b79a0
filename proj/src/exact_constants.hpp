#pragma once

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_complex.hpp>

#include "kvwave/quasimode.hpp"

namespace kvwave::detail {

using mp_real = boost::multiprecision::number<boost::multiprecision::cpp_bin_float<50>,
                                              boost::multiprecision::et_off>;
using mp_cplx = boost::multiprecision::number<
    boost::multiprecision::complex_adaptor<boost::multiprecision::cpp_bin_float<50>>,
    boost::multiprecision::et_off>;

struct ExactConstants {
  int n = 0;
  mp_real c, d, omega, pi;
  mp_cplx lambda;
  mp_real a, b, r, phi;
  mp_real a_plus, a_minus, b_plus, b_minus, r_plus, r_minus, phi_plus, phi_minus;
  mp_cplx alpha_plus, alpha_minus;
  mp_real mu_plus, mu_minus;
  mp_cplx eta_plus, eta_minus;
  mp_cplx beta_plus_sq, beta_minus_sq, beta_plus, beta_minus, beta_plus_polar, beta_minus_polar;
  mp_cplx theta;
  mp_cplx A_n, B_n, A_n_prime, B_n_prime;
  mp_cplx c1_prime, c3_prime, c1, c3, omega1_trace, omega2_trace;
  mp_real sin_theta;
};

ExactConstants exact_constants(int n, double c, double d);
QuasimodeConstants to_double(const ExactConstants& e);

inline cplx to_cplx(const mp_cplx& z) {
  return {static_cast<double>(z.real()), static_cast<double>(z.imag())};
}

}  // namespace kvwave::detail
