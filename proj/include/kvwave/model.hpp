#pragma once

#include <complex>
#include <string>
#include <vector>

namespace kvwave {

using cplx = std::complex<double>;

struct Interval {
  double lo = 0.0;
  double hi = 1.0;
};

// Coupled system parameters: wave speed c of the second component,
// Kelvin-Voigt amplitude d, and the interval where the damping acts.
struct ModelParams {
  double c = 4.0;
  double d = 1.0;
  Interval damping_support{0.0, 1.0};
};

class DampingProfile {
 public:
  explicit DampingProfile(const ModelParams& p) : d_(p.d), support_(p.damping_support) {}

  double operator()(double x) const {
    return (x >= support_.lo && x <= support_.hi) ? d_ : 0.0;
  }

  const Interval& support() const { return support_; }
  double amplitude() const { return d_; }

 private:
  double d_;
  Interval support_;
};

enum class Purpose { simulate, quasimode };

// Throws on invalid parameters; returns warnings that do not prevent a run.
std::vector<std::string> validate_params(const ModelParams& p, Purpose purpose);

double continuous_energy_density(cplx u_x, cplx v_x, cplx w, cplx z, double c);

}  // namespace kvwave
