#include "kvwave/model.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "kvwave/error.hpp"

namespace kvwave {

std::vector<std::string> validate_params(const ModelParams& p, Purpose purpose) {
  std::vector<std::string> warnings;
  if (!(p.c > 0.0)) throw Error(ErrorCode::NonPositiveC, "c must be positive");
  if (!(p.d >= 0.0)) throw Error(ErrorCode::NegativeD, "d must be nonnegative");
  const auto& s = p.damping_support;
  if (!(s.lo < s.hi) || s.lo < -1.0 || s.hi > 1.0)
    throw Error(ErrorCode::EmptySupport, "damping support must satisfy -1 <= lo < hi <= 1");

  if (purpose == Purpose::quasimode) {
    if (p.c <= 1.0) throw Error(ErrorCode::ValidationError, "quasimode construction needs c > 1");
    if (p.d <= 0.0) throw Error(ErrorCode::ValidationError, "quasimode construction needs d > 0");
    double twice_root = 2.0 * std::sqrt(p.c);
    if (std::abs(twice_root - std::round(twice_root)) > 1e-12) {
      std::ostringstream os;
      os << "2*sqrt(c) = " << twice_root
         << " is not an integer; sin(2*sqrt(c)*n*pi) may come close to zero for some n";
      warnings.push_back(os.str());
    }
    if (s.lo != 0.0 || s.hi != 1.0)
      warnings.push_back("closed-form quasimode assumes damping on [0,1]");
  }
  return warnings;
}

double continuous_energy_density(cplx u_x, cplx v_x, cplx w, cplx z, double c) {
  return 0.5 * (std::norm(w) + std::norm(z) + std::norm(u_x) + c * std::norm(v_x));
}

}  // namespace kvwave
