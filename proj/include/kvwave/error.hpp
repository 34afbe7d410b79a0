#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace kvwave {

enum class ErrorCode {
  NonPositiveC,
  NegativeD,
  EmptySupport,
  InvalidMesh,
  MisalignedSupport,
  SingularMass,
  DimensionMismatch,
  NearSingularShift,
  ResidualTooLarge,
  EnergyBalance,
  NoConvergence,
  EmptyWindow,
  NonPositiveEnergy,
  DegenerateDenominator,
  SinThetaDegenerate,
  MeshTooCoarse,
  RegistryMiss,
  ParseError,
  ValidationError,
  IoError,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail)
      : std::runtime_error(std::string(to_string(code)) + ": " + detail), code_(code), detail_(detail) {}

  ErrorCode code() const noexcept { return code_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
};

}  // namespace kvwave
