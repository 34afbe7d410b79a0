#include "kvwave/error.hpp"

namespace kvwave {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonPositiveC: return "NonPositiveC";
    case ErrorCode::NegativeD: return "NegativeD";
    case ErrorCode::EmptySupport: return "EmptySupport";
    case ErrorCode::InvalidMesh: return "InvalidMesh";
    case ErrorCode::MisalignedSupport: return "MisalignedSupport";
    case ErrorCode::SingularMass: return "SingularMass";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NearSingularShift: return "NearSingularShift";
    case ErrorCode::ResidualTooLarge: return "ResidualTooLarge";
    case ErrorCode::EnergyBalance: return "EnergyBalance";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::EmptyWindow: return "EmptyWindow";
    case ErrorCode::NonPositiveEnergy: return "NonPositiveEnergy";
    case ErrorCode::DegenerateDenominator: return "DegenerateDenominator";
    case ErrorCode::SinThetaDegenerate: return "SinThetaDegenerate";
    case ErrorCode::MeshTooCoarse: return "MeshTooCoarse";
    case ErrorCode::RegistryMiss: return "RegistryMiss";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::ValidationError: return "ValidationError";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace kvwave
