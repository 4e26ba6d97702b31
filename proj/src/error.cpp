#include "sfst/error.hpp"

namespace sfst {

std::string_view error_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::InadmissibleNorm: return "InadmissibleNorm";
    case ErrorCode::ZeroVector: return "ZeroVector";
    case ErrorCode::DegenerateTensor: return "DegenerateTensor";
    case ErrorCode::NotAFinslerFunction: return "NotAFinslerFunction";
    case ErrorCode::OutsideChart: return "OutsideChart";
    case ErrorCode::NonPositiveLambda: return "NonPositiveLambda";
    case ErrorCode::OnExceptionalBundle: return "OnExceptionalBundle";
    case ErrorCode::NotCausal: return "NotCausal";
    case ErrorCode::NoFutureRoot: return "NoFutureRoot";
    case ErrorCode::ZeroVelocityBreakdown: return "ZeroVelocityBreakdown";
    case ErrorCode::NewtonDivergence: return "NewtonDivergence";
    case ErrorCode::IsGeodesic: return "IsGeodesic";
    case ErrorCode::SceneError: return "SceneError";
  }
  return "Unknown";
}

bool is_numerical_fault(ErrorCode code) {
  return code == ErrorCode::ZeroVelocityBreakdown ||
         code == ErrorCode::NewtonDivergence ||
         code == ErrorCode::DegenerateTensor;
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(error_name(code)) + ": " + what),
      code_(code) {}

}  // namespace sfst
