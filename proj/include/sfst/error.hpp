#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace sfst {

enum class ErrorCode {
  InvalidArgument,
  InadmissibleNorm,
  ZeroVector,
  DegenerateTensor,
  NotAFinslerFunction,
  OutsideChart,
  NonPositiveLambda,
  OnExceptionalBundle,
  NotCausal,
  NoFutureRoot,
  ZeroVelocityBreakdown,
  NewtonDivergence,
  IsGeodesic,
  SceneError,
};

std::string_view error_name(ErrorCode code);

/// True for errors that signal a numerical fault rather than bad input.
bool is_numerical_fault(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace sfst
