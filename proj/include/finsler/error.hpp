#pragma once

#include <stdexcept>
#include <string>

namespace finsler {

enum class Err {
  SingularPoint,
  NonAdmissible,
  DegenerateTensor,
  DegenerateFlag,
  NoConvergence,
  ChartExit,
  StepFailure,
  GridTooCoarse,
  RankLoss,
  QuadratureFailure,
  NonConvergent,
  CurvatureHypothesisViolated,
  NonReversible,
  PositivityViolation,
  InadmissibleDirection,
  FrameDegenerate,
  ConfigError,
  CheckFailure,
};

const char* to_string(Err e);

class Error : public std::runtime_error {
 public:
  Error(Err kind, const std::string& msg)
      : std::runtime_error(std::string(to_string(kind)) + ": " + msg), kind_(kind) {}
  Err kind() const { return kind_; }

 private:
  Err kind_;
};

[[noreturn]] inline void raise(Err kind, const std::string& msg) { throw Error(kind, msg); }

}  // namespace finsler
