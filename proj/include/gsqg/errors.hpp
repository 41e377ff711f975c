#pragma once

#include <stdexcept>
#include <string>

namespace gsqg {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define GSQG_ERROR(Name)                          \
  class Name : public Error {                     \
   public:                                        \
    explicit Name(const std::string& what)        \
        : Error(std::string(#Name ": ") + what) {} \
  };

GSQG_ERROR(DegenerateCurve)
GSQG_ERROR(WrongParametrization)
GSQG_ERROR(InvalidExponent)
GSQG_ERROR(InvalidArgument)
GSQG_ERROR(PointOnCurve)
GSQG_ERROR(InvalidWindow)
GSQG_ERROR(SingularEvaluation)
GSQG_ERROR(TooCloseToBoundary)
GSQG_ERROR(NotStarShaped)
GSQG_ERROR(StepRejected)
GSQG_ERROR(TopologyBreach)
GSQG_ERROR(ConfigError)
GSQG_ERROR(ScaleTooLarge)
GSQG_ERROR(FlowStalled)
GSQG_ERROR(MonotonicityLost)
GSQG_ERROR(NotSimple)
GSQG_ERROR(PerturbationTooLarge)
GSQG_ERROR(OutOfHalfPlane)

#undef GSQG_ERROR

}  // namespace gsqg
