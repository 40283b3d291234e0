#pragma once

#include <stdexcept>
#include <string>

namespace jdl {

class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& what)
      : std::runtime_error(kind + ": " + what), kind_(std::move(kind)) {}
  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

#define JDL_DEFINE_ERROR(Name)                                          \
  class Name : public Error {                                           \
   public:                                                              \
    explicit Name(const std::string& what) : Error(#Name, what) {}      \
  };

JDL_DEFINE_ERROR(DomainViolation)
JDL_DEFINE_ERROR(OrderUnsupported)
JDL_DEFINE_ERROR(DimensionMismatch)
JDL_DEFINE_ERROR(SamplingExhausted)
JDL_DEFINE_ERROR(NotContained)
JDL_DEFINE_ERROR(DegreeUnsupported)
JDL_DEFINE_ERROR(InconsistentOracle)
JDL_DEFINE_ERROR(SingularSystem)
JDL_DEFINE_ERROR(EvenDimension)
JDL_DEFINE_ERROR(DegenerateCurvature)
JDL_DEFINE_ERROR(SingularOmega)
JDL_DEFINE_ERROR(ZeroConformalFactor)
JDL_DEFINE_ERROR(OracleMismatch)
JDL_DEFINE_ERROR(StepOutOfDomain)
JDL_DEFINE_ERROR(NotBasic)
JDL_DEFINE_ERROR(NotABisection)
JDL_DEFINE_ERROR(NonComposableSample)
JDL_DEFINE_ERROR(ChartIndexInvalid)
JDL_DEFINE_ERROR(ZeroMomentCovector)
JDL_DEFINE_ERROR(NonInvariantBracket)
JDL_DEFINE_ERROR(InconsistentConnection)
JDL_DEFINE_ERROR(UnknownId)
JDL_DEFINE_ERROR(ConfigError)

#undef JDL_DEFINE_ERROR

}  // namespace jdl
