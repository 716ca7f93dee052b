#pragma once

#include <stdexcept>
#include <string>

namespace nsk {

/// Base of every error raised by the toolkit. `kind()` is the stable
/// machine-readable name used in reports and exit diagnostics.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& what)
      : std::runtime_error(what), kind_(std::move(kind)) {}
  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

#define NSK_DEFINE_ERROR(Name)                                      \
  class Name : public Error {                                       \
   public:                                                          \
    explicit Name(const std::string& what) : Error(#Name, what) {} \
  };

// model-core
NSK_DEFINE_ERROR(ConstraintViolation)
NSK_DEFINE_ERROR(CriticalityViolation)
NSK_DEFINE_ERROR(GridMismatch)
NSK_DEFINE_ERROR(InvalidArgument)

// spectral-engine
NSK_DEFINE_ERROR(EmptyLowBand)
NSK_DEFINE_ERROR(DerivativeOrderExceeded)

// analysis-harness
NSK_DEFINE_ERROR(WindowUncovered)
NSK_DEFINE_ERROR(MissingConstituent)
NSK_DEFINE_ERROR(NonPositiveSeries)
NSK_DEFINE_ERROR(WindowOutsideTrust)

// nonlinear-solver
NSK_DEFINE_ERROR(ValidityExceeded)
NSK_DEFINE_ERROR(RangeViolation)
NSK_DEFINE_ERROR(StepRejected)

// cli-io
NSK_DEFINE_ERROR(ParseError)
NSK_DEFINE_ERROR(ValidationError)
NSK_DEFINE_ERROR(IoError)

#undef NSK_DEFINE_ERROR

}  // namespace nsk
