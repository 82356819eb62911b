#pragma once

#include <stdexcept>
#include <string>

namespace sepals {

/// Base class for every error raised by the library. `name()` is the stable
/// identifier reported by the CLI in its machine-readable error output.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual const char* name() const noexcept = 0;
};

#define SEPALS_DEFINE_ERROR(Type)                                        \
  class Type : public Error {                                           \
   public:                                                              \
    using Error::Error;                                                 \
    const char* name() const noexcept override { return #Type; }        \
  }

/// Argument outside the mathematical domain of a function.
SEPALS_DEFINE_ERROR(DomainError);
/// The estimated direction vector has (numerically) zero length.
SEPALS_DEFINE_ERROR(DegenerateDirection);
/// An exceedance count or threshold outside the usable range.
SEPALS_DEFINE_ERROR(BadThreshold);
/// Every coordinate was removed by the soft threshold.
SEPALS_DEFINE_ERROR(OverShrunk);
/// The order statistic used as a Hill reference point is not positive.
SEPALS_DEFINE_ERROR(NonPositiveTail);
/// Too few exceedances, or zero variance, for a tail correlation.
SEPALS_DEFINE_ERROR(DegenerateSubsample);

#undef SEPALS_DEFINE_ERROR

}  // namespace sepals
