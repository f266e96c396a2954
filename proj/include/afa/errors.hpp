#pragma once

#include <stdexcept>
#include <string>

namespace afa {

// Root of the library error hierarchy. The CLI maps ValidationError to
// exit code 2 and NumericalError to exit code 3.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ValidationError : public Error {
 public:
  using Error::Error;
};

class NumericalError : public Error {
 public:
  using Error::Error;
};

#define AFA_DEFINE_ERROR(NAME, BASE)                        \
  class NAME : public BASE {                                \
   public:                                                  \
    explicit NAME(const std::string& msg)                   \
        : BASE(std::string(#NAME) + ": " + msg) {}          \
  };

AFA_DEFINE_ERROR(DimensionMismatch, ValidationError)
AFA_DEFINE_ERROR(NonFinite, ValidationError)
AFA_DEFINE_ERROR(NOutOfRange, ValidationError)
AFA_DEFINE_ERROR(IndexOutOfRange, ValidationError)
AFA_DEFINE_ERROR(MaskOutOfRange, ValidationError)
AFA_DEFINE_ERROR(WeightOutOfRange, ValidationError)
AFA_DEFINE_ERROR(WidthOutOfRange, ValidationError)
AFA_DEFINE_ERROR(DegenerateBand, ValidationError)
AFA_DEFINE_ERROR(NonPositiveScale, ValidationError)
AFA_DEFINE_ERROR(NegativeWeight, ValidationError)
AFA_DEFINE_ERROR(EmptyBackground, ValidationError)
AFA_DEFINE_ERROR(NTooLargeForPermutations, ValidationError)
AFA_DEFINE_ERROR(ParseError, ValidationError)

AFA_DEFINE_ERROR(DegenerateKernel, NumericalError)
AFA_DEFINE_ERROR(SingularSystem, NumericalError)
AFA_DEFINE_ERROR(NumericalFailure, NumericalError)
AFA_DEFINE_ERROR(Overflow, NumericalError)

#undef AFA_DEFINE_ERROR

// A kernel whose weights vanish on every coalition size below n leaves the
// least-squares problem with no information about individual features.
class AllZeroInterior : public DegenerateKernel {
 public:
  explicit AllZeroInterior(const std::string& msg)
      : DegenerateKernel("AllZeroInterior: " + msg) {}
};

}  // namespace afa
