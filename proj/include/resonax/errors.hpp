#pragma once

#include <stdexcept>
#include <string>

namespace resonax {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define RESONAX_DEFINE_ERROR(Name)          \
  class Name : public Error {               \
   public:                                  \
    explicit Name(const std::string& what)  \
        : Error(#Name ": " + what) {}       \
  };

// Configuration ingestion.
RESONAX_DEFINE_ERROR(SchemaError)
RESONAX_DEFINE_ERROR(ValidationError)

// Numerical domain errors.
RESONAX_DEFINE_ERROR(BranchPointError)
RESONAX_DEFINE_ERROR(InvalidParameter)
RESONAX_DEFINE_ERROR(AnalyticityViolation)
RESONAX_DEFINE_ERROR(UnsupportedPartialWave)

// Lippmann-Schwinger solver.
RESONAX_DEFINE_ERROR(OnCutError)
RESONAX_DEFINE_ERROR(SingularKernel)
RESONAX_DEFINE_ERROR(LinearSolveFailure)

// Continuation and root search.
RESONAX_DEFINE_ERROR(TruncatedSMatrixSingular)
RESONAX_DEFINE_ERROR(InvalidRegion)
RESONAX_DEFINE_ERROR(ContourTooClose)
RESONAX_DEFINE_ERROR(NonIntegerWinding)
RESONAX_DEFINE_ERROR(NoConvergence)

#undef RESONAX_DEFINE_ERROR

}  // namespace resonax
