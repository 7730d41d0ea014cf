#pragma once

#include <stdexcept>
#include <string>

namespace dqform {

// Base class of all library errors. what() always starts with the error
// name, so callers (and the CLI) can classify failures from the message.
class Error : public std::runtime_error {
 public:
  Error(const std::string& name, const std::string& detail)
      : std::runtime_error(detail.empty() ? name : name + ": " + detail) {}
};

#define DQFORM_DEFINE_ERROR(Name)                                      \
  class Name : public Error {                                          \
   public:                                                             \
    explicit Name(const std::string& detail = "") : Error(#Name, detail) {} \
  }

DQFORM_DEFINE_ERROR(NonAppreciableDivisor);
DQFORM_DEFINE_ERROR(DomainError);
DQFORM_DEFINE_ERROR(ZeroDivisor);
DQFORM_DEFINE_ERROR(BadAxis);
DQFORM_DEFINE_ERROR(NotImaginary);
DQFORM_DEFINE_ERROR(NotUnit);
DQFORM_DEFINE_ERROR(NonAppreciable);
DQFORM_DEFINE_ERROR(StepRejected);
DQFORM_DEFINE_ERROR(DimensionMismatch);
DQFORM_DEFINE_ERROR(Singular);
DQFORM_DEFINE_ERROR(NotHermitian);
DQFORM_DEFINE_ERROR(ConvergenceFailure);
DQFORM_DEFINE_ERROR(MissingTwists);
DQFORM_DEFINE_ERROR(SizeMismatch);
DQFORM_DEFINE_ERROR(NotACycle);
DQFORM_DEFINE_ERROR(Disconnected);
DQFORM_DEFINE_ERROR(AdjacencyInvalid);
DQFORM_DEFINE_ERROR(NoTarget);
DQFORM_DEFINE_ERROR(Unstable);
DQFORM_DEFINE_ERROR(ParseError);
DQFORM_DEFINE_ERROR(IoError);

#undef DQFORM_DEFINE_ERROR

}  // namespace dqform
