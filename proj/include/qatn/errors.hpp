#pragma once

#include <stdexcept>
#include <string>

namespace qatn {

// Every error raised by the library derives from Error so callers can catch
// a single type; the concrete class names the failed contract.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define QATN_DEFINE_ERROR(Name)              \
  class Name : public Error {                \
   public:                                   \
    using Error::Error;                      \
  }

QATN_DEFINE_ERROR(InvalidArgument);
QATN_DEFINE_ERROR(InvalidPermutation);
QATN_DEFINE_ERROR(InvalidReshape);
QATN_DEFINE_ERROR(ContractionMismatch);
QATN_DEFINE_ERROR(ShapeError);
QATN_DEFINE_ERROR(SizeError);
QATN_DEFINE_ERROR(NormalizationError);
QATN_DEFINE_ERROR(TableChainError);
QATN_DEFINE_ERROR(DuplicateRuleError);
QATN_DEFINE_ERROR(DegenerateStartError);
QATN_DEFINE_ERROR(HermiticityError);
QATN_DEFINE_ERROR(InsufficientDataError);
QATN_DEFINE_ERROR(MismatchError);
QATN_DEFINE_ERROR(ParseError);

#undef QATN_DEFINE_ERROR

}  // namespace qatn
