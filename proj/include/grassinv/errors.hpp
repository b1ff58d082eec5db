#ifndef GRASSINV_ERRORS_HPP
#define GRASSINV_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace grassinv {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define GRASSINV_DEFINE_ERROR(Name)                                  \
  class Name : public Error {                                        \
   public:                                                           \
    explicit Name(const std::string& what) : Error(#Name ": " + what) {} \
  }

GRASSINV_DEFINE_ERROR(RankDeficient);
GRASSINV_DEFINE_ERROR(NoConvergence);
GRASSINV_DEFINE_ERROR(NotPSD);
GRASSINV_DEFINE_ERROR(DomainError);
GRASSINV_DEFINE_ERROR(HypothesisViolated);
GRASSINV_DEFINE_ERROR(SpectrumOutOfRange);
GRASSINV_DEFINE_ERROR(DimensionMismatch);

#undef GRASSINV_DEFINE_ERROR

}  // namespace grassinv

#endif  // GRASSINV_ERRORS_HPP
