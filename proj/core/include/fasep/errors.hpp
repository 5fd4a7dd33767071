#pragma once

#include <stdexcept>
#include <string>

namespace fasep {

// Error category, used by the CLI to map exceptions onto exit codes
// (spec/input -> 2, dynamics -> 3, capacity -> 4).
enum class ErrorKind { Spec, Dynamics, Capacity };

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

#define FASEP_DEFINE_ERROR(Name, Kind)                                    \
  struct Name : Error {                                                   \
    explicit Name(const std::string& w) : Error(ErrorKind::Kind, w) {}    \
  }

FASEP_DEFINE_ERROR(ParseError, Spec);
FASEP_DEFINE_ERROR(DomainError, Spec);
FASEP_DEFINE_ERROR(InvalidCount, Spec);
FASEP_DEFINE_ERROR(InconsistentGaps, Spec);
FASEP_DEFINE_ERROR(NotInImage, Spec);
FASEP_DEFINE_ERROR(BadAnchor, Spec);
FASEP_DEFINE_ERROR(InvalidWindow, Spec);
FASEP_DEFINE_ERROR(EmptyDistribution, Spec);
FASEP_DEFINE_ERROR(InsufficientSamples, Spec);
FASEP_DEFINE_ERROR(NoRecords, Spec);
FASEP_DEFINE_ERROR(MaxEventsExceeded, Dynamics);
FASEP_DEFINE_ERROR(NotAbsorbing, Dynamics);
FASEP_DEFINE_ERROR(TooLarge, Capacity);

#undef FASEP_DEFINE_ERROR

}  // namespace fasep
