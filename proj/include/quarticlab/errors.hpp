#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qlab {

enum class ErrorKind {
  InvalidArgument,
  FieldMismatch,
  DegenerateConfiguration,
  PartialLocus,
  DegenerateNet,
  ComponentLine,
  InvariantViolation,
  CorankTwo,
  SingularPoint,
  NoFit,
  AmbiguousFit,
  FieldTooSmall,
  NotEverywhereTangent,
  CommonComponent,
};

std::string_view to_string(ErrorKind kind);

// Every failure raised by the library carries one of the kinds above so that
// callers (and the CLI) can map it to a report entry or exit code.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void raise(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

inline void require(bool condition, const std::string& what) {
  if (!condition) raise(ErrorKind::InvalidArgument, what);
}

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::FieldMismatch: return "FieldMismatch";
    case ErrorKind::DegenerateConfiguration: return "DegenerateConfiguration";
    case ErrorKind::PartialLocus: return "PartialLocus";
    case ErrorKind::DegenerateNet: return "DegenerateNet";
    case ErrorKind::ComponentLine: return "ComponentLine";
    case ErrorKind::InvariantViolation: return "InvariantViolation";
    case ErrorKind::CorankTwo: return "CorankTwo";
    case ErrorKind::SingularPoint: return "SingularPoint";
    case ErrorKind::NoFit: return "NoFit";
    case ErrorKind::AmbiguousFit: return "AmbiguousFit";
    case ErrorKind::FieldTooSmall: return "FieldTooSmall";
    case ErrorKind::NotEverywhereTangent: return "NotEverywhereTangent";
    case ErrorKind::CommonComponent: return "CommonComponent";
  }
  return "Unknown";
}

}  // namespace qlab
