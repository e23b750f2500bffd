#pragma once

#include <stdexcept>
#include <string>

namespace bifurlab {

enum class ErrorKind {
  kInvalidArgument,
  kDomainError,
  kStepRefinementNeeded,
  kResourceLimit,
  kUndecided,
  kNotConverged,
  kIo,
};

const char* to_string(ErrorKind kind);

/// Library-wide exception. The kind maps onto CLI exit codes.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, what);
}

inline void require(bool condition, const std::string& what) {
  if (!condition) fail(ErrorKind::kInvalidArgument, what);
}

}  // namespace bifurlab
