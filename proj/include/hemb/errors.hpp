#pragma once

#include <stdexcept>
#include <string>

namespace hemb {

enum class ErrorKind {
  Shape,
  Capacity,
  Input,
  SchemeConstraint,
  Structure,
  Composition,
  Saturation,
  Geometry,
  Validation,
  FastForward,
};

const char* to_string(ErrorKind kind);

/// Single exception type for the library; the kind drives CLI exit codes.
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

}  // namespace hemb
