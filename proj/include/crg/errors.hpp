#pragma once

#include <stdexcept>
#include <string>

namespace crg {

struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Division by an exact zero; kept distinct so callers can tell it apart
// from structural errors.
struct DivideByZero : Error {
  DivideByZero() : Error("division by zero") {}
};

struct ConductorError : Error {
  explicit ConductorError(const std::string& msg) : Error(msg) {}
};

struct CapExceeded : Error {
  explicit CapExceeded(const std::string& msg) : Error(msg) {}
};

struct StructureError : Error {
  explicit StructureError(const std::string& msg) : Error(msg) {}
};

struct ParseError : Error {
  explicit ParseError(const std::string& msg) : Error(msg) {}
};

}  // namespace crg
