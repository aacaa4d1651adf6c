#pragma once

#include <stdexcept>
#include <string>

namespace polyreach {

// Base class for all library errors. `code()` is a stable machine-readable
// identifier used by the CLI when emitting error JSON.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
  virtual const char* code() const noexcept { return "Error"; }
};

#define POLYREACH_DEFINE_ERROR(Name)                                   \
  class Name : public Error {                                          \
  public:                                                              \
    explicit Name(const std::string& what) : Error(what) {}            \
    const char* code() const noexcept override { return #Name; }       \
  }

POLYREACH_DEFINE_ERROR(DimensionMismatch);
POLYREACH_DEFINE_ERROR(NonFiniteInput);
POLYREACH_DEFINE_ERROR(EmptyPolyhedron);
POLYREACH_DEFINE_ERROR(Unbounded);
POLYREACH_DEFINE_ERROR(EliminationBlowup);
POLYREACH_DEFINE_ERROR(PatternSpaceTooLarge);
POLYREACH_DEFINE_ERROR(RegionCapExceeded);
POLYREACH_DEFINE_ERROR(ParseError);
POLYREACH_DEFINE_ERROR(ShapeError);
POLYREACH_DEFINE_ERROR(EqualityNotComplementable);

#undef POLYREACH_DEFINE_ERROR

}  // namespace polyreach
