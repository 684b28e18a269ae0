#pragma once

#include <stdexcept>
#include <string>

namespace flipforge {

// Every failure mode gets its own type so callers (and the CLI) can map
// errors to exit codes without string matching.
struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct InvalidGluing : Error {
  using Error::Error;
};
struct BoundaryWithoutMarkedPoint : Error {
  using Error::Error;
};
struct SignatureMismatch : Error {
  using Error::Error;
};
struct NotTriangulable : Error {
  using Error::Error;
};
struct NotFlippable : Error {
  using Error::Error;
};
struct BaseMismatch : Error {
  using Error::Error;
};
struct DisconnectedWord : Error {
  using Error::Error;
};
struct NotRealizable : Error {
  using Error::Error;
};
struct NotInStratum : Error {
  using Error::Error;
};
struct PreconditionUnmet : Error {
  using Error::Error;
};
struct HypothesisUnmet : Error {
  using Error::Error;
};
struct ShapeMismatch : Error {
  using Error::Error;
};
struct SearchBudgetExceeded : Error {
  using Error::Error;
};
struct CensusBudgetExceeded : Error {
  using Error::Error;
};
struct SchemaError : Error {
  std::string pointer;  // JSON-pointer location of the offending value
  SchemaError(const std::string& msg, std::string ptr)
      : Error(msg + " (at " + ptr + ")"), pointer(std::move(ptr)) {}
};
struct InternalInvariantViolation : Error {
  using Error::Error;
};

namespace detail {
inline void check(bool cond, const char* what) {
  if (!cond) throw InternalInvariantViolation(std::string("internal invariant violated: ") + what);
}
}  // namespace detail

}  // namespace flipforge

#define FLIPFORGE_CHECK(cond) ::flipforge::detail::check((cond), #cond)
