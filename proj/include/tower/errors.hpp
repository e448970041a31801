#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace tower {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed textual input (order-type expressions, Hahn literals, rationals,
// element forms). Carries the byte offset of the first offending character.
struct ParseError : Error {
  std::size_t pos;
  ParseError(const std::string& msg, std::size_t at)
      : Error(msg + " (at offset " + std::to_string(at) + ")"), pos(at) {}
};

// Argument outside an operation's domain (negative level, log of a value
// below 1, element not matching the expected order type, ...).
struct DomainError : Error {
  using Error::Error;
};

// Interval arithmetic ran out of usable digits, or a tower evaluation left
// the representable exponent range. Distinct from DomainError so callers can
// retry at higher precision.
struct PrecisionError : Error {
  using Error::Error;
};

// A structural precondition that is only spot-checked was found violated:
// non-dense handle fed to a back-and-forth, non-monotone pin list, corrupt
// serialized table.
struct StructuralError : Error {
  using Error::Error;
};

// Construction requested over an order that cannot support it (synthesis
// over a non-dense class order).
struct UnsupportedConstruction : Error {
  using Error::Error;
};

}  // namespace tower
