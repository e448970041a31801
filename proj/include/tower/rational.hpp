#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <optional>
#include <string>

#include "tower/errors.hpp"

namespace tower {

using Int = mpz_class;
using Rat = mpq_class;

// Floor of p/q as an integer (mpz division truncates toward zero, so do it
// by hand for negatives).
inline Int rat_floor(const Rat& q) {
  Int f;
  mpz_fdiv_q(f.get_mpz_t(), q.get_num().get_mpz_t(), q.get_den().get_mpz_t());
  return f;
}

inline bool rat_is_integer(const Rat& q) { return q.get_den() == 1; }

inline Rat rat_midpoint(const Rat& a, const Rat& b) { return (a + b) / 2; }

// Canonical text: "p" when the denominator is 1, "p/q" otherwise.
inline std::string rat_to_string(const Rat& q) {
  return q.get_str();
}

inline std::string int_to_string(const Int& z) { return z.get_str(); }

// Strict rational literal: optional sign, digits, optional "/digits" with a
// nonzero denominator. Rejects trailing garbage.
Rat parse_rational(const std::string& text, std::size_t base_offset = 0);
Int parse_integer(const std::string& text, std::size_t base_offset = 0);

// Cantor pairing on naturals, used to fold component enumerations of product
// shapes into one index stream. Strictly increasing in each argument.
inline Int cantor2(const Int& x, const Int& y) {
  Int s = x + y;
  return s * (s + 1) / 2 + y;
}

inline void uncantor2(const Int& i, Int& x, Int& y) {
  // d = floor((sqrt(8i+1)-1)/2), the diagonal index.
  Int t = 8 * i + 1;
  Int r;
  mpz_sqrt(r.get_mpz_t(), t.get_mpz_t());
  Int d = (r - 1) / 2;
  y = i - d * (d + 1) / 2;
  x = d - y;
}

inline Int cantor3(const Int& x, const Int& y, const Int& z) {
  return cantor2(cantor2(x, y), z);
}

inline void uncantor3(const Int& i, Int& x, Int& y, Int& z) {
  Int xy;
  uncantor2(i, xy, z);
  uncantor2(xy, x, y);
}

}  // namespace tower
