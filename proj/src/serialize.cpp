#include <cctype>
#include <cstddef>
#include <string>

#include "tower/errors.hpp"
#include "tower/rational.hpp"

namespace tower {

namespace {

std::size_t skip_ws(const std::string& s, std::size_t p) {
  while (p < s.size() && std::isspace(static_cast<unsigned char>(s[p]))) ++p;
  return p;
}

Int read_integer(const std::string& s, std::size_t& p, std::size_t base_offset) {
  p = skip_ws(s, p);
  std::size_t start = p;
  if (p < s.size() && (s[p] == '-' || s[p] == '+')) ++p;
  std::size_t digits = p;
  while (p < s.size() && std::isdigit(static_cast<unsigned char>(s[p]))) ++p;
  if (p == digits) throw ParseError("expected integer", base_offset + start);
  return Int(s.substr(start, p - start));
}

}  // namespace

Int parse_integer(const std::string& text, std::size_t base_offset) {
  std::size_t p = 0;
  Int v = read_integer(text, p, base_offset);
  p = skip_ws(text, p);
  if (p != text.size())
    throw ParseError("unexpected trailing input after integer", base_offset + p);
  return v;
}

Rat parse_rational(const std::string& text, std::size_t base_offset) {
  std::size_t p = 0;
  Int num = read_integer(text, p, base_offset);
  Int den = 1;
  if (p < text.size() && text[p] == '/') {
    ++p;
    std::size_t dpos = p;
    den = read_integer(text, p, base_offset);
    if (den == 0) throw ParseError("zero denominator", base_offset + dpos);
  }
  p = skip_ws(text, p);
  if (p != text.size())
    throw ParseError("unexpected trailing input after rational", base_offset + p);
  Rat r(num, den);
  r.canonicalize();
  return r;
}

}  // namespace tower
