#include "tower/hahn.hpp"

#include <algorithm>
#include <cctype>

#include "tower/errors.hpp"

namespace tower {

HahnElement hahn_make(const OrderTypePtr& delta,
                      std::vector<std::pair<ElemPtr, Rat>> terms) {
  for (auto& [q, c] : terms) validate_element(delta, q);
  std::sort(terms.begin(), terms.end(),
            [&](const auto& a, const auto& b) {
              return compare_elements(delta, a.first, b.first) < 0;
            });
  HahnElement g;
  g.delta = delta;
  for (auto& [q, c] : terms) {
    if (!g.terms.empty() &&
        compare_elements(delta, g.terms.back().first, q) == 0) {
      g.terms.back().second += c;
      if (g.terms.back().second == 0) g.terms.pop_back();
    } else if (c != 0) {
      g.terms.emplace_back(q, c);
    }
  }
  return g;
}

HahnElement hahn_zero(const OrderTypePtr& delta) {
  HahnElement g;
  g.delta = delta;
  return g;
}

HahnElement hahn_unit(const OrderTypePtr& delta, const ElemPtr& q, const Rat& c) {
  return hahn_make(delta, {{q, c}});
}

bool is_zero(const HahnElement& g) { return g.terms.empty(); }

bool same_delta(const HahnElement& g, const HahnElement& h) {
  return equal(g.delta, h.delta);
}

int hahn_compare(const HahnElement& g, const HahnElement& h) {
  if (!same_delta(g, h))
    throw DomainError("comparing elements over different order types");
  std::size_t i = 0, j = 0;
  while (i < g.terms.size() || j < h.terms.size()) {
    Rat cg, ch;
    if (i < g.terms.size() && j < h.terms.size()) {
      int c = compare_elements(g.delta, g.terms[i].first, h.terms[j].first);
      if (c < 0) {
        cg = g.terms[i].second;
      } else if (c > 0) {
        ch = h.terms[j].second;
      } else {
        cg = g.terms[i].second;
        ch = h.terms[j].second;
      }
    } else if (i < g.terms.size()) {
      cg = g.terms[i].second;
    } else {
      ch = h.terms[j].second;
    }
    if (cg != ch) return cg < ch ? -1 : 1;
    // equal nonzero coefficients only happen with both heads at the same
    // exponent, so advancing both is safe
    ++i;
    ++j;
  }
  return 0;
}

HahnElement hahn_neg(const HahnElement& g) {
  HahnElement r;
  r.delta = g.delta;
  r.terms.reserve(g.terms.size());
  for (const auto& [q, c] : g.terms) r.terms.emplace_back(q, -c);
  return r;
}

HahnElement hahn_add(const HahnElement& g, const HahnElement& h) {
  if (!same_delta(g, h))
    throw DomainError("adding elements over different order types");
  HahnElement r;
  r.delta = g.delta;
  std::size_t i = 0, j = 0;
  while (i < g.terms.size() || j < h.terms.size()) {
    int c;
    if (i >= g.terms.size())
      c = 1;
    else if (j >= h.terms.size())
      c = -1;
    else
      c = compare_elements(g.delta, g.terms[i].first, h.terms[j].first);
    if (c < 0) {
      r.terms.push_back(g.terms[i++]);
    } else if (c > 0) {
      r.terms.push_back(h.terms[j++]);
    } else {
      Rat s = g.terms[i].second + h.terms[j].second;
      if (s != 0) r.terms.emplace_back(g.terms[i].first, s);
      ++i;
      ++j;
    }
  }
  return r;
}

HahnElement hahn_sub(const HahnElement& g, const HahnElement& h) {
  return hahn_add(g, hahn_neg(h));
}

ElemPtr hahn_vg(const HahnElement& g) {
  if (is_zero(g)) throw DomainError("zero has no valuation");
  return g.terms.front().first;
}

Rat hahn_leading_coeff(const HahnElement& g) {
  if (is_zero(g)) throw DomainError("zero has no leading coefficient");
  return g.terms.front().second;
}

std::string hahn_to_string(const HahnElement& g) {
  if (is_zero(g)) return "0";
  std::string out;
  for (std::size_t i = 0; i < g.terms.size(); ++i) {
    if (i) out += " + ";
    out += rat_to_string(g.terms[i].second);
    out += "@";
    out += element_to_string(g.delta, g.terms[i].first);
  }
  return out;
}

HahnElement parse_hahn(const OrderTypePtr& delta, const std::string& text) {
  // split into terms on '+' outside parentheses
  std::vector<std::pair<std::string, std::size_t>> parts;
  std::string cur;
  std::size_t cur_start = 0;
  int depth = 0;
  for (std::size_t p = 0; p < text.size(); ++p) {
    char ch = text[p];
    if (ch == '(') ++depth;
    if (ch == ')') --depth;
    if (ch == '+' && depth == 0) {
      parts.emplace_back(cur, cur_start);
      cur.clear();
      cur_start = p + 1;
    } else {
      cur += ch;
    }
  }
  parts.emplace_back(cur, cur_start);

  auto trim = [](std::string s, std::size_t& off) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    off += b;
    return s.substr(b, e - b);
  };

  std::vector<std::pair<ElemPtr, Rat>> terms;
  bool saw_zero = false;
  for (auto& [raw, off0] : parts) {
    std::size_t off = off0;
    std::string part = trim(raw, off);
    if (part.empty()) throw ParseError("empty term", off);
    if (part == "0") {
      saw_zero = true;
      continue;
    }
    std::size_t at = part.find('@');
    if (at == std::string::npos)
      throw ParseError("expected 'coeff@exponent'", off);
    Rat c = parse_rational(part.substr(0, at), off);
    ElemPtr q = parse_element(delta, part.substr(at + 1));
    terms.emplace_back(q, c);
  }
  if (saw_zero && !terms.empty())
    throw ParseError("'0' cannot be combined with other terms", 0);
  return hahn_make(delta, std::move(terms));
}

}  // namespace tower
