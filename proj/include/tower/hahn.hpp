#pragma once

#include <string>
#include <utility>
#include <vector>

#include "tower/ordertype.hpp"
#include "tower/rational.hpp"

namespace tower {

// Finite-support element of the group sum of rational coefficients indexed
// by an order type: a formal combination  c_1@q_1 + ... + c_k@q_k  with
// exponents q_i strictly increasing and coefficients nonzero. Ordering is
// lexicographic from the smallest exponent, so the indicator at a smaller
// exponent dominates every combination supported strictly above it.
struct HahnElement {
  OrderTypePtr delta;
  std::vector<std::pair<ElemPtr, Rat>> terms;  // exponent-ascending
};

// Sorts, merges duplicate exponents, drops zero coefficients.
HahnElement hahn_make(const OrderTypePtr& delta,
                      std::vector<std::pair<ElemPtr, Rat>> terms);
HahnElement hahn_zero(const OrderTypePtr& delta);
HahnElement hahn_unit(const OrderTypePtr& delta, const ElemPtr& q,
                      const Rat& c = Rat(1));

bool is_zero(const HahnElement& g);
bool same_delta(const HahnElement& g, const HahnElement& h);

// Throws DomainError when the two elements live over different order types.
int hahn_compare(const HahnElement& g, const HahnElement& h);

HahnElement hahn_neg(const HahnElement& g);
HahnElement hahn_add(const HahnElement& g, const HahnElement& h);
HahnElement hahn_sub(const HahnElement& g, const HahnElement& h);

// Smallest support exponent. Throws DomainError on zero.
ElemPtr hahn_vg(const HahnElement& g);
Rat hahn_leading_coeff(const HahnElement& g);

// Literal form: terms joined by " + ", each "coeff@exponent"; zero is "0".
std::string hahn_to_string(const HahnElement& g);
HahnElement parse_hahn(const OrderTypePtr& delta, const std::string& text);

}  // namespace tower
