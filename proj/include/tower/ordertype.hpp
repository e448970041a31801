#pragma once

#include <memory>
#include <optional>
#include <string>

#include "tower/rational.hpp"

namespace tower {

// Linear order expressions built from finite chains, omega, reversed omega,
// the integers (zeta), the rationals (eta), ordered sums, and major-first
// lexicographic products.
enum class OtKind { Fin, Omega, OmegaRev, Zeta, Eta, Sum, LexProd };

struct OrderType;
using OrderTypePtr = std::shared_ptr<const OrderType>;

struct OrderType {
  OtKind kind;
  long fin_n = 0;            // Fin only, >= 1
  OrderTypePtr left, right;  // Sum: left then right; LexProd: major, minor

  static OrderTypePtr fin(long n);
  static OrderTypePtr omega();
  static OrderTypePtr omega_rev();
  static OrderTypePtr zeta();
  static OrderTypePtr eta();
  static OrderTypePtr sum(OrderTypePtr l, OrderTypePtr r);
  static OrderTypePtr lex_prod(OrderTypePtr major, OrderTypePtr minor);
};

// Grammar (whitespace-insensitive):
//   delta := sum ; sum := prod { "+" prod } ; prod := atom { "*" atom }
//   atom  := NAT | "omega" | "omega*" | "zeta" | "eta" | "(" delta ")"
// "+" and "*" associate left, "*" binds tighter. NAT >= 1. A "*" glued to
// "omega" is the reversal marker unless an atom starts right after it, so
// "omega*eta" is a product while "omega* * eta" reverses first.
OrderTypePtr parse_order_type(const std::string& text);
std::string to_string(const OrderTypePtr& t);
bool equal(const OrderTypePtr& a, const OrderTypePtr& b);

// None = infinite. Sizes are >= 1 (Fin(0) is not expressible).
std::optional<Int> order_size(const OrderTypePtr& t);

// Compositional order-theoretic predicates. A one-element order counts as
// dense (no witness pair exists).
bool is_dense(const OrderTypePtr& t);
bool has_min(const OrderTypePtr& t);
bool has_max(const OrderTypePtr& t);
bool is_dense_without_endpoints(const OrderTypePtr& t);

// Elements mirror the shape of their type.
struct OrderElement;
using ElemPtr = std::shared_ptr<const OrderElement>;

struct OrderElement {
  OtKind kind;
  Int n;    // Fin/Omega/OmegaRev: natural index; Zeta: integer value
  Rat q;    // Eta
  bool in_right = false;  // Sum tag
  ElemPtr a, b;           // Sum payload in a; LexProd pair (a, b)

  static ElemPtr fin(const Int& k);
  static ElemPtr omega(const Int& k);
  static ElemPtr omega_rev(const Int& k);  // order position is -k
  static ElemPtr zeta(const Int& z);
  static ElemPtr eta(const Rat& v);
  static ElemPtr sum_left(ElemPtr inner);
  static ElemPtr sum_right(ElemPtr inner);
  static ElemPtr pair(ElemPtr major, ElemPtr minor);
};

// Throws DomainError when the element does not fit the type (wrong shape or
// out-of-range finite index).
void validate_element(const OrderTypePtr& t, const ElemPtr& e);

// Three-way comparison; both elements must fit the type.
int compare_elements(const OrderTypePtr& t, const ElemPtr& x, const ElemPtr& y);
bool elements_equal(const OrderTypePtr& t, const ElemPtr& x, const ElemPtr& y);

// Deterministic enumeration: a bijection from naturals (all of them when the
// order is infinite, [0, size) when finite) onto the elements. Components of
// sums and products are interleaved; the rational line uses the canonical
// zero / Calkin-Wilf / negated Calkin-Wilf ordering.
ElemPtr enumerate_at(const OrderTypePtr& t, const Int& i);

// Exact inverse of enumerate_at.
Int index_of(const OrderTypePtr& t, const ElemPtr& e);

// Least i such that enumerate_at(t, i) lies strictly between lo and hi
// (either bound optional). Closed form: never scans the enumeration.
std::optional<Int> first_index_between(const OrderTypePtr& t,
                                       const std::optional<ElemPtr>& lo,
                                       const std::optional<ElemPtr>& hi);

// Canonical element text: integers for discrete atoms (reversed omega shows
// its order position, a non-positive integer), rationals "p/q" for eta,
// "L(x)" / "R(x)" for sums, "(x,y)" for products.
std::string element_to_string(const OrderTypePtr& t, const ElemPtr& e);
ElemPtr parse_element(const OrderTypePtr& t, const std::string& text);

}  // namespace tower
