#pragma once

#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tower/hahn.hpp"
#include "tower/ordertype.hpp"
#include "tower/rational.hpp"

namespace tower {

// Order handles share one shape: a linear order with a deterministic
// enumeration (at / index_of) and a closed-form least-index search inside an
// open cut (first_index_between). Witness selection never scans.

// The rationals: the whole line, or an open interval with optional ends.
// The line uses the canonical enumeration; intervals transport the
// unit-interval tree through exact monotone rational maps.
class RationalOrder {
 public:
  using Elem = Rat;

  RationalOrder() = default;  // full line
  RationalOrder(std::optional<Rat> lo, std::optional<Rat> hi);

  const std::optional<Rat>& lower() const { return lo_; }
  const std::optional<Rat>& upper() const { return hi_; }

  int cmp(const Rat& a, const Rat& b) const;
  bool contains(const Rat& v) const;
  Rat at(const Int& i) const;
  Int index_of(const Rat& v) const;
  std::optional<Int> first_index_between(const std::optional<Rat>& l,
                                         const std::optional<Rat>& h) const;
  std::string to_text(const Rat& v) const { return rat_to_string(v); }
  Rat from_text(const std::string& s) const;

 private:
  Rat to_unit(const Rat& v) const;
  std::optional<Rat> lo_, hi_;
};

// Elements of an order type expression.
class OrderTypeOrder {
 public:
  using Elem = ElemPtr;

  explicit OrderTypeOrder(OrderTypePtr t) : t_(std::move(t)) {}
  const OrderTypePtr& type() const { return t_; }

  int cmp(const ElemPtr& a, const ElemPtr& b) const {
    return compare_elements(t_, a, b);
  }
  bool contains(const ElemPtr& e) const {
    validate_element(t_, e);
    return true;
  }
  ElemPtr at(const Int& i) const { return enumerate_at(t_, i); }
  Int index_of(const ElemPtr& e) const { return tower::index_of(t_, e); }
  std::optional<Int> first_index_between(const std::optional<ElemPtr>& l,
                                         const std::optional<ElemPtr>& h) const {
    return tower::first_index_between(t_, l, h);
  }
  std::string to_text(const ElemPtr& e) const { return element_to_string(t_, e); }
  ElemPtr from_text(const std::string& s) const { return parse_element(t_, s); }

 private:
  OrderTypePtr t_;
};

// The same elements and enumeration with all comparisons flipped.
template <typename O>
class ReversedOrder {
 public:
  using Elem = typename O::Elem;

  explicit ReversedOrder(O inner) : inner_(std::move(inner)) {}
  const O& base() const { return inner_; }

  int cmp(const Elem& a, const Elem& b) const { return inner_.cmp(b, a); }
  bool contains(const Elem& e) const { return inner_.contains(e); }
  Elem at(const Int& i) const { return inner_.at(i); }
  Int index_of(const Elem& e) const { return inner_.index_of(e); }
  std::optional<Int> first_index_between(const std::optional<Elem>& l,
                                         const std::optional<Elem>& h) const {
    return inner_.first_index_between(h, l);
  }
  std::string to_text(const Elem& e) const { return inner_.to_text(e); }
  Elem from_text(const std::string& s) const { return inner_.from_text(s); }

 private:
  O inner_;
};

// Region of the rational-exponent Hahn group: elements whose support lies
// strictly above a given exponent (optional) and which sit strictly between
// two bounds (optional). Every such region is a dense order without
// endpoints, except that it may contain zero as an interior point.
//
// Enumeration splits the region by leading pair (exponent, coefficient):
// once two elements differ in their leading pairs, tails cannot change the
// comparison, so the region decomposes into finitely many buckets (exact
// bound pair with a constrained tail region, a bound exponent with a
// coefficient interval, or an open exponent range), each coded through
// Cantor pairing of component indices. That keeps first_index_between exact
// and closed-form all the way down; recursion depth is the support length
// of the bound elements.
class HahnRegionOrder {
 public:
  using Elem = HahnElement;

  HahnRegionOrder(std::optional<Rat> support_above,
                  std::optional<HahnElement> lo, std::optional<HahnElement> hi);

  static const OrderTypePtr& exponent_order();

  const std::optional<Rat>& support_above() const { return above_; }
  const std::optional<HahnElement>& lower() const { return lo_; }
  const std::optional<HahnElement>& upper() const { return hi_; }

  int cmp(const HahnElement& a, const HahnElement& b) const {
    return hahn_compare(a, b);
  }
  bool contains(const HahnElement& g) const;
  HahnElement at(const Int& i) const;
  Int index_of(const HahnElement& g) const;
  std::optional<Int> first_index_between(const std::optional<HahnElement>& l,
                                         const std::optional<HahnElement>& h) const;
  std::string to_text(const HahnElement& g) const { return hahn_to_string(g); }
  HahnElement from_text(const std::string& s) const;

 private:
  struct Bucket {
    enum Kind { Eq, MidFixedQ, Mid } kind;
    bool negative;
    Rat q;                                     // Eq, MidFixedQ
    Rat c;                                     // Eq
    std::shared_ptr<HahnRegionOrder> tail;     // Eq
    std::shared_ptr<RationalOrder> c_order;    // MidFixedQ, Mid
    std::shared_ptr<RationalOrder> q_order;    // Mid
  };

  void build_side(bool negative, const std::optional<HahnElement>& lo,
                  const std::optional<HahnElement>& hi);
  HahnRegionOrder free_tail(const Rat& q) const;
  HahnElement bucket_element(const Bucket& b, const Int& j) const;
  std::optional<Int> bucket_first(const Bucket& b,
                                  const std::optional<HahnElement>& l,
                                  const std::optional<HahnElement>& h) const;

  std::optional<Rat> above_;
  std::optional<HahnElement> lo_, hi_;
  bool has_zero_ = false;
  std::vector<Bucket> buckets_;
};

}  // namespace tower
