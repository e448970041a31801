#include "tower/orders.hpp"

#include "tower/errors.hpp"
#include "tower/sbtree.hpp"

namespace tower {

// ---------------------------------------------------------------------------
// RationalOrder

RationalOrder::RationalOrder(std::optional<Rat> lo, std::optional<Rat> hi)
    : lo_(std::move(lo)), hi_(std::move(hi)) {
  if (lo_ && hi_ && *lo_ >= *hi_) throw StructuralError("empty rational interval");
}

int RationalOrder::cmp(const Rat& a, const Rat& b) const {
  if (a < b) return -1;
  return a == b ? 0 : 1;
}

bool RationalOrder::contains(const Rat& v) const {
  return (!lo_ || v > *lo_) && (!hi_ || v < *hi_);
}

Rat RationalOrder::at(const Int& i) const {
  if (!lo_ && !hi_) return eta_at(i);
  Rat t = unit_at(i);
  if (lo_ && hi_) return *lo_ + t * (*hi_ - *lo_);
  if (lo_) return *lo_ + t / (1 - t);
  return *hi_ - (1 - t) / t;
}

// Exact inverse of the transport used by at(); defined on the open interval.
Rat RationalOrder::to_unit(const Rat& v) const {
  if (lo_ && hi_) return Rat(v - *lo_) / (*hi_ - *lo_);
  if (lo_) {
    Rat s = v - *lo_;
    return s / (1 + s);
  }
  Rat s = *hi_ - v;
  return Rat(1) / (s + 1);
}

Int RationalOrder::index_of(const Rat& v) const {
  if (!contains(v)) throw DomainError("rational outside the interval");
  if (!lo_ && !hi_) return eta_index(v);
  return unit_index(to_unit(v));
}

std::optional<Int> RationalOrder::first_index_between(
    const std::optional<Rat>& l, const std::optional<Rat>& h) const {
  std::optional<Rat> L = lo_, H = hi_;
  if (l && (!L || *l > *L)) L = *l;
  if (h && (!H || *h < *H)) H = *h;
  if (L && H && *L >= *H) return std::nullopt;
  if (!lo_ && !hi_) return eta_first_between(L, H);
  std::optional<Rat> tl, th;
  if (L) tl = to_unit(*L);
  if (H) th = to_unit(*H);
  return unit_first_between(tl, th);
}

Rat RationalOrder::from_text(const std::string& s) const {
  Rat v = parse_rational(s);
  if (!contains(v)) throw DomainError("rational outside the interval");
  return v;
}

// ---------------------------------------------------------------------------
// HahnRegionOrder

namespace {

// Order on leading pairs. Once two elements differ here, their tails are
// irrelevant: among negatives the smaller exponent dominates downward, among
// positives it dominates upward, ties on the exponent fall to coefficients.
int pair_cmp(const Rat& q1, const Rat& c1, const Rat& q2, const Rat& c2) {
  int s1 = sgn(c1), s2 = sgn(c2);
  if (s1 != s2) return s1 < s2 ? -1 : 1;
  if (q1 != q2) {
    if (s1 < 0) return q1 < q2 ? -1 : 1;
    return q1 < q2 ? 1 : -1;
  }
  if (c1 == c2) return 0;
  return c1 < c2 ? -1 : 1;
}

struct BoundView {
  bool present = false;
  bool zero = false;
  Rat q, c;
  HahnElement tail;
};

BoundView view_bound(const std::optional<HahnElement>& e) {
  BoundView v;
  if (!e) return v;
  v.present = true;
  if (is_zero(*e)) {
    v.zero = true;
    return v;
  }
  v.q = (*e).terms.front().first->q;
  v.c = (*e).terms.front().second;
  HahnElement t;
  t.delta = e->delta;
  t.terms.assign(e->terms.begin() + 1, e->terms.end());
  v.tail = std::move(t);
  return v;
}

// exponent dominance within a sign block
bool dominates(bool negative, const Rat& a, const Rat& b) {
  return negative ? a < b : a > b;
}

void min_into(std::optional<Int>& best, const Int& cand) {
  if (!best || cand < *best) best = cand;
}

}  // namespace

const OrderTypePtr& HahnRegionOrder::exponent_order() {
  static const OrderTypePtr t = parse_order_type("eta");
  return t;
}

HahnRegionOrder::HahnRegionOrder(std::optional<Rat> support_above,
                                 std::optional<HahnElement> lo,
                                 std::optional<HahnElement> hi)
    : above_(std::move(support_above)), lo_(std::move(lo)), hi_(std::move(hi)) {
  for (const auto* b : {&lo_, &hi_}) {
    if (!*b) continue;
    if (!equal((*b)->delta, exponent_order()))
      throw StructuralError("region bound must have rational exponents");
    if (above_) {
      for (const auto& [e, c] : (*b)->terms)
        if (!(e->q > *above_))
          throw StructuralError("region bound support violates the universe");
    }
  }
  if (lo_ && hi_ && hahn_compare(*lo_, *hi_) >= 0)
    throw StructuralError("empty region: bounds out of order");

  bool lo_neg = !lo_ || hahn_compare(*lo_, hahn_zero(lo_->delta)) < 0;
  bool hi_pos = !hi_ || hahn_compare(*hi_, hahn_zero(hi_->delta)) > 0;
  has_zero_ = lo_neg && hi_pos;

  if (lo_neg) {
    std::optional<HahnElement> nlo = lo_;
    std::optional<HahnElement> nhi;
    if (hi_ && !hi_pos && !is_zero(*hi_)) nhi = hi_;
    build_side(true, nlo, nhi);
  }
  if (hi_pos) {
    std::optional<HahnElement> plo;
    if (lo_ && !lo_neg && !is_zero(*lo_)) plo = lo_;
    std::optional<HahnElement> phi = hi_;
    build_side(false, plo, phi);
  }
}

void HahnRegionOrder::build_side(bool negative,
                                 const std::optional<HahnElement>& lo,
                                 const std::optional<HahnElement>& hi) {
  BoundView L = view_bound(lo), H = view_bound(hi);
  auto push_eq = [&](const Rat& q, const Rat& c,
                     std::optional<HahnElement> tlo,
                     std::optional<HahnElement> thi) {
    Bucket b;
    b.kind = Bucket::Eq;
    b.negative = negative;
    b.q = q;
    b.c = c;
    b.tail = std::make_shared<HahnRegionOrder>(q, std::move(tlo), std::move(thi));
    buckets_.push_back(std::move(b));
  };
  auto push_fixed_q = [&](const Rat& q, std::optional<Rat> clo,
                          std::optional<Rat> chi) {
    Bucket b;
    b.kind = Bucket::MidFixedQ;
    b.negative = negative;
    b.q = q;
    b.c_order = std::make_shared<RationalOrder>(std::move(clo), std::move(chi));
    buckets_.push_back(std::move(b));
  };

  if (L.present && H.present && L.q == H.q && L.c == H.c) {
    push_eq(L.q, L.c, L.tail, H.tail);
    return;
  }
  if (L.present) push_eq(L.q, L.c, L.tail, std::nullopt);
  if (L.present && H.present && L.q == H.q) {
    push_fixed_q(L.q, L.c, H.c);
  } else {
    if (L.present)
      push_fixed_q(L.q, L.c, negative ? std::optional<Rat>(Rat(0)) : std::nullopt);
    {
      Bucket b;
      b.kind = Bucket::Mid;
      b.negative = negative;
      std::optional<Rat> qlo, qhi;
      if (negative) {
        qlo = L.present ? std::optional<Rat>(L.q) : above_;
        if (H.present) qhi = H.q;
      } else {
        qlo = H.present ? std::optional<Rat>(H.q) : above_;
        if (L.present) qhi = L.q;
      }
      b.q_order = std::make_shared<RationalOrder>(std::move(qlo), std::move(qhi));
      b.c_order = negative
                      ? std::make_shared<RationalOrder>(std::nullopt, Rat(0))
                      : std::make_shared<RationalOrder>(Rat(0), std::nullopt);
      buckets_.push_back(std::move(b));
    }
    if (H.present)
      push_fixed_q(H.q, negative ? std::nullopt : std::optional<Rat>(Rat(0)), H.c);
  }
  if (H.present) push_eq(H.q, H.c, std::nullopt, H.tail);
}

HahnRegionOrder HahnRegionOrder::free_tail(const Rat& q) const {
  return HahnRegionOrder(q, std::nullopt, std::nullopt);
}

bool HahnRegionOrder::contains(const HahnElement& g) const {
  if (!equal(g.delta, exponent_order())) return false;
  if (above_) {
    for (const auto& [e, c] : g.terms)
      if (!(e->q > *above_)) return false;
  }
  if (lo_ && hahn_compare(g, *lo_) <= 0) return false;
  if (hi_ && hahn_compare(g, *hi_) >= 0) return false;
  return true;
}

HahnElement HahnRegionOrder::bucket_element(const Bucket& b, const Int& j) const {
  const auto& d = exponent_order();
  switch (b.kind) {
    case Bucket::Eq: {
      HahnElement tail = b.tail->at(j);
      return hahn_add(hahn_unit(d, OrderElement::eta(b.q), b.c), tail);
    }
    case Bucket::MidFixedQ: {
      Int ic, it;
      uncantor2(j, ic, it);
      Rat c = b.c_order->at(ic);
      HahnElement tail = free_tail(b.q).at(it);
      return hahn_add(hahn_unit(d, OrderElement::eta(b.q), c), tail);
    }
    case Bucket::Mid: {
      Int iq, ic, it;
      uncantor3(j, iq, ic, it);
      Rat q = b.q_order->at(iq);
      Rat c = b.c_order->at(ic);
      HahnElement tail = free_tail(q).at(it);
      return hahn_add(hahn_unit(d, OrderElement::eta(q), c), tail);
    }
  }
  throw DomainError("unreachable bucket kind");
}

HahnElement HahnRegionOrder::at(const Int& i) const {
  if (i < 0) throw DomainError("enumeration index must be non-negative");
  Int k = i;
  if (has_zero_) {
    if (k == 0) return hahn_zero(exponent_order());
    k -= 1;
  }
  if (buckets_.empty()) throw DomainError("enumeration index out of range");
  Int nb(static_cast<unsigned long>(buckets_.size()));
  Int b = k % nb, j = k / nb;
  return bucket_element(buckets_[b.get_ui()], j);
}

Int HahnRegionOrder::index_of(const HahnElement& g) const {
  if (!contains(g)) throw DomainError("element outside the region");
  Int zoff(has_zero_ ? 1 : 0);
  if (is_zero(g)) {
    if (!has_zero_) throw DomainError("element outside the region");
    return Int(0);
  }
  const Rat& q0 = g.terms.front().first->q;
  const Rat& c0 = g.terms.front().second;
  HahnElement tail;
  tail.delta = g.delta;
  tail.terms.assign(g.terms.begin() + 1, g.terms.end());
  bool neg = sgn(c0) < 0;
  Int nb(static_cast<unsigned long>(buckets_.size()));
  for (std::size_t bi = 0; bi < buckets_.size(); ++bi) {
    const Bucket& b = buckets_[bi];
    if (b.negative != neg) continue;
    std::optional<Int> j;
    switch (b.kind) {
      case Bucket::Eq:
        if (b.q == q0 && b.c == c0) j = b.tail->index_of(tail);
        break;
      case Bucket::MidFixedQ:
        if (b.q == q0 && b.c_order->contains(c0))
          j = cantor2(b.c_order->index_of(c0), free_tail(q0).index_of(tail));
        break;
      case Bucket::Mid:
        if (b.q_order->contains(q0) && b.c_order->contains(c0))
          j = cantor3(b.q_order->index_of(q0), b.c_order->index_of(c0),
                      free_tail(q0).index_of(tail));
        break;
    }
    if (j) return zoff + *j * nb + Int(static_cast<unsigned long>(bi));
  }
  throw StructuralError("region buckets failed to cover a member element");
}

std::optional<Int> HahnRegionOrder::bucket_first(
    const Bucket& b, const std::optional<HahnElement>& l,
    const std::optional<HahnElement>& h) const {
  BoundView L = view_bound(l), H = view_bound(h);

  // Collapse bounds that a sign block settles wholesale: a lower bound at or
  // above the block excludes everything, one below it constrains nothing.
  bool l_constrains = false, h_constrains = false;
  if (L.present) {
    if (L.zero || sgn(L.c) != (b.negative ? -1 : 1)) {
      bool bound_below_block = !L.zero && (sgn(L.c) < 0) && !b.negative;
      if (L.zero && !b.negative) bound_below_block = true;
      if (!bound_below_block) return std::nullopt;
    } else {
      l_constrains = true;
    }
  }
  if (H.present) {
    if (H.zero || sgn(H.c) != (b.negative ? -1 : 1)) {
      bool bound_above_block = !H.zero && (sgn(H.c) > 0) && b.negative;
      if (H.zero && b.negative) bound_above_block = true;
      if (!bound_above_block) return std::nullopt;
    } else {
      h_constrains = true;
    }
  }

  std::optional<Int> best;
  switch (b.kind) {
    case Bucket::Eq: {
      std::optional<HahnElement> tl, th;
      if (l_constrains) {
        int pc = pair_cmp(b.q, b.c, L.q, L.c);
        if (pc < 0) return std::nullopt;
        if (pc == 0) tl = L.tail;
      }
      if (h_constrains) {
        int pc = pair_cmp(b.q, b.c, H.q, H.c);
        if (pc > 0) return std::nullopt;
        if (pc == 0) th = H.tail;
      }
      return b.tail->first_index_between(tl, th);
    }
    case Bucket::MidFixedQ: {
      std::optional<Rat> ca_lo, ca_hi;
      bool exact_lo = false, exact_hi = false;
      if (l_constrains) {
        if (dominates(b.negative, b.q, L.q)) return std::nullopt;
        if (b.q == L.q) {
          ca_lo = L.c;
          exact_lo = true;
        }
      }
      if (h_constrains) {
        if (dominates(b.negative, H.q, b.q)) return std::nullopt;
        if (b.q == H.q) {
          ca_hi = H.c;
          exact_hi = true;
        }
      }
      if (auto ic = b.c_order->first_index_between(ca_lo, ca_hi))
        min_into(best, cantor2(*ic, 0));
      if (exact_lo && b.c_order->contains(L.c)) {
        bool same_pair_hi = exact_hi && H.c == L.c;
        auto it = free_tail(b.q).first_index_between(
            L.tail, same_pair_hi ? std::optional<HahnElement>(H.tail)
                                 : std::nullopt);
        if (it) min_into(best, cantor2(b.c_order->index_of(L.c), *it));
      }
      if (exact_hi && b.c_order->contains(H.c) && !(exact_lo && L.c == H.c)) {
        auto it = free_tail(b.q).first_index_between(std::nullopt, H.tail);
        if (it) min_into(best, cantor2(b.c_order->index_of(H.c), *it));
      }
      return best;
    }
    case Bucket::Mid: {
      std::optional<Rat> qa_lo, qa_hi;
      if (b.negative) {
        if (l_constrains) qa_lo = L.q;
        if (h_constrains) qa_hi = H.q;
      } else {
        if (h_constrains) qa_lo = H.q;
        if (l_constrains) qa_hi = L.q;
      }
      if (auto iq = b.q_order->first_index_between(qa_lo, qa_hi))
        min_into(best, cantor3(*iq, 0, 0));
      bool same_q = l_constrains && h_constrains && L.q == H.q;
      if (l_constrains && b.q_order->contains(L.q)) {
        auto ic = b.c_order->first_index_between(
            L.c, same_q ? std::optional<Rat>(H.c) : std::nullopt);
        if (ic) min_into(best, cantor3(b.q_order->index_of(L.q), *ic, 0));
        if (b.c_order->contains(L.c)) {
          bool same_pair_hi = same_q && H.c == L.c;
          auto it = free_tail(L.q).first_index_between(
              L.tail, same_pair_hi ? std::optional<HahnElement>(H.tail)
                                   : std::nullopt);
          if (it)
            min_into(best, cantor3(b.q_order->index_of(L.q),
                                   b.c_order->index_of(L.c), *it));
        }
      }
      if (h_constrains && b.q_order->contains(H.q)) {
        // With equal bound exponents the c interval above already carries the
        // lower cap, so only the exact-pair-at-H column is added here.
        if (!same_q) {
          auto ic = b.c_order->first_index_between(std::nullopt, H.c);
          if (ic) min_into(best, cantor3(b.q_order->index_of(H.q), *ic, 0));
        }
        if (b.c_order->contains(H.c) && !(same_q && L.c == H.c)) {
          auto it = free_tail(H.q).first_index_between(std::nullopt, H.tail);
          if (it)
            min_into(best, cantor3(b.q_order->index_of(H.q),
                                   b.c_order->index_of(H.c), *it));
        }
      }
      return best;
    }
  }
  throw DomainError("unreachable bucket kind");
}

std::optional<Int> HahnRegionOrder::first_index_between(
    const std::optional<HahnElement>& l,
    const std::optional<HahnElement>& h) const {
  std::optional<HahnElement> L = lo_, H = hi_;
  if (l && (!L || hahn_compare(*l, *L) > 0)) L = *l;
  if (h && (!H || hahn_compare(*h, *H) < 0)) H = *h;
  if (L && H && hahn_compare(*L, *H) >= 0) return std::nullopt;

  std::optional<Int> best;
  const auto& d = exponent_order();
  if (has_zero_) {
    HahnElement z = hahn_zero(d);
    if ((!L || hahn_compare(*L, z) < 0) && (!H || hahn_compare(z, *H) < 0))
      min_into(best, Int(0));
  }
  Int zoff(has_zero_ ? 1 : 0);
  Int nb(static_cast<unsigned long>(buckets_.size()));
  for (std::size_t bi = 0; bi < buckets_.size(); ++bi) {
    if (auto j = bucket_first(buckets_[bi], L, H))
      min_into(best, Int(zoff + *j * nb + Int(static_cast<unsigned long>(bi))));
  }
  return best;
}

HahnElement HahnRegionOrder::from_text(const std::string& s) const {
  HahnElement g = parse_hahn(exponent_order(), s);
  if (!contains(g)) throw DomainError("element outside the region");
  return g;
}

}  // namespace tower
