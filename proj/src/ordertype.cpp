#include "tower/ordertype.hpp"

#include <cctype>
#include <utility>

#include "tower/errors.hpp"
#include "tower/sbtree.hpp"

namespace tower {

OrderTypePtr OrderType::fin(long n) {
  auto t = std::make_shared<OrderType>();
  t->kind = OtKind::Fin;
  t->fin_n = n;
  return t;
}
OrderTypePtr OrderType::omega() {
  auto t = std::make_shared<OrderType>();
  t->kind = OtKind::Omega;
  return t;
}
OrderTypePtr OrderType::omega_rev() {
  auto t = std::make_shared<OrderType>();
  t->kind = OtKind::OmegaRev;
  return t;
}
OrderTypePtr OrderType::zeta() {
  auto t = std::make_shared<OrderType>();
  t->kind = OtKind::Zeta;
  return t;
}
OrderTypePtr OrderType::eta() {
  auto t = std::make_shared<OrderType>();
  t->kind = OtKind::Eta;
  return t;
}
OrderTypePtr OrderType::sum(OrderTypePtr l, OrderTypePtr r) {
  auto t = std::make_shared<OrderType>();
  t->kind = OtKind::Sum;
  t->left = std::move(l);
  t->right = std::move(r);
  return t;
}
OrderTypePtr OrderType::lex_prod(OrderTypePtr major, OrderTypePtr minor) {
  auto t = std::make_shared<OrderType>();
  t->kind = OtKind::LexProd;
  t->left = std::move(major);
  t->right = std::move(minor);
  return t;
}

bool equal(const OrderTypePtr& a, const OrderTypePtr& b) {
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case OtKind::Fin:
      return a->fin_n == b->fin_n;
    case OtKind::Sum:
    case OtKind::LexProd:
      return equal(a->left, b->left) && equal(a->right, b->right);
    default:
      return true;
  }
}

std::optional<Int> order_size(const OrderTypePtr& t) {
  switch (t->kind) {
    case OtKind::Fin:
      return Int(t->fin_n);
    case OtKind::Sum: {
      auto l = order_size(t->left), r = order_size(t->right);
      if (l && r) return *l + *r;
      return std::nullopt;
    }
    case OtKind::LexProd: {
      auto l = order_size(t->left), r = order_size(t->right);
      if (l && r) return *l * *r;
      return std::nullopt;
    }
    default:
      return std::nullopt;
  }
}

bool has_min(const OrderTypePtr& t) {
  switch (t->kind) {
    case OtKind::Fin:
    case OtKind::Omega:
      return true;
    case OtKind::OmegaRev:
    case OtKind::Zeta:
    case OtKind::Eta:
      return false;
    case OtKind::Sum:
      return has_min(t->left);
    case OtKind::LexProd:
      return has_min(t->left) && has_min(t->right);
  }
  return false;
}

bool has_max(const OrderTypePtr& t) {
  switch (t->kind) {
    case OtKind::Fin:
    case OtKind::OmegaRev:
      return true;
    case OtKind::Omega:
    case OtKind::Zeta:
    case OtKind::Eta:
      return false;
    case OtKind::Sum:
      return has_max(t->right);
    case OtKind::LexProd:
      return has_max(t->left) && has_max(t->right);
  }
  return false;
}

bool is_dense(const OrderTypePtr& t) {
  switch (t->kind) {
    case OtKind::Fin:
      return t->fin_n == 1;
    case OtKind::Omega:
    case OtKind::OmegaRev:
    case OtKind::Zeta:
      return false;
    case OtKind::Eta:
      return true;
    case OtKind::Sum:
      // The seam is the only new adjacency a sum can introduce.
      return is_dense(t->left) && is_dense(t->right) &&
             !(has_max(t->left) && has_min(t->right));
    case OtKind::LexProd:
      // Copies of the minor, one per major element. Seams between
      // consecutive copies exist exactly when the major is not dense.
      return is_dense(t->right) &&
             (is_dense(t->left) || !has_max(t->right) || !has_min(t->right));
  }
  return false;
}

bool is_dense_without_endpoints(const OrderTypePtr& t) {
  return is_dense(t) && !has_min(t) && !has_max(t);
}

// ---------------------------------------------------------------------------
// Elements

ElemPtr OrderElement::fin(const Int& k) {
  auto e = std::make_shared<OrderElement>();
  e->kind = OtKind::Fin;
  e->n = k;
  return e;
}
ElemPtr OrderElement::omega(const Int& k) {
  auto e = std::make_shared<OrderElement>();
  e->kind = OtKind::Omega;
  e->n = k;
  return e;
}
ElemPtr OrderElement::omega_rev(const Int& k) {
  auto e = std::make_shared<OrderElement>();
  e->kind = OtKind::OmegaRev;
  e->n = k;
  return e;
}
ElemPtr OrderElement::zeta(const Int& z) {
  auto e = std::make_shared<OrderElement>();
  e->kind = OtKind::Zeta;
  e->n = z;
  return e;
}
ElemPtr OrderElement::eta(const Rat& v) {
  auto e = std::make_shared<OrderElement>();
  e->kind = OtKind::Eta;
  e->q = v;
  return e;
}
ElemPtr OrderElement::sum_left(ElemPtr inner) {
  auto e = std::make_shared<OrderElement>();
  e->kind = OtKind::Sum;
  e->in_right = false;
  e->a = std::move(inner);
  return e;
}
ElemPtr OrderElement::sum_right(ElemPtr inner) {
  auto e = std::make_shared<OrderElement>();
  e->kind = OtKind::Sum;
  e->in_right = true;
  e->a = std::move(inner);
  return e;
}
ElemPtr OrderElement::pair(ElemPtr major, ElemPtr minor) {
  auto e = std::make_shared<OrderElement>();
  e->kind = OtKind::LexProd;
  e->a = std::move(major);
  e->b = std::move(minor);
  return e;
}

void validate_element(const OrderTypePtr& t, const ElemPtr& e) {
  if (!e) throw DomainError("null element");
  if (e->kind != t->kind) throw DomainError("element shape does not match order type");
  switch (t->kind) {
    case OtKind::Fin:
      if (e->n < 0 || e->n >= t->fin_n) throw DomainError("finite element out of range");
      return;
    case OtKind::Omega:
    case OtKind::OmegaRev:
      if (e->n < 0) throw DomainError("natural element must be non-negative");
      return;
    case OtKind::Zeta:
    case OtKind::Eta:
      return;
    case OtKind::Sum:
      validate_element(e->in_right ? t->right : t->left, e->a);
      return;
    case OtKind::LexProd:
      validate_element(t->left, e->a);
      validate_element(t->right, e->b);
      return;
  }
}

int compare_elements(const OrderTypePtr& t, const ElemPtr& x, const ElemPtr& y) {
  if (x->kind != t->kind || y->kind != t->kind)
    throw DomainError("element shape does not match order type");
  switch (t->kind) {
    case OtKind::Fin:
    case OtKind::Omega:
      return cmp(x->n, y->n) < 0 ? -1 : (x->n == y->n ? 0 : 1);
    case OtKind::OmegaRev:
      // larger natural index sits earlier in the order
      return cmp(y->n, x->n) < 0 ? -1 : (x->n == y->n ? 0 : 1);
    case OtKind::Zeta:
      return cmp(x->n, y->n) < 0 ? -1 : (x->n == y->n ? 0 : 1);
    case OtKind::Eta:
      return cmp(x->q, y->q) < 0 ? -1 : (x->q == y->q ? 0 : 1);
    case OtKind::Sum:
      if (x->in_right != y->in_right) return x->in_right ? 1 : -1;
      return compare_elements(x->in_right ? t->right : t->left, x->a, y->a);
    case OtKind::LexProd: {
      int c = compare_elements(t->left, x->a, y->a);
      if (c != 0) return c;
      return compare_elements(t->right, x->b, y->b);
    }
  }
  throw DomainError("unreachable order kind");
}

bool elements_equal(const OrderTypePtr& t, const ElemPtr& x, const ElemPtr& y) {
  return compare_elements(t, x, y) == 0;
}

// ---------------------------------------------------------------------------
// Enumeration

ElemPtr enumerate_at(const OrderTypePtr& t, const Int& i) {
  if (i < 0) throw DomainError("enumeration index must be non-negative");
  switch (t->kind) {
    case OtKind::Fin:
      if (i >= t->fin_n) throw DomainError("enumeration index out of range");
      return OrderElement::fin(i);
    case OtKind::Omega:
      return OrderElement::omega(i);
    case OtKind::OmegaRev:
      return OrderElement::omega_rev(i);
    case OtKind::Zeta: {
      if (i == 0) return OrderElement::zeta(0);
      if (mpz_odd_p(i.get_mpz_t())) return OrderElement::zeta((i + 1) / 2);
      return OrderElement::zeta(-(i / 2));
    }
    case OtKind::Eta:
      return OrderElement::eta(eta_at(i));
    case OtKind::Sum: {
      auto sl = order_size(t->left), sr = order_size(t->right);
      if (sl) {
        if (i < *sl) return OrderElement::sum_left(enumerate_at(t->left, i));
        return OrderElement::sum_right(enumerate_at(t->right, i - *sl));
      }
      if (sr) {
        if (i < *sr) return OrderElement::sum_right(enumerate_at(t->right, i));
        return OrderElement::sum_left(enumerate_at(t->left, i - *sr));
      }
      if (mpz_even_p(i.get_mpz_t()))
        return OrderElement::sum_left(enumerate_at(t->left, i / 2));
      return OrderElement::sum_right(enumerate_at(t->right, (i - 1) / 2));
    }
    case OtKind::LexProd: {
      auto sa = order_size(t->left), sb = order_size(t->right);
      if (sa && sb) {
        if (i >= *sa * *sb) throw DomainError("enumeration index out of range");
        return OrderElement::pair(enumerate_at(t->left, i / *sb),
                                  enumerate_at(t->right, i % *sb));
      }
      if (sa)
        return OrderElement::pair(enumerate_at(t->left, i % *sa),
                                  enumerate_at(t->right, i / *sa));
      if (sb)
        return OrderElement::pair(enumerate_at(t->left, i / *sb),
                                  enumerate_at(t->right, i % *sb));
      Int x, y;
      uncantor2(i, x, y);
      return OrderElement::pair(enumerate_at(t->left, x),
                                enumerate_at(t->right, y));
    }
  }
  throw DomainError("unreachable order kind");
}

Int index_of(const OrderTypePtr& t, const ElemPtr& e) {
  validate_element(t, e);
  switch (t->kind) {
    case OtKind::Fin:
    case OtKind::Omega:
    case OtKind::OmegaRev:
      return e->n;
    case OtKind::Zeta: {
      if (e->n == 0) return 0;
      if (e->n > 0) return 2 * e->n - 1;
      return -2 * e->n;
    }
    case OtKind::Eta:
      return eta_index(e->q);
    case OtKind::Sum: {
      auto sl = order_size(t->left), sr = order_size(t->right);
      Int inner = index_of(e->in_right ? t->right : t->left, e->a);
      if (sl) return e->in_right ? *sl + inner : inner;
      if (sr) return e->in_right ? inner : *sr + inner;
      return e->in_right ? Int(2 * inner + 1) : Int(2 * inner);
    }
    case OtKind::LexProd: {
      auto sa = order_size(t->left), sb = order_size(t->right);
      Int x = index_of(t->left, e->a);
      Int y = index_of(t->right, e->b);
      if (sa && sb) return x * *sb + y;
      if (sa) return y * *sa + x;
      if (sb) return x * *sb + y;
      return cantor2(x, y);
    }
  }
  throw DomainError("unreachable order kind");
}

namespace {

std::optional<Int> min_opt(std::optional<Int> a, std::optional<Int> b) {
  if (!a) return b;
  if (!b) return a;
  return a < b ? a : b;
}

// Enumeration index of the pair (major index x, minor index y); strictly
// increasing in each coordinate under every size regime.
Int pair_index(const OrderTypePtr& t, const Int& x, const Int& y) {
  auto sa = order_size(t->left), sb = order_size(t->right);
  if (sa && sb) return x * *sb + y;
  if (sa) return y * *sa + x;
  if (sb) return x * *sb + y;
  return cantor2(x, y);
}

}  // namespace

std::optional<Int> first_index_between(const OrderTypePtr& t,
                                       const std::optional<ElemPtr>& lo,
                                       const std::optional<ElemPtr>& hi) {
  if (lo) validate_element(t, *lo);
  if (hi) validate_element(t, *hi);
  switch (t->kind) {
    case OtKind::Fin: {
      Int n_min = lo ? (*lo)->n + 1 : Int(0);
      if (n_min >= t->fin_n) return std::nullopt;
      if (hi && n_min >= (*hi)->n) return std::nullopt;
      return n_min;
    }
    case OtKind::Omega: {
      Int n_min = lo ? (*lo)->n + 1 : Int(0);
      if (hi && n_min >= (*hi)->n) return std::nullopt;
      return n_min;
    }
    case OtKind::OmegaRev: {
      // order position of index k is -k, so the cut flips
      Int k_min = hi ? (*hi)->n + 1 : Int(0);
      if (lo && k_min >= (*lo)->n) return std::nullopt;
      return k_min;
    }
    case OtKind::Zeta: {
      std::optional<Int> best;
      bool zero_ok = (!lo || (*lo)->n < 0) && (!hi || (*hi)->n > 0);
      if (zero_ok) best = min_opt(best, Int(0));
      Int zp = 1;
      if (lo && (*lo)->n + 1 > zp) zp = (*lo)->n + 1;
      if (!hi || zp < (*hi)->n) best = min_opt(best, Int(2 * zp - 1));
      Int zn = -1;
      if (hi && (*hi)->n - 1 < zn) zn = (*hi)->n - 1;
      if (!lo || zn > (*lo)->n) best = min_opt(best, Int(-2 * zn));
      return best;
    }
    case OtKind::Eta: {
      std::optional<Rat> ql, qh;
      if (lo) ql = (*lo)->q;
      if (hi) qh = (*hi)->q;
      return eta_first_between(ql, qh);
    }
    case OtKind::Sum: {
      bool a_allowed = !(lo && (*lo)->in_right);
      bool b_allowed = !(hi && !(*hi)->in_right);
      std::optional<ElemPtr> alo, ahi, blo, bhi;
      if (lo && !(*lo)->in_right) alo = (*lo)->a;
      if (hi && !(*hi)->in_right) ahi = (*hi)->a;
      if (lo && (*lo)->in_right) blo = (*lo)->a;
      if (hi && (*hi)->in_right) bhi = (*hi)->a;
      std::optional<Int> ia, ib;
      if (a_allowed) ia = first_index_between(t->left, alo, ahi);
      if (b_allowed) ib = first_index_between(t->right, blo, bhi);
      auto sl = order_size(t->left), sr = order_size(t->right);
      if (sl) {
        if (ia) return ia;
        if (ib) return *sl + *ib;
        return std::nullopt;
      }
      if (sr) {
        if (ib) return ib;
        if (ia) return *sr + *ia;
        return std::nullopt;
      }
      std::optional<Int> best;
      if (ia) best = min_opt(best, 2 * *ia);
      if (ib) best = min_opt(best, 2 * *ib + 1);
      return best;
    }
    case OtKind::LexProd: {
      std::optional<Int> best;
      // majors strictly inside the cut, minor free
      {
        std::optional<ElemPtr> alo, ahi;
        if (lo) alo = (*lo)->a;
        if (hi) ahi = (*hi)->a;
        auto xa = first_index_between(t->left, alo, ahi);
        if (xa) best = min_opt(best, pair_index(t, *xa, 0));
      }
      bool bounds_share_major =
          lo && hi && elements_equal(t->left, (*lo)->a, (*hi)->a);
      // major equal to the lower bound's major
      if (lo) {
        std::optional<ElemPtr> bhi;
        if (bounds_share_major) bhi = (*hi)->b;
        auto yb = first_index_between(t->right, (*lo)->b, bhi);
        if (yb) best = min_opt(best, pair_index(t, index_of(t->left, (*lo)->a), *yb));
      }
      // major equal to the upper bound's major
      if (hi && !bounds_share_major) {
        auto yb = first_index_between(t->right, std::nullopt, (*hi)->b);
        if (yb) best = min_opt(best, pair_index(t, index_of(t->left, (*hi)->a), *yb));
      }
      return best;
    }
  }
  throw DomainError("unreachable order kind");
}

// ---------------------------------------------------------------------------
// Order type text

namespace {

struct TypeParser {
  const std::string& s;
  std::size_t p = 0;

  void skip() {
    while (p < s.size() && std::isspace(static_cast<unsigned char>(s[p]))) ++p;
  }
  bool atom_starts(std::size_t q) const {
    if (q >= s.size()) return false;
    unsigned char c = s[q];
    return std::isdigit(c) || std::isalpha(c) || c == '(';
  }

  OrderTypePtr atom() {
    skip();
    if (p >= s.size()) throw ParseError("expected order type atom", p);
    unsigned char c = s[p];
    if (std::isdigit(c)) {
      std::size_t start = p;
      while (p < s.size() && std::isdigit(static_cast<unsigned char>(s[p]))) ++p;
      Int v(s.substr(start, p - start));
      if (v == 0) throw ParseError("finite order must have at least one element", start);
      if (!v.fits_slong_p()) throw ParseError("finite order too large", start);
      return OrderType::fin(v.get_si());
    }
    if (std::isalpha(c)) {
      std::size_t start = p;
      while (p < s.size() && std::isalpha(static_cast<unsigned char>(s[p]))) ++p;
      std::string name = s.substr(start, p - start);
      if (name == "omega") {
        // a star glued to "omega" reverses it unless an atom begins right
        // after the star (then the star is the product operator)
        if (p < s.size() && s[p] == '*' && !atom_starts(p + 1)) {
          ++p;
          return OrderType::omega_rev();
        }
        return OrderType::omega();
      }
      if (name == "zeta") return OrderType::zeta();
      if (name == "eta") return OrderType::eta();
      throw ParseError("unknown order type name '" + name + "'", start);
    }
    if (c == '(') {
      ++p;
      auto inner = sum();
      skip();
      if (p >= s.size() || s[p] != ')') throw ParseError("expected ')'", p);
      ++p;
      return inner;
    }
    throw ParseError("expected order type atom", p);
  }

  OrderTypePtr prod() {
    auto acc = atom();
    for (;;) {
      skip();
      if (p < s.size() && s[p] == '*') {
        ++p;
        acc = OrderType::lex_prod(acc, atom());
      } else {
        return acc;
      }
    }
  }

  OrderTypePtr sum() {
    auto acc = prod();
    for (;;) {
      skip();
      if (p < s.size() && s[p] == '+') {
        ++p;
        acc = OrderType::sum(acc, prod());
      } else {
        return acc;
      }
    }
  }
};

std::string render_type(const OrderTypePtr& t, int need) {
  int mine;
  std::string out;
  switch (t->kind) {
    case OtKind::Fin:
      return std::to_string(t->fin_n);
    case OtKind::Omega:
      return "omega";
    case OtKind::OmegaRev:
      return "omega*";
    case OtKind::Zeta:
      return "zeta";
    case OtKind::Eta:
      return "eta";
    case OtKind::Sum:
      mine = 0;
      out = render_type(t->left, 0) + " + " + render_type(t->right, 1);
      break;
    case OtKind::LexProd:
      mine = 1;
      out = render_type(t->left, 1) + " * " + render_type(t->right, 2);
      break;
    default:
      throw DomainError("unreachable order kind");
  }
  if (mine < need) return "(" + out + ")";
  return out;
}

}  // namespace

OrderTypePtr parse_order_type(const std::string& text) {
  TypeParser tp{text};
  auto t = tp.sum();
  tp.skip();
  if (tp.p != text.size()) throw ParseError("unexpected trailing input", tp.p);
  return t;
}

std::string to_string(const OrderTypePtr& t) { return render_type(t, 0); }

// ---------------------------------------------------------------------------
// Element text

namespace {

struct ElemParser {
  const std::string& s;
  std::size_t p = 0;

  void skip() {
    while (p < s.size() && std::isspace(static_cast<unsigned char>(s[p]))) ++p;
  }
  void expect(char c) {
    skip();
    if (p >= s.size() || s[p] != c)
      throw ParseError(std::string("expected '") + c + "'", p);
    ++p;
  }

  Int read_int() {
    skip();
    std::size_t start = p;
    if (p < s.size() && (s[p] == '-' || s[p] == '+')) ++p;
    std::size_t digits = p;
    while (p < s.size() && std::isdigit(static_cast<unsigned char>(s[p]))) ++p;
    if (p == digits) throw ParseError("expected integer", start);
    return Int(s.substr(start, p - start));
  }

  Rat read_rat() {
    Int num = read_int();
    if (p < s.size() && s[p] == '/') {
      ++p;
      std::size_t dpos = p;
      Int den = read_int();
      if (den == 0) throw ParseError("zero denominator", dpos);
      Rat r(num, den);
      r.canonicalize();
      return r;
    }
    return Rat(num);
  }

  ElemPtr element(const OrderTypePtr& t) {
    skip();
    switch (t->kind) {
      case OtKind::Fin:
        return OrderElement::fin(read_int());
      case OtKind::Omega:
        return OrderElement::omega(read_int());
      case OtKind::OmegaRev: {
        // text shows the order position, a non-positive integer
        Int v = read_int();
        if (v > 0) throw ParseError("reversed omega position must be <= 0", p);
        return OrderElement::omega_rev(-v);
      }
      case OtKind::Zeta:
        return OrderElement::zeta(read_int());
      case OtKind::Eta:
        return OrderElement::eta(read_rat());
      case OtKind::Sum: {
        if (p >= s.size() || (s[p] != 'L' && s[p] != 'R'))
          throw ParseError("expected 'L(...)' or 'R(...)'", p);
        bool right = s[p] == 'R';
        ++p;
        expect('(');
        auto inner = element(right ? t->right : t->left);
        expect(')');
        return right ? OrderElement::sum_right(inner) : OrderElement::sum_left(inner);
      }
      case OtKind::LexProd: {
        expect('(');
        auto major = element(t->left);
        expect(',');
        auto minor = element(t->right);
        expect(')');
        return OrderElement::pair(major, minor);
      }
    }
    throw ParseError("unreachable order kind", p);
  }
};

}  // namespace

std::string element_to_string(const OrderTypePtr& t, const ElemPtr& e) {
  validate_element(t, e);
  switch (t->kind) {
    case OtKind::Fin:
    case OtKind::Omega:
      return e->n.get_str();
    case OtKind::OmegaRev:
      return Int(-e->n).get_str();
    case OtKind::Zeta:
      return e->n.get_str();
    case OtKind::Eta:
      return rat_to_string(e->q);
    case OtKind::Sum:
      return (e->in_right ? "R(" : "L(") +
             element_to_string(e->in_right ? t->right : t->left, e->a) + ")";
    case OtKind::LexProd:
      return "(" + element_to_string(t->left, e->a) + "," +
             element_to_string(t->right, e->b) + ")";
  }
  throw DomainError("unreachable order kind");
}

ElemPtr parse_element(const OrderTypePtr& t, const std::string& text) {
  ElemParser ep{text};
  auto e = ep.element(t);
  ep.skip();
  if (ep.p != text.size()) throw ParseError("unexpected trailing input", ep.p);
  validate_element(t, e);
  return e;
}

}  // namespace tower
