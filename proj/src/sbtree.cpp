#include "tower/sbtree.hpp"

#include <cassert>
#include <utility>
#include <vector>

namespace tower {

namespace {

// (bit, run length) pairs; bit 1 = right child, bit 0 = left child.
using Runs = std::vector<std::pair<int, Int>>;

Int runs_to_node(const Runs& root_to_leaf) {
  Int n = 1;
  for (const auto& [bit, k] : root_to_leaf) {
    unsigned long kk = mpz_get_ui(k.get_mpz_t());
    mpz_mul_2exp(n.get_mpz_t(), n.get_mpz_t(), kk);
    if (bit) {
      Int ones = 1;
      mpz_mul_2exp(ones.get_mpz_t(), ones.get_mpz_t(), kk);
      n += ones - 1;
    }
  }
  return n;
}

// floor(a/b) with b > 0.
Int fdiv(const Int& a, const Int& b) {
  Int q;
  mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

}  // namespace

Int cw_number(const Rat& v) {
  if (sgn(v) <= 0) throw DomainError("cw_number: value must be positive");
  Int a = v.get_num(), b = v.get_den();
  Runs leaf_to_root;
  while (!(a == 1 && b == 1)) {
    if (a > b) {
      Int k = (b == 1) ? Int(a - 1) : fdiv(a, b);
      a -= k * b;
      leaf_to_root.emplace_back(1, k);
    } else {
      Int k = (a == 1) ? Int(b - 1) : fdiv(b, a);
      b -= k * a;
      leaf_to_root.emplace_back(0, k);
    }
  }
  Runs root_to_leaf(leaf_to_root.rbegin(), leaf_to_root.rend());
  return runs_to_node(root_to_leaf);
}

Rat cw_value(const Int& n) {
  if (n < 1) throw DomainError("cw_value: node numbers start at 1");
  Int a = 1, b = 1;
  std::size_t len = mpz_sizeinbase(n.get_mpz_t(), 2);
  // Scan bits below the leading one, most significant first, grouping runs.
  std::size_t i = len - 1;
  while (i > 0) {
    int bit = mpz_tstbit(n.get_mpz_t(), i - 1);
    std::size_t j = i;
    while (j > 0 && mpz_tstbit(n.get_mpz_t(), j - 1) == bit) --j;
    Int k(static_cast<unsigned long>(i - j));
    if (bit)
      a += k * b;
    else
      b += k * a;
    i = j;
  }
  return Rat(a, b);
}

Rat eta_at(const Int& i) {
  if (i < 0) throw DomainError("eta_at: negative index");
  if (i == 0) return Rat(0);
  Int k = (i - 1) / 2;
  Rat v = cw_value(k + 1);
  if (mpz_even_p(i.get_mpz_t())) v = -v;
  return v;
}

Int eta_index(const Rat& v) {
  if (v == 0) return Int(0);
  if (v > 0) return 2 * (cw_number(v) - 1) + 1;
  return 2 * (cw_number(-v) - 1) + 2;
}

namespace {

// Directed Stern-Brocot walk toward the open interval (lo, hi), starting
// from bounds L = ln/ld, R = rn/rd (R may be the formal 1/0). Preconditions:
// L <= lo < hi <= R with lo/hi optional. Returns the first mediant inside,
// i.e. the unique value of minimal depth.
Rat sb_walk(Int ln, Int ld, Int rn, Int rd, const std::optional<Rat>& lo,
            const std::optional<Rat>& hi) {
  while (true) {
    if (lo) {
      const Int& u = lo->get_num();
      const Int& w = lo->get_den();
      Int c = rn * w - rd * u;  // > 0 since R > lo
      assert(c > 0);
      Int j = fdiv(u * ld - w * ln, c);
      if (j > 0) {
        ln += j * rn;
        ld += j * rd;
      }
    }
    if (hi) {
      const Int& u = hi->get_num();
      const Int& w = hi->get_den();
      Int c = u * ld - w * ln;  // > 0 since L < hi
      assert(c > 0);
      Int j = fdiv(w * rn - u * rd, c);
      if (j > 0) {
        rn += j * ln;
        rd += j * ld;
      }
    }
    Rat m(ln + rn, ld + rd);
    if ((!lo || m > *lo) && (!hi || m < *hi)) return m;
  }
}

}  // namespace

std::optional<Rat> sb_simplest_positive_between(const std::optional<Rat>& lo,
                                                const std::optional<Rat>& hi) {
  std::optional<Rat> lo_eff;
  if (lo && *lo >= 0) lo_eff = *lo;
  if (hi) {
    if (*hi <= 0) return std::nullopt;
    if (lo_eff && *lo_eff >= *hi) return std::nullopt;
  }
  return sb_walk(Int(0), Int(1), Int(1), Int(0), lo_eff, hi);
}

std::optional<Int> eta_first_between(const std::optional<Rat>& lo,
                                     const std::optional<Rat>& hi) {
  std::optional<Int> best;
  auto consider = [&](const Int& idx) {
    if (!best || idx < *best) best = idx;
  };
  if ((!lo || *lo < 0) && (!hi || *hi > 0)) consider(Int(0));
  if (auto vp = sb_simplest_positive_between(lo, hi))
    consider(2 * (cw_number(*vp) - 1) + 1);
  std::optional<Rat> nlo, nhi;
  if (hi) nlo = -*hi;
  if (lo) nhi = -*lo;
  if (auto vn = sb_simplest_positive_between(nlo, nhi))
    consider(2 * (cw_number(*vn) - 1) + 2);
  return best;
}

Rat unit_at(const Int& i) {
  if (i < 0) throw DomainError("unit_at: negative index");
  Int n = i + 1;
  Int ln = 0, ld = 1, rn = 1, rd = 1;
  std::size_t len = mpz_sizeinbase(n.get_mpz_t(), 2);
  std::size_t b = len - 1;
  while (b > 0) {
    int bit = mpz_tstbit(n.get_mpz_t(), b - 1);
    std::size_t j = b;
    while (j > 0 && mpz_tstbit(n.get_mpz_t(), j - 1) == bit) --j;
    Int k(static_cast<unsigned long>(b - j));
    if (bit) {
      ln += k * rn;
      ld += k * rd;
    } else {
      rn += k * ln;
      rd += k * ld;
    }
    b = j;
  }
  return Rat(ln + rn, ld + rd);
}

Int unit_index(const Rat& v) {
  if (v <= 0 || v >= 1) throw DomainError("unit_index: value outside (0,1)");
  Int ln = 0, ld = 1, rn = 1, rd = 1;
  const Int& u = v.get_num();
  const Int& w = v.get_den();
  Runs root_to_leaf;
  while (true) {
    Rat m(ln + rn, ld + rd);
    if (m == v) break;
    if (v < m) {
      // j consecutive left steps keep the mediant above v.
      Int c = u * ld - w * ln;  // > 0 since L < v
      Int j = fdiv(w * rn - u * rd - 1, c);
      assert(j >= 1);
      rn += j * ln;
      rd += j * ld;
      root_to_leaf.emplace_back(0, j);
    } else {
      Int c = rn * w - rd * u;  // > 0 since R > v
      Int j = fdiv(u * ld - w * ln - 1, c);
      assert(j >= 1);
      ln += j * rn;
      ld += j * rd;
      root_to_leaf.emplace_back(1, j);
    }
  }
  return runs_to_node(root_to_leaf) - 1;
}

std::optional<Int> unit_first_between(const std::optional<Rat>& lo,
                                      const std::optional<Rat>& hi) {
  std::optional<Rat> lo_eff, hi_eff;
  if (lo && *lo > 0) lo_eff = *lo;
  if (hi && *hi < 1) hi_eff = *hi;
  if (lo && *lo >= 1) return std::nullopt;
  if (hi && *hi <= 0) return std::nullopt;
  if (lo_eff && hi_eff && *lo_eff >= *hi_eff) return std::nullopt;
  Rat v = sb_walk(Int(0), Int(1), Int(1), Int(1), lo_eff, hi_eff);
  return unit_index(v);
}

}  // namespace tower
