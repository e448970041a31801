#include "tower/levelindex.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <utility>

namespace tower {

namespace {

// Iterated exponentials overflow the library's default exponent range long
// before they exhaust precision; widen it to the maximum before any tower
// is evaluated. Idempotent, and repeated per thread in case the flags are
// thread-local in this build.
void widen_exponent_range() {
  thread_local bool widened = false;
  if (!widened) {
    mpfr_set_emax(mpfr_get_emax_max());
    mpfr_set_emin(mpfr_get_emin_min());
    widened = true;
  }
}

mpfr_prec_t prec_for(int digits) {
  if (digits < 2 || digits > 100000)
    throw DomainError("digit count out of the supported range");
  return static_cast<mpfr_prec_t>(digits * 3.3219280948873623) + 32;
}

// Outward-rounded enclosure used for every inexact index computation.
struct Enc {
  Real lo, hi;
  explicit Enc(mpfr_prec_t p) : lo(p), hi(p) {}
};

Enc enc_of_rat(const Rat& q, mpfr_prec_t p) {
  Enc e(p);
  mpfr_set_q(e.lo.get(), q.get_mpq_t(), MPFR_RNDD);
  mpfr_set_q(e.hi.get(), q.get_mpq_t(), MPFR_RNDU);
  return e;
}

Enc enc_of_index(const LevelIndex& x, mpfr_prec_t p) {
  if (x.index_exact()) return enc_of_rat(x.index_rational(), p);
  Enc e(p);
  mpfr_set(e.lo.get(), x.enclosure_lo(), MPFR_RNDD);
  mpfr_set(e.hi.get(), x.enclosure_hi(), MPFR_RNDU);
  return e;
}

void enc_log(Enc& e) {  // requires e.lo >= 1
  mpfr_log(e.lo.get(), e.lo.get(), MPFR_RNDD);
  mpfr_log(e.hi.get(), e.hi.get(), MPFR_RNDU);
}

void enc_exp(Enc& e) {
  mpfr_exp(e.lo.get(), e.lo.get(), MPFR_RNDD);
  mpfr_exp(e.hi.get(), e.hi.get(), MPFR_RNDU);
  if (mpfr_inf_p(e.hi.get()))
    throw PrecisionError(
        "iterated exponential left the representable exponent range");
}

Enc enc_inv(const Enc& e, mpfr_prec_t p) {  // requires e.lo > 0
  Enc r(p);
  mpfr_ui_div(r.lo.get(), 1, e.hi.get(), MPFR_RNDD);
  mpfr_ui_div(r.hi.get(), 1, e.lo.get(), MPFR_RNDU);
  return r;
}

// Flips an enclosure to the one of its negation.
void enc_neg(Enc& e) {
  mpfr_swap(e.lo.get(), e.hi.get());
  mpfr_neg(e.lo.get(), e.lo.get(), MPFR_RNDD);
  mpfr_neg(e.hi.get(), e.hi.get(), MPFR_RNDU);
}

// Iterates log until the enclosure lands decisively in [0,1); returns the
// iteration count. When an iterate straddles 1 the count itself is
// undecidable at this precision.
long normalize_enc(Enc& e) {
  long k = 0;
  while (true) {
    if (mpfr_cmp_ui(e.hi.get(), 1) < 0) return k;
    if (mpfr_cmp_ui(e.lo.get(), 1) < 0)
      throw PrecisionError("logarithm iterate cannot be separated from 1");
    enc_log(e);
    ++k;
    if (k > 1000000)
      throw PrecisionError("logarithm iteration does not land in [0,1)");
  }
}

long checked_height(const Int& m) {
  if (!m.fits_slong_p())
    throw PrecisionError("tower height exceeds any representable range");
  return m.get_si();
}

// Scientific decimal "0.<digits>e<exp>" of an mpfr value, deterministic.
// rnd controls the digit rounding, which matters for error bounds.
std::string real_decimal(mpfr_srcptr v, int sig, mpfr_rnd_t rnd) {
  if (mpfr_zero_p(v)) return "0e0";
  mpfr_exp_t ex;
  char* s = mpfr_get_str(nullptr, &ex, 10, static_cast<size_t>(sig), v, rnd);
  std::string digits(s);
  mpfr_free_str(s);
  bool neg = !digits.empty() && digits[0] == '-';
  std::string mant = neg ? digits.substr(1) : digits;
  return (neg ? std::string("-0.") : std::string("0.")) + mant + "e" +
         std::to_string(static_cast<long>(ex));
}

std::string double_text(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

}  // namespace

std::string to_string(LiCmp c) {
  switch (c) {
    case LiCmp::LT: return "LT";
    case LiCmp::EQ: return "EQ";
    case LiCmp::GT: return "GT";
    default: return "Unknown";
  }
}

LevelIndex::LevelIndex() = default;

const Rat& LevelIndex::index_rational() const {
  if (!exact_) throw DomainError("index is not exactly rational");
  return exact_r_;
}

double LevelIndex::index_approx() const {
  if (exact_) return exact_r_.get_d();
  Real mid(mpfr_get_prec(lo_.get()));
  mpfr_add(mid.get(), lo_.get(), hi_.get(), MPFR_RNDN);
  mpfr_div_2ui(mid.get(), mid.get(), 1, MPFR_RNDN);
  return mpfr_get_d(mid.get(), MPFR_RNDN);
}

double LevelIndex::index_width() const {
  if (exact_) return 0.0;
  Real w(mpfr_get_prec(lo_.get()));
  mpfr_sub(w.get(), hi_.get(), lo_.get(), MPFR_RNDU);
  return mpfr_get_d(w.get(), MPFR_RNDU);
}

void LevelIndex::set_exact_index(const Rat& r) {
  exact_ = true;
  exact_r_ = r;
  mpfr_prec_t p = prec_for(digits_);
  Real lo(p), hi(p);
  mpfr_set_q(lo.get(), r.get_mpq_t(), MPFR_RNDD);
  mpfr_set_q(hi.get(), r.get_mpq_t(), MPFR_RNDU);
  lo_ = std::move(lo);
  hi_ = std::move(hi);
}

std::string LevelIndex::to_text() const {
  std::string idx = exact_ ? rat_to_string(exact_r_)
                           : "~" + double_text(index_approx());
  std::string core = "E^" + int_to_string(level_) + "(" + idx + ")";
  return reciprocal_ ? "1/" + core : core;
}

nlohmann::json LevelIndex::to_json() const {
  nlohmann::json j;
  j["reciprocal"] = reciprocal_;
  if (level_.fits_slong_p())
    j["level"] = level_.get_si();
  else
    j["level"] = int_to_string(level_);
  if (exact_) {
    j["index"] = rat_to_string(exact_r_);
    j["err"] = "0";
  } else {
    mpfr_prec_t p = mpfr_get_prec(lo_.get());
    Real mid(p), delta(p), slack(p);
    mpfr_add(mid.get(), lo_.get(), hi_.get(), MPFR_RNDN);
    mpfr_div_2ui(mid.get(), mid.get(), 1, MPFR_RNDN);
    mpfr_sub(delta.get(), hi_.get(), lo_.get(), MPFR_RNDU);
    // The printed midpoint is itself rounded; widen the bound past that
    // rounding so the reloaded enclosure still contains the index.
    std::string sl = "1e-" + std::to_string(digits_ + 1);
    mpfr_set_str(slack.get(), sl.c_str(), 10, MPFR_RNDU);
    mpfr_add(delta.get(), delta.get(), slack.get(), MPFR_RNDU);
    j["index"] = real_decimal(mid.get(), digits_ + 4, MPFR_RNDN);
    j["err"] = real_decimal(delta.get(), 4, MPFR_RNDU);
  }
  j["digits"] = digits_;
  return j;
}

LevelIndex LevelIndex::from_json(const nlohmann::json& j) {
  widen_exponent_range();
  LevelIndex out;
  out.digits_ = j.value("digits", 30);
  mpfr_prec_t p = prec_for(out.digits_);
  out.reciprocal_ = j.at("reciprocal").get<bool>();
  const auto& lv = j.at("level");
  out.level_ = lv.is_string() ? Int(lv.get<std::string>())
                              : Int(lv.get<long>());
  if (out.level_ < 0) throw DomainError("negative level");
  std::string idx = j.at("index").get<std::string>();
  std::string err = j.at("err").get<std::string>();
  if (err == "0") {
    Rat r = parse_rational(idx);
    if (r < 0 || r >= 1) throw DomainError("exact index out of [0,1)");
    out.set_exact_index(r);
  } else {
    Real lo(p), hi(p), e(p);
    if (mpfr_set_str(lo.get(), idx.c_str(), 10, MPFR_RNDD) != 0 ||
        mpfr_set_str(hi.get(), idx.c_str(), 10, MPFR_RNDU) != 0 ||
        mpfr_set_str(e.get(), err.c_str(), 10, MPFR_RNDU) != 0)
      throw DomainError("unparseable index or err");
    mpfr_sub(lo.get(), lo.get(), e.get(), MPFR_RNDD);
    mpfr_add(hi.get(), hi.get(), e.get(), MPFR_RNDU);
    if (mpfr_sgn(lo.get()) < 0) mpfr_set_zero(lo.get(), 1);
    if (mpfr_cmp_ui(hi.get(), 1) > 0) mpfr_set_ui(hi.get(), 1, MPFR_RNDU);
    out.exact_ = false;
    out.lo_ = std::move(lo);
    out.hi_ = std::move(hi);
  }
  if (out.level_ == 0 &&
      !(!out.reciprocal_ && out.exact_ && out.exact_r_ == 0))
    throw DomainError("level 0 holds only the zero value");
  if (out.reciprocal_ && out.level_ == 1 && out.exact_ && out.exact_r_ == 0)
    throw DomainError("the reciprocal of 1 is not a normal form");
  return out;
}

bool li_identical(const LevelIndex& a, const LevelIndex& b) {
  if (a.reciprocal_ != b.reciprocal_ || a.level_ != b.level_ ||
      a.exact_ != b.exact_)
    return false;
  if (a.exact_) return a.exact_r_ == b.exact_r_;
  return mpfr_equal_p(a.lo_.get(), b.lo_.get()) &&
         mpfr_equal_p(a.hi_.get(), b.hi_.get());
}

LevelIndex li_from_rational(const Rat& q, int digits) {
  widen_exponent_range();
  (void)prec_for(digits);
  if (q < 0)
    throw DomainError("tower values are positive; signs go through tr_eval");
  if (q == 0) {
    LevelIndex out;
    out.digits_ = digits;
    return out;
  }
  if (q < 1) {
    LevelIndex out = li_from_rational(Rat(Rat(1) / q), digits);
    out.reciprocal_ = true;
    return out;
  }
  if (q == 1) {
    LevelIndex out;
    out.digits_ = digits;
    out.level_ = 1;
    out.set_exact_index(0);
    return out;
  }
  // q > 1: iterated-log normalization; a straddle of 1 is retried at higher
  // working precision, which an exact rational start always supports.
  int d = digits;
  for (int attempt = 0;; ++attempt, d *= 2) {
    Enc e = enc_of_rat(q, prec_for(d));
    try {
      long k = normalize_enc(e);
      LevelIndex out;
      out.digits_ = digits;
      out.level_ = k;
      out.exact_ = false;
      out.lo_ = std::move(e.lo);
      out.hi_ = std::move(e.hi);
      return out;
    } catch (const PrecisionError&) {
      if (attempt == 4) throw;
    }
  }
}

LevelIndex li_exp(const LevelIndex& x) {
  widen_exponent_range();
  if (x.is_zero()) {
    LevelIndex out;
    out.digits_ = x.digits_;
    out.level_ = 1;
    out.set_exact_index(0);
    return out;
  }
  if (!x.reciprocal_) {
    LevelIndex out = x;
    out.level_ += 1;
    return out;
  }
  // The argument is 1/exp^m(r), a value in (0,1); its exponential sits at
  // level 1 with the argument itself as index. That index needs the tower.
  mpfr_prec_t p = prec_for(x.digits_);
  Enc e = enc_of_index(x, p);
  long m = checked_height(x.level_);
  for (long i = 0; i < m; ++i) enc_exp(e);
  Enc t = enc_inv(e, p);
  LevelIndex out;
  out.digits_ = x.digits_;
  out.level_ = 1;
  out.exact_ = false;
  out.lo_ = std::move(t.lo);
  out.hi_ = std::move(t.hi);
  return out;
}

LevelIndex li_log(const LevelIndex& x) {
  widen_exponent_range();
  if (x.is_zero()) throw DomainError("log of zero");
  if (x.reciprocal_)
    throw DomainError("log of a value below 1 is negative and has no tower form");
  if (x.level_ >= 2) {
    LevelIndex out = x;
    out.level_ -= 1;
    return out;
  }
  // Level 1: the log is the index itself, now a value in its own right.
  if (x.exact_) return li_from_rational(x.exact_r_, x.digits_);
  if (mpfr_sgn(x.lo_.get()) <= 0)
    throw PrecisionError("index enclosure touches zero; log may be zero");
  mpfr_prec_t p = prec_for(x.digits_);
  Enc e = enc_of_index(x, p);
  Enc inv = enc_inv(e, p);
  long k = normalize_enc(inv);
  LevelIndex out;
  out.digits_ = x.digits_;
  out.reciprocal_ = true;
  out.level_ = k;
  out.exact_ = false;
  out.lo_ = std::move(inv.lo);
  out.hi_ = std::move(inv.hi);
  return out;
}

LevelIndex li_mul(const LevelIndex& x, const LevelIndex& y) {
  widen_exponent_range();
  if (x.is_zero() || y.is_zero())
    throw DomainError("multiplication needs positive operands");
  int digits = std::max(x.digits_, y.digits_);
  if (x.is_one()) {
    LevelIndex out = y;
    out.digits_ = digits;
    return out;
  }
  if (y.is_one()) {
    LevelIndex out = x;
    out.digits_ = digits;
    return out;
  }
  // A value and its exact reciprocal cancel to exactly 1.
  if (x.reciprocal_ != y.reciprocal_ && x.level_ == y.level_ && x.exact_ &&
      y.exact_ && x.exact_r_ == y.exact_r_) {
    LevelIndex out;
    out.digits_ = digits;
    out.level_ = 1;
    out.set_exact_index(0);
    return out;
  }
  // log x + log y; both logs are rational exactly when both levels are 1.
  if (x.level_ == 1 && y.level_ == 1 && x.exact_ && y.exact_) {
    Rat s = (x.reciprocal_ ? Rat(-x.exact_r_) : x.exact_r_) +
            (y.reciprocal_ ? Rat(-y.exact_r_) : y.exact_r_);
    bool rec = false;
    if (s < 0) {
      rec = true;
      s = -s;
    }
    LevelIndex out;
    if (s < 1) {
      out.digits_ = digits;
      out.level_ = 1;
      out.set_exact_index(s);
    } else {
      out = li_from_rational(s, digits);  // exp^k(r) = s
      out.level_ += 1;                    // e^s = exp^(k+1)(r)
    }
    out.reciprocal_ = rec;
    return out;
  }
  mpfr_prec_t p = prec_for(digits);
  auto log_enc = [&](const LevelIndex& v) {
    Enc e = enc_of_index(v, p);
    long m = checked_height(v.level_);
    for (long i = 1; i < m; ++i) enc_exp(e);
    return e;
  };
  Enc ex = log_enc(x);
  Enc ey = log_enc(y);
  if (x.reciprocal_) enc_neg(ex);
  if (y.reciprocal_) enc_neg(ey);
  Enc s(p);
  mpfr_add(s.lo.get(), ex.lo.get(), ey.lo.get(), MPFR_RNDD);
  mpfr_add(s.hi.get(), ex.hi.get(), ey.hi.get(), MPFR_RNDU);
  bool rec = false;
  if (mpfr_sgn(s.hi.get()) < 0) {
    rec = true;
    enc_neg(s);
  } else if (mpfr_sgn(s.lo.get()) < 0) {
    throw PrecisionError("product is too close to 1 to classify");
  }
  LevelIndex out;
  out.digits_ = digits;
  out.exact_ = false;
  out.reciprocal_ = rec;
  if (mpfr_cmp_ui(s.hi.get(), 1) < 0) {
    out.level_ = 1;
  } else if (mpfr_cmp_ui(s.lo.get(), 1) >= 0) {
    long k = normalize_enc(s);
    out.level_ = k + 1;
  } else {
    throw PrecisionError("log of the product cannot be separated from 1");
  }
  out.lo_ = std::move(s.lo);
  out.hi_ = std::move(s.hi);
  return out;
}

LiCmp li_compare(const LevelIndex& x, const LevelIndex& y) {
  if (x.is_zero() || y.is_zero()) {
    if (x.is_zero() && y.is_zero()) return LiCmp::EQ;
    return x.is_zero() ? LiCmp::LT : LiCmp::GT;
  }
  if (x.reciprocal_ != y.reciprocal_)
    return x.reciprocal_ ? LiCmp::LT : LiCmp::GT;
  LiCmp core;
  if (x.level_ != y.level_) {
    core = x.level_ < y.level_ ? LiCmp::LT : LiCmp::GT;
  } else if (x.exact_ && y.exact_) {
    int c = cmp(x.exact_r_, y.exact_r_);
    core = c < 0 ? LiCmp::LT : (c == 0 ? LiCmp::EQ : LiCmp::GT);
  } else {
    // Enclosure comparison; an exact operand acts as the point [r, r].
    auto sup_below_inf = [](const LevelIndex& a, const LevelIndex& b) {
      if (a.exact_ && b.exact_) return a.exact_r_ < b.exact_r_;
      if (a.exact_)
        return mpfr_cmp_q(b.lo_.get(), a.exact_r_.get_mpq_t()) > 0;
      if (b.exact_)
        return mpfr_cmp_q(a.hi_.get(), b.exact_r_.get_mpq_t()) < 0;
      return mpfr_less_p(a.hi_.get(), b.lo_.get()) != 0;
    };
    if (sup_below_inf(x, y)) {
      core = LiCmp::LT;
    } else if (sup_below_inf(y, x)) {
      core = LiCmp::GT;
    } else {
      // Two point enclosures that are not strictly ordered coincide.
      bool xp = x.exact_ || mpfr_equal_p(x.lo_.get(), x.hi_.get());
      bool yp = y.exact_ || mpfr_equal_p(y.lo_.get(), y.hi_.get());
      core = (xp && yp) ? LiCmp::EQ : LiCmp::Unknown;
    }
  }
  if (x.reciprocal_) {
    if (core == LiCmp::LT) core = LiCmp::GT;
    else if (core == LiCmp::GT) core = LiCmp::LT;
  }
  return core;
}

LevelIndex tr_eval(const Rat& x, int digits) {
  widen_exponent_range();
  if (x < 0) {
    LevelIndex out = tr_eval(Rat(-x), digits);
    out.reciprocal_ = true;
    return out;
  }
  Int m = rat_floor(x);
  LevelIndex out;
  out.digits_ = digits;
  out.level_ = m + 1;
  out.set_exact_index(Rat(x - Rat(m)));
  return out;
}

SlogValue slog(const LevelIndex& x) {
  if (x.is_zero()) throw DomainError("slog needs a positive value");
  SlogValue out;
  if (x.index_exact()) {
    out.exact = true;
    Int lm = x.level() - 1;
    out.value = Rat(lm) + x.index_rational();
    if (x.reciprocal()) out.value = -out.value;
    out.approx = out.value.get_d();
  } else {
    out.exact = false;
    double v = x.level().get_d() - 1.0 + x.index_approx();
    out.approx = x.reciprocal() ? -v : v;
  }
  return out;
}

std::string SlogValue::to_text() const {
  if (exact) return rat_to_string(value);
  return "~" + double_text(approx);
}

double tr_value(double x) {
  if (x < 0) return 1.0 / tr_value(-x);
  double m = std::floor(x);
  double v = x - m;
  long k = static_cast<long>(m) + 1;
  for (long i = 0; i < k; ++i) v = std::exp(v);
  return v;
}

double tr_derivative(double x) {
  if (x < 0)
    throw DomainError("the product form of the derivative needs x >= 0");
  long m = static_cast<long>(std::floor(x));
  double d = std::exp(x - m);
  for (long i = 1; i <= m; ++i) d *= std::exp(tr_value(x - static_cast<double>(i)));
  return d;
}

nlohmann::json SuiteReport::to_json() const {
  return nlohmann::json{{"suite", suite},
                        {"checks", checks},
                        {"seed", seed},
                        {"passed", passed()},
                        {"violations", violations}};
}

SuiteReport check_axioms(std::size_t samples, std::uint64_t seed) {
  SuiteReport rep;
  rep.suite = "axioms";
  rep.seed = seed;
  std::mt19937_64 rng(seed);
  auto draw = [&]() {
    long den = 1 + static_cast<long>(rng() % 16);
    long num = static_cast<long>(rng() % static_cast<std::uint64_t>(100 * den + 1)) -
               50 * den;
    Rat q{Int(num), Int(den)};
    q.canonicalize();
    return q;
  };
  std::vector<Rat> xs;
  xs.reserve(samples);
  for (std::size_t i = 0; i < samples; ++i) xs.push_back(draw());

  for (const Rat& x : xs) {
    LevelIndex t = tr_eval(x);
    LevelIndex u = tr_eval(Rat(-x));
    ++rep.checks;
    bool mirror =
        x == 0 ? (t.is_one() && u.is_one())
               : (t.level() == u.level() && t.index_exact() && u.index_exact() &&
                  t.index_rational() == u.index_rational() &&
                  t.reciprocal() != u.reciprocal());
    if (!mirror)
      rep.violations.push_back("reciprocal pairing fails at x = " +
                               rat_to_string(x));
    ++rep.checks;
    if (!li_mul(t, u).is_one())
      rep.violations.push_back("T(x)*T(-x) != 1 at x = " + rat_to_string(x));

    if (x >= 0) {
      ++rep.checks;
      if (!li_identical(tr_eval(Rat(x + 1)), li_exp(t)))
        rep.violations.push_back("T(x+1) != e(T(x)) at x = " + rat_to_string(x));
      for (int m = -3; m <= 3; ++m) {
        if (x + m < 0) continue;
        LevelIndex got = t;
        for (int i = 0; i < m; ++i) got = li_exp(got);
        for (int i = 0; i > m; --i) got = li_log(got);
        ++rep.checks;
        if (!li_identical(tr_eval(Rat(x + m)), got))
          rep.violations.push_back("shift T(x+m) = e^m(T(x)) fails at x = " +
                                   rat_to_string(x) + ", m = " +
                                   std::to_string(m));
      }
    }

    // On [0,1) the tower has level 1 and index x, which is exp itself.
    Rat frac = x - Rat(rat_floor(x));
    LevelIndex w = tr_eval(frac);
    ++rep.checks;
    if (!(w.level() == 1 && w.index_exact() && w.index_rational() == frac))
      rep.violations.push_back("T != e on [0,1) at x = " + rat_to_string(frac));
  }

  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  for (std::size_t i = 1; i < xs.size(); ++i) {
    ++rep.checks;
    if (li_compare(tr_eval(xs[i - 1]), tr_eval(xs[i])) != LiCmp::LT)
      rep.violations.push_back("monotonicity fails between " +
                               rat_to_string(xs[i - 1]) + " and " +
                               rat_to_string(xs[i]));
  }
  return rep;
}

SuiteReport check_growth(int n_max, int window, std::uint64_t seed) {
  if (n_max < 1) throw DomainError("n_max must be at least 1");
  SuiteReport rep;
  rep.suite = "growth";
  rep.seed = seed;

  for (int n = 1; n <= n_max; ++n) {
    Rat base((n + 1) * (n + 1));
    Rat top = base + window;
    for (Rat a = base; a <= top; a += Rat(1, 4)) {
      ++rep.checks;
      try {
        LevelIndex rhs = li_from_rational(a);
        for (int i = 0; i < n; ++i) rhs = li_exp(rhs);
        if (li_compare(tr_eval(a), rhs) != LiCmp::GT)
          rep.violations.push_back("T(a) > e^" + std::to_string(n) +
                                   "(a) fails at a = " + rat_to_string(a));
      } catch (const PrecisionError& e) {
        rep.violations.push_back("precision exhausted comparing T(a) with e^" +
                                 std::to_string(n) + "(a) at a = " +
                                 rat_to_string(a) + ": " + e.what());
      }
    }
  }

  for (int n = 1; n <= 60; ++n) {
    ++rep.checks;
    Int p;
    mpz_ui_pow_ui(p.get_mpz_t(), 2, static_cast<unsigned long>(n));
    try {
      if (li_compare(tr_eval(Rat(n)), li_from_rational(Rat(p))) != LiCmp::GT)
        rep.violations.push_back("T(n) > 2^n fails at n = " + std::to_string(n));
    } catch (const PrecisionError& e) {
      rep.violations.push_back("precision exhausted comparing T(n) with 2^n at n = " +
                               std::to_string(n) + ": " + e.what());
    }
  }

  // 2^(m-n) >= m+1, settled in exact integers.
  for (int n = 1; n <= 10; ++n) {
    for (int m = (n + 1) * (n + 1); m <= 200; ++m) {
      ++rep.checks;
      Int p;
      mpz_ui_pow_ui(p.get_mpz_t(), 2, static_cast<unsigned long>(m - n));
      if (!(p >= m + 1))
        rep.violations.push_back("2^(m-n) >= m+1 fails at n = " +
                                 std::to_string(n) + ", m = " + std::to_string(m));
    }
  }

  // Seeded spot checks of the growth axiom e(a) > a^n once a >= n^2.
  std::mt19937_64 rng(seed);
  for (int i = 0; i < 100; ++i) {
    int n = 1 + static_cast<int>(rng() % 4);
    Rat a = Rat(n * n) + Rat(Int(rng() % 200), Int(1 + rng() % 8));
    a.canonicalize();
    ++rep.checks;
    try {
      Rat pw = 1;
      for (int k = 0; k < n; ++k) pw *= a;
      if (li_compare(li_exp(li_from_rational(a)), li_from_rational(pw)) !=
          LiCmp::GT)
        rep.violations.push_back("e(a) > a^n fails at a = " + rat_to_string(a) +
                                 ", n = " + std::to_string(n));
    } catch (const PrecisionError& e) {
      rep.violations.push_back("precision exhausted comparing e(a) with a^n at a = " +
                               rat_to_string(a) + ": " + e.what());
    }
  }
  return rep;
}

nlohmann::json DerivativeReport::to_json() const {
  nlohmann::json pts = nlohmann::json::array();
  for (const DerivativePoint& p : points)
    pts.push_back(nlohmann::json{{"x", p.x},
                                 {"closed_form", p.closed_form},
                                 {"centered", p.centered},
                                 {"rel_err", p.rel_err}});
  return nlohmann::json{{"h", h},
                        {"tol", tol},
                        {"points", pts},
                        {"second_left", second_left},
                        {"second_right", second_right},
                        {"second_left_expected", second_left_expected},
                        {"second_right_expected", second_right_expected},
                        {"second_tol", second_tol},
                        {"passed", passed()},
                        {"violations", violations}};
}

DerivativeReport check_derivative(const std::vector<double>& points, double h,
                                  double tol) {
  if (!(h > 0) || !(tol > 0)) throw DomainError("h and tol must be positive");
  DerivativeReport rep;
  rep.h = h;
  rep.tol = tol;
  for (double x : points) {
    DerivativePoint p;
    p.x = x;
    p.closed_form = tr_derivative(x);
    p.centered = (tr_value(x + h) - tr_value(x - h)) / (2 * h);
    p.rel_err = std::abs(p.centered - p.closed_form) / std::abs(p.closed_form);
    rep.points.push_back(p);
    if (!(p.rel_err <= tol))
      rep.violations.push_back("derivative mismatch at x = " + double_text(x) +
                               ": closed form " + double_text(p.closed_form) +
                               ", centered difference " +
                               double_text(p.centered));
  }

  rep.second_left =
      (tr_value(1.0) - 2 * tr_value(1.0 - h) + tr_value(1.0 - 2 * h)) / (h * h);
  rep.second_right =
      (tr_value(1.0 + 2 * h) - 2 * tr_value(1.0 + h) + tr_value(1.0)) / (h * h);
  // T''(x) = T'(x)(1 + sum of T'(x-i)); approaching 1 from below the sum is
  // empty, from above it picks up T'(0) = 1, so the limits are e and 2e.
  rep.second_left_expected = tr_derivative(1.0);
  rep.second_right_expected = tr_derivative(1.0) * (1.0 + tr_derivative(0.0));
  auto rel_check = [&](const std::string& what, double got, double want) {
    if (!(std::abs(got - want) / std::abs(want) <= rep.second_tol))
      rep.violations.push_back(what + " off: got " + double_text(got) +
                               ", want " + double_text(want));
  };
  rel_check("left second-difference limit", rep.second_left,
            rep.second_left_expected);
  rel_check("right second-difference limit", rep.second_right,
            rep.second_right_expected);
  rel_check("second-difference jump ratio",
            rep.second_right / rep.second_left, 2.0);
  return rep;
}

}  // namespace tower
