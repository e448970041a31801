#pragma once

#include <mpfr.h>

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

#include "tower/errors.hpp"
#include "tower/rational.hpp"

namespace tower {

enum class LiCmp { LT, EQ, GT, Unknown };

std::string to_string(LiCmp c);

// RAII wrapper for one mpfr value. Copies preserve the bit pattern exactly
// (the target is reallocated at the source precision before assignment).
class Real {
 public:
  explicit Real(mpfr_prec_t prec = 64) {
    mpfr_init2(v_, prec);
    mpfr_set_zero(v_, 1);
  }
  Real(const Real& o) {
    mpfr_init2(v_, mpfr_get_prec(o.v_));
    mpfr_set(v_, o.v_, MPFR_RNDN);
  }
  Real(Real&& o) noexcept {
    mpfr_init2(v_, mpfr_get_prec(o.v_));
    mpfr_swap(v_, o.v_);
  }
  Real& operator=(const Real& o) {
    if (this != &o) {
      mpfr_set_prec(v_, mpfr_get_prec(o.v_));
      mpfr_set(v_, o.v_, MPFR_RNDN);
    }
    return *this;
  }
  Real& operator=(Real&& o) noexcept {
    mpfr_swap(v_, o.v_);
    return *this;
  }
  ~Real() { mpfr_clear(v_); }

  mpfr_ptr get() { return v_; }
  mpfr_srcptr get() const { return v_; }

 private:
  mpfr_t v_;
};

// A positive real stored in tower form exp^level(index) with index in [0,1),
// or the reciprocal of such a value when the flag is set. Comparison is
// lexicographic in (level, index), so iterated exponentials compare without
// ever being evaluated.
//
// The index keeps an outward-rounded enclosure [lo, hi] at the working
// precision, plus the exact rational when one is known. Normal forms:
//   non-reciprocal, level >= 1   : value >= 1
//   reciprocal, level >= 1       : value in (0,1); never the reciprocal of 1
//   level 0                      : only the zero value, accepted by li_exp
//                                  and nothing else
class LevelIndex {
 public:
  LevelIndex();  // the zero value

  bool reciprocal() const { return reciprocal_; }
  const Int& level() const { return level_; }
  bool index_exact() const { return exact_; }
  const Rat& index_rational() const;  // DomainError when the index is inexact
  double index_approx() const;        // midpoint of the enclosure
  double index_width() const;         // hi - lo
  mpfr_srcptr enclosure_lo() const { return lo_.get(); }
  mpfr_srcptr enclosure_hi() const { return hi_.get(); }
  int digits() const { return digits_; }

  bool is_zero() const { return level_ == 0; }
  bool is_one() const {
    return !reciprocal_ && level_ == 1 && exact_ && exact_r_ == 0;
  }

  // "E^m(r)" or "1/E^m(r)"; inexact indexes print as "~<decimal>".
  std::string to_text() const;

  // {reciprocal, level, index: "p/q" | decimal, err, digits}. err is an
  // upper bound on the enclosure width, "0" exactly when the index is exact.
  nlohmann::json to_json() const;
  static LevelIndex from_json(const nlohmann::json& j);

 private:
  bool reciprocal_ = false;
  Int level_ = 0;
  bool exact_ = true;
  Rat exact_r_ = 0;
  int digits_ = 30;
  Real lo_, hi_;  // enclosure of the index, maintained through every op

  void set_exact_index(const Rat& r);

  friend LevelIndex li_from_rational(const Rat& q, int digits);
  friend LevelIndex li_exp(const LevelIndex& x);
  friend LevelIndex li_log(const LevelIndex& x);
  friend LevelIndex li_mul(const LevelIndex& x, const LevelIndex& y);
  friend LiCmp li_compare(const LevelIndex& x, const LevelIndex& y);
  friend LevelIndex tr_eval(const Rat& x, int digits);
  friend bool li_identical(const LevelIndex& a, const LevelIndex& b);
};

// Normalizes a rational into tower form by iterated logarithms. Values in
// (0,1) become reciprocals of their inverse. Negative input is a domain
// error; sign lives outside this type.
LevelIndex li_from_rational(const Rat& q, int digits = 30);

// exp raises the level by one. Exact on zero and on non-reciprocal values;
// reciprocal arguments force a tower evaluation of the operand, which throws
// PrecisionError once the tower leaves the representable exponent range.
LevelIndex li_exp(const LevelIndex& x);

// Inverse of li_exp. Requires value >= 1 (a log below zero has no tower
// form). Exact level decrement for level >= 2; level 1 renormalizes the
// index as a value of its own.
LevelIndex li_log(const LevelIndex& x);

// exp(log x + log y). Exact whenever both logs are rational (level 1 with
// exact index); otherwise evaluated through enclosures. Multiplying a value
// by its exact reciprocal gives exactly 1.
LevelIndex li_mul(const LevelIndex& x, const LevelIndex& y);

// Unknown only when the levels agree and the index enclosures overlap
// without both being the same exact point. Raising the working precision of
// the operands can turn Unknown into a decision but never flips one.
LiCmp li_compare(const LevelIndex& x, const LevelIndex& y);

// The archimedean transexponential in closed form: x >= 0 maps to
// (level floor(x)+1, index x-floor(x)) with an exact rational index;
// negative x gives the reciprocal of the value at -x.
LevelIndex tr_eval(const Rat& x, int digits = 30);

// Superlogarithm, the inverse of tr_eval: (level-1) + index, negated for
// reciprocals. Exact exactly when the index is.
struct SlogValue {
  bool exact = false;
  Rat value;           // set when exact
  double approx = 0.0; // always set
  std::string to_text() const;
};
SlogValue slog(const LevelIndex& x);

// Representation equality: same flag, level, exactness and index bits.
bool li_identical(const LevelIndex& a, const LevelIndex& b);

// Numeric tower and its closed-form first derivative in double precision,
// for the derivative suite. The derivative product form needs x >= 0.
double tr_value(double x);
double tr_derivative(double x);

struct SuiteReport {
  std::string suite;
  std::size_t checks = 0;
  std::uint64_t seed = 0;
  std::vector<std::string> violations;
  bool passed() const { return violations.empty(); }
  nlohmann::json to_json() const;
};

// Representation-level identities of the transexponential: agreement with
// exp on [0,1], exact level shift under exp, exact reciprocal symmetry,
// strict monotonicity, and the iterated shift T(x+m) = e^m(T(x)) for
// m in [-3,3] wherever both sides stay nonnegative.
SuiteReport check_axioms(std::size_t samples = 1000, std::uint64_t seed = 0);

// Growth comparisons, all through li_compare: T(a) > e^n(a) on the grid
// a in [(n+1)^2, (n+1)^2 + window] step 1/4 for n <= n_max; T(n) > 2^n for
// n <= 60; the exact integer bound 2^(m-n) >= m+1 for n <= 10 and
// (n+1)^2 <= m <= 200; seeded spot checks of e(a) > a^n for a >= n^2.
SuiteReport check_growth(int n_max = 5, int window = 20,
                         std::uint64_t seed = 0);

struct DerivativePoint {
  double x = 0;
  double closed_form = 0;
  double centered = 0;  // central difference at step h
  double rel_err = 0;
};

struct DerivativeReport {
  double h = 1e-5;
  double tol = 1e-4;
  std::vector<DerivativePoint> points;
  // One-sided second-difference limits at 1 and their closed forms. The
  // jump (right = twice left) is what blocks a second continuous derivative.
  double second_left = 0;
  double second_right = 0;
  double second_left_expected = 0;
  double second_right_expected = 0;
  double second_tol = 1e-3;
  std::vector<std::string> violations;
  bool passed() const { return violations.empty(); }
  nlohmann::json to_json() const;
};

// Central finite differences of the numeric tower against the closed-form
// derivative at the given points, then the one-sided second-difference
// limits at 1 against their closed forms and the ratio 2 between them.
DerivativeReport check_derivative(
    const std::vector<double>& points = {0.25, 1.5, 2.5}, double h = 1e-5,
    double tol = 1e-4);

}  // namespace tower
