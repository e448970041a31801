// Acceptance driver: one line per criterion, exit 0 only when all pass.
// Tolerances are pinned in the code next to each check.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <iomanip>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "tower/cli.hpp"
#include "tower/contraction.hpp"
#include "tower/hahn.hpp"
#include "tower/levelindex.hpp"
#include "tower/orders.hpp"
#include "tower/ordertype.hpp"
#include "tower/rational.hpp"
#include "tower/transexp.hpp"

using namespace tower;

namespace {

const OrderTypePtr& E() { return HahnRegionOrder::exponent_order(); }

Rat rand_rat(std::mt19937_64& rng, long span, long dmax) {
  long den = 1 + static_cast<long>(rng() % dmax);
  long num = static_cast<long>(rng() % (2 * span * den + 1)) - span * den;
  Rat q{Int(num), Int(den)};
  q.canonicalize();
  return q;
}

HahnElement rand_elem(std::mt19937_64& rng) {
  std::vector<std::pair<ElemPtr, Rat>> terms;
  std::size_t n = rng() % 4;
  for (std::size_t i = 0; i < n; ++i) {
    terms.emplace_back(OrderElement::eta(rand_rat(rng, 40, 8)),
                       rand_rat(rng, 10, 6));
  }
  return hahn_make(E(), terms);
}

int sg(int c) { return (c > 0) - (c < 0); }

std::string secs_text(double s) {
  std::ostringstream o;
  o << std::fixed << std::setprecision(2) << s << "s";
  return o.str();
}

bool line(int k, const std::string& name, bool ok, const std::string& detail) {
  std::cout << "[" << k << "] " << name << ": " << (ok ? "pass" : "FAIL")
            << " (" << detail << ")\n";
  return ok;
}

bool criterion_axioms() {
  auto t0 = std::chrono::steady_clock::now();
  SuiteReport rep = check_axioms(1000, 0);
  double secs = std::chrono::duration<double>(
                    std::chrono::steady_clock::now() - t0)
                    .count();
  bool ok = rep.passed() && secs < 1.0;
  std::string detail = "1000 samples in [-50,50], exact, " + secs_text(secs) +
                       " < 1s";
  if (!rep.violations.empty()) detail += "; first: " + rep.violations.front();
  return line(1, "archimedean axiom suite", ok, detail);
}

bool criterion_growth() {
  auto t0 = std::chrono::steady_clock::now();
  SuiteReport rep = check_growth(5, 20, 0);
  double secs = std::chrono::duration<double>(
                    std::chrono::steady_clock::now() - t0)
                    .count();
  bool ok = rep.passed() && secs < 5.0;
  std::string detail =
      "T(a)>e^n(a) n<=5 step 1/4; T(n)>2^n n<=60; 2^(m-n)>=m+1 m<=200; " +
      secs_text(secs) + " < 5s";
  if (!rep.violations.empty()) detail += "; first: " + rep.violations.front();
  return line(2, "growth dominance", ok, detail);
}

bool criterion_derivative() {
  DerivativeReport rep = check_derivative();
  double spot = tr_derivative(1.5);
  bool ok = rep.passed();
  std::string why;
  if (!ok && !rep.violations.empty()) why = rep.violations.front();
  if (std::fabs(spot - 8.57385) > 1e-4) {
    ok = false;
    why = "T'(1.5) off the pinned value";
  }
  if (std::fabs(rep.second_left - 2.71828) > 1e-3 ||
      std::fabs(rep.second_right - 5.43656) > 1e-3 ||
      std::fabs(rep.second_right / rep.second_left - 2.0) > 1e-3) {
    ok = false;
    why = "one-sided second limits off";
  }
  std::string detail =
      "central diff h=1e-5 rel tol 1e-4 at {0.25,1.5,2.5}; T'(1.5) within "
      "1e-4 of 8.57385; one-sided limits within 1e-3 of {2.71828, 5.43656}, "
      "ratio 2 within 1e-3";
  if (!why.empty()) detail += "; first: " + why;
  return line(3, "derivative closed forms", ok, detail);
}

bool criterion_hahn_laws() {
  std::mt19937_64 rng(12);
  std::string why;
  for (int i = 0; i < 10000 && why.empty(); ++i) {
    HahnElement a = rand_elem(rng);
    HahnElement b = rand_elem(rng);
    HahnElement c = rand_elem(rng);
    if (hahn_compare(hahn_add(a, b), hahn_add(b, a)) != 0)
      why = "commutativity: a=" + hahn_to_string(a) + " b=" +
            hahn_to_string(b);
    else if (hahn_compare(hahn_add(hahn_add(a, b), c),
                          hahn_add(a, hahn_add(b, c))) != 0)
      why = "associativity: a=" + hahn_to_string(a) + " b=" +
            hahn_to_string(b) + " c=" + hahn_to_string(c);
    else if (hahn_compare(hahn_add(a, hahn_zero(E())), a) != 0)
      why = "identity: a=" + hahn_to_string(a);
    else if (!is_zero(hahn_add(a, hahn_neg(a))))
      why = "inverse: a=" + hahn_to_string(a);
    else if (hahn_compare(a, b) < 0 &&
             !(hahn_compare(hahn_add(a, c), hahn_add(b, c)) < 0))
      why = "translation order: a=" + hahn_to_string(a) + " b=" +
            hahn_to_string(b) + " c=" + hahn_to_string(c);
    else if (hahn_compare(a, b) < 0 &&
             !(hahn_compare(hahn_neg(b), hahn_neg(a)) < 0))
      why = "negation order: a=" + hahn_to_string(a) + " b=" +
            hahn_to_string(b);
    if (!why.empty()) break;
    HahnElement s = hahn_add(a, b);
    if (!is_zero(a) && !is_zero(b) && !is_zero(s)) {
      Rat qa = hahn_vg(a)->q;
      Rat qb = hahn_vg(b)->q;
      Rat qs = hahn_vg(s)->q;
      Rat lo = qa < qb ? qa : qb;
      if (qs < lo)
        why = "ultrametric: a=" + hahn_to_string(a) + " b=" +
              hahn_to_string(b);
      else if (qa != qb && qs != lo)
        why = "ultrametric equality: a=" + hahn_to_string(a) + " b=" +
              hahn_to_string(b);
    }
  }
  std::string detail = "10000 samples, exact group laws and vg ultrametric";
  if (!why.empty()) detail += "; first: " + why;
  return line(4, "value group laws", why.empty(), detail);
}

std::string check_one_rank(const std::string& expr, int idx) {
  OrderTypePtr delta = parse_order_type(expr);
  ChiStructure chi = build_chi(delta, 29 + idx);
  ContractionCheckReport rep = check_contraction(chi, 500, 101 + idx);
  if (!rep.passed()) return expr + ": " + rep.violations.front();

  // The two-successor gap between vg(g) and vg(chi(g)), with the step count
  // read off the block coordinate of vg(g).
  std::mt19937_64 rng(7000 + idx);
  for (int i = 0; i < 500; ++i) {
    HahnElement g = sample_cone_element(rng, true);
    HahnElement w = chi.chi(g);
    Rat qg = hahn_vg(g)->q;
    auto block = chi.eta_inverse(qg);
    Int k = rat_floor(block.second);
    Rat mid = chi.eta_value(block.first, Rat(Int(k + 1)));
    Rat nxt = chi.eta_value(block.first, Rat(Int(k + 2)));
    Rat qw = hahn_vg(w)->q;
    if (!(qg <= mid && mid < nxt && nxt <= qw))
      return expr + ": gap inequality at g=" + hahn_to_string(g);
  }

  // Shift climbs the anchored orbit by exactly two steps.
  ElemPtr d0 = enumerate_at(delta, Int(0));
  for (long k = -10; k <= 10; ++k) {
    if (chi.shift(chi.eta_value(d0, Rat(k))) !=
        chi.eta_value(d0, Rat(k + 2)))
      return expr + ": orbit shift at k=" + std::to_string(k);
  }

  if (expr == "3") {
    std::set<std::string> labels;
    for (long i = 0; i < 3; ++i) {
      ElemPtr d = enumerate_at(delta, Int(i));
      HahnElement probe =
          hahn_neg(hahn_unit(E(), OrderElement::eta(chi.anchor(d))));
      labels.insert(element_to_string(delta, chi.class_of(probe)));
    }
    std::mt19937_64 r2(31);
    for (int i = 0; i < 500; ++i)
      labels.insert(
          element_to_string(delta, chi.class_of(sample_cone_element(r2, true))));
    if (labels.size() != 3)
      return expr + ": saw " + std::to_string(labels.size()) + " classes";
  }
  return "";
}

bool criterion_contraction() {
  const char* ranks[] = {"1", "3", "zeta", "omega", "eta", "eta+1", "3*eta"};
  std::string why;
  int idx = 0;
  for (const char* ex : ranks) {
    why = check_one_rank(ex, idx++);
    if (!why.empty()) break;
  }
  std::string detail =
      "7 ranks, 500 samples each; gap inequality exact; orbit shift |k|<=10; "
      "rank 3 shows exactly 3 classes";
  if (!why.empty()) detail += "; first: " + why;
  return line(5, "contraction construction", why.empty(), detail);
}

bool criterion_existence() {
  struct Case {
    const char* expr;
    bool yes;
  };
  const Case cases[] = {{"eta", true},  {"3", false},     {"zeta", false},
                        {"omega", false}, {"eta+1", false}, {"eta + eta", true}};
  std::string why;
  for (const Case& c : cases) {
    ExistsDecision d = exists_transexp(parse_order_type(c.expr));
    if (d.yes != c.yes) {
      why = std::string(c.expr) + " answered " + (d.yes ? "yes" : "no");
      break;
    }
  }
  if (why.empty()) {
    std::ostringstream sink;
    const std::string chi_path = "acc_chi_fin3.json";
    const std::string phi_path = "acc_phi_fin3.json";
    std::remove(phi_path.c_str());
    int built = cli_run({"rank", "build", "--delta", "3", "--seed", "1",
                         "--out", chi_path},
                        sink, sink);
    int code = cli_run({"synth", "phi", "--chi", chi_path, "--mode", "growth",
                        "--out", phi_path},
                       sink, sink);
    if (built != 0 || code != 4)
      why = "non-dense synthesis exited " + std::to_string(code);
  }
  std::string detail =
      "eta yes; 3, zeta, omega, eta+1 no; eta+eta yes; non-dense synthesis "
      "exit code 4";
  if (!why.empty()) detail += "; first: " + why;
  return line(6, "existence decision", why.empty(), detail);
}

bool criterion_synthesis() {
  ChiStructure chi = build_chi(OrderType::eta(), 41);
  PhiMap phi = build_phi(chi, PhiMode::Growth, 43);
  std::string why;

  std::mt19937_64 rng(4400);
  for (int i = 0; i < 200 && why.empty(); ++i) {
    HahnElement h = sample_cone_element(rng, false);
    if (!(phi.apply_position(h) > phi.m_position(h)))
      why = "growth position at h=" + hahn_to_string(h);
  }
  for (int i = 0; i < 200 && why.empty(); ++i) {
    HahnElement g = sample_cone_element(rng, true);
    if (!(compare_elements(phi.delta(), xt_class(phi, g),
                           phi.chi().class_of(g)) > 0))
      why = "induced class not above g=" + hahn_to_string(g);
  }

  if (why.empty()) {
    PhiMap ng = build_phi(chi, PhiMode::NoGrowth, 47);
    HahnElement u = PhiMap::unit_index();
    if (!(ng.apply_position(u) == ng.m_position(u))) {
      why = "nogrowth pin not an equality";
    } else {
      GrowthEncodingReport enc = check_growth_encoding(ng, 60, 9);
      if (!enc.passed() || enc.non_strict < 1 || enc.witnesses.empty() ||
          enc.witnesses.front().find("g=-1@0") == std::string::npos)
        why = "nogrowth witness not reported";
    }
  }

  std::mt19937_64 trng(4500);
  for (int i = 0; i < 10000 && why.empty(); ++i) {
    AIndex a1 = make_aindex(sample_cone_element(trng, false));
    AIndex a2 = make_aindex(sample_cone_element(trng, false));
    PTerm p = tl_apply(phi, a1, rand_rat(trng, 50, 9));
    PTerm q = tl_apply(phi, a2, rand_rat(trng, 50, 9));
    int c1 = sg(pterm_compare(phi, p, q));
    int c2 = sg(pterm_compare(phi, q, p));
    if (c1 != -c2 || (c1 == 0) != pterm_equal(p, q) ||
        pterm_compare(phi, p, p) != 0)
      why = "term order on " + pterm_to_string(p) + " vs " +
            pterm_to_string(q);
  }
  for (int i = 0; i < 1000 && why.empty(); ++i) {
    AIndex a = make_aindex(sample_cone_element(trng, false));
    Rat b = rand_rat(trng, 50, 9);
    PTerm p = tl_apply(phi, a, b);
    if (!pterm_equal(pterm_exp(p), tl_apply(phi, a, Rat(b + 1))))
      why = "step recurrence at " + pterm_to_string(p);
  }
  for (int i = 0; i < 200 && why.empty(); ++i) {
    Rat q = rand_rat(trng, 20, 6);
    HahnElement unit = hahn_unit(E(), OrderElement::eta(q));
    ElemPtr direct = epsilon_t(phi, q);
    ElemPtr composed =
        gamma_label(phi.chi(), delta_t(phi, phi.chi().chi(hahn_neg(unit))));
    if (!elements_equal(phi.delta(), direct, composed))
      why = "diagram at q=" + rat_to_string(q);
  }

  std::string detail =
      "rank eta: growth strict on 200+200; nogrowth pin flagged by the "
      "encoding check; term order total on 10000 pairs; step recurrence "
      "exact on 1000; diagram agreement on 200";
  if (!why.empty()) detail += "; first: " + why;
  return line(7, "synthesis properties", why.empty(), detail);
}

bool criterion_dsl() {
  std::vector<std::vector<OrderTypePtr>> by_depth(4);
  for (long k = 1; k <= 3; ++k) by_depth[1].push_back(OrderType::fin(k));
  for (int d = 2; d <= 3; ++d) {
    for (int da = 1; da < d; ++da) {
      for (int db = 1; db < d; ++db) {
        if (da != d - 1 && db != d - 1) continue;
        for (const auto& a : by_depth[da]) {
          for (const auto& b : by_depth[db]) {
            by_depth[d].push_back(OrderType::sum(a, b));
            by_depth[d].push_back(OrderType::lex_prod(a, b));
          }
        }
      }
    }
  }

  std::size_t count = 0;
  std::string why;
  for (int d = 1; d <= 3 && why.empty(); ++d) {
    for (const auto& t : by_depth[d]) {
      ++count;
      long n = order_size(t)->get_si();
      std::vector<ElemPtr> elems;
      for (long i = 0; i < n; ++i) elems.push_back(enumerate_at(t, Int(i)));

      bool bd = true;
      for (long i = 0; i < n && bd; ++i) {
        for (long j = 0; j < n && bd; ++j) {
          if (compare_elements(t, elems[i], elems[j]) >= 0) continue;
          bool between = false;
          for (long m = 0; m < n && !between; ++m) {
            between = compare_elements(t, elems[i], elems[m]) < 0 &&
                      compare_elements(t, elems[m], elems[j]) < 0;
          }
          bd = between;
        }
      }
      bool bmin = false;
      for (long i = 0; i < n && !bmin; ++i) {
        bool leq = true;
        for (long j = 0; j < n && leq; ++j)
          leq = compare_elements(t, elems[i], elems[j]) <= 0;
        bmin = leq;
      }
      bool bmax = false;
      for (long i = 0; i < n && !bmax; ++i) {
        bool geq = true;
        for (long j = 0; j < n && geq; ++j)
          geq = compare_elements(t, elems[i], elems[j]) >= 0;
        bmax = geq;
      }

      if (is_dense(t) != bd || has_min(t) != bmin || has_max(t) != bmax) {
        why = to_string(t) + ": dense/min/max = " +
              std::to_string(is_dense(t)) + std::to_string(has_min(t)) +
              std::to_string(has_max(t)) + " vs brute " + std::to_string(bd) +
              std::to_string(bmin) + std::to_string(bmax);
        break;
      }
    }
  }
  std::string detail = std::to_string(count) +
                       " expressions of depth <= 3 over {1,2,3,+,*}, "
                       "exhaustive, exact";
  if (!why.empty()) detail += "; first: " + why;
  return line(8, "order DSL predicates", why.empty(), detail);
}

bool criterion_determinism() {
  std::string why;

  {
    ChiStructure chi = build_chi(parse_order_type("3*eta"), 17);
    auto run_log = [](ChiStructure& c) {
      std::vector<std::string> log;
      std::mt19937_64 rng(900);
      for (int i = 0; i < 30; ++i) {
        HahnElement g = sample_cone_element(rng, true);
        log.push_back(element_to_string(c.delta(), c.class_of(g)));
        log.push_back(hahn_to_string(c.chi(g)));
        log.push_back(rat_to_string(c.shift(hahn_vg(g)->q)));
      }
      return log;
    };
    auto log1 = run_log(chi);
    nlohmann::json j = chi.to_json();
    ChiStructure re = ChiStructure::from_json(j);
    auto log2 = run_log(re);
    if (log1 != log2) why = "chi query log diverged after reload";
    if (why.empty() && re.to_json() != j) why = "chi dump changed after replay";
  }

  for (PhiMode mode : {PhiMode::Generic, PhiMode::Growth, PhiMode::NoGrowth}) {
    if (!why.empty()) break;
    PhiMap phi = build_phi(build_chi(OrderType::eta(), 3), mode, 11);
    auto run_log = [](PhiMap& p) {
      std::vector<std::string> log;
      std::mt19937_64 rng(901);
      for (int i = 0; i < 20; ++i) {
        HahnElement h = sample_cone_element(rng, false);
        log.push_back(rat_to_string(p.apply_position(h)));
        log.push_back(element_to_string(p.delta(), p.apply(h)));
      }
      for (int i = 0; i < 10; ++i) {
        HahnElement g = sample_cone_element(rng, true);
        log.push_back(element_to_string(p.delta(), xt_class(p, g)));
      }
      for (int i = 0; i < 5; ++i) {
        AIndex a = make_aindex(sample_cone_element(rng, false));
        log.push_back(pterm_to_string(tl_apply(p, a, rand_rat(rng, 10, 5))));
      }
      return log;
    };
    auto log1 = run_log(phi);
    nlohmann::json j = phi.to_json();
    PhiMap re = PhiMap::from_json(j);
    auto log2 = run_log(re);
    if (log1 != log2)
      why = to_string(mode) + " query log diverged after reload";
    else if (re.to_json() != j)
      why = to_string(mode) + " dump changed after replay";
  }

  std::string detail =
      "chi and three phi artifacts rebuilt from JSON; query logs identical; "
      "dumps stable under replay";
  if (!why.empty()) detail += "; first: " + why;
  return line(9, "artifact determinism", why.empty(), detail);
}

}  // namespace

int main() {
  bool all = true;
  all &= criterion_axioms();
  all &= criterion_growth();
  all &= criterion_derivative();
  all &= criterion_hahn_laws();
  all &= criterion_contraction();
  all &= criterion_existence();
  all &= criterion_synthesis();
  all &= criterion_dsl();
  all &= criterion_determinism();
  std::cout << (all ? "all criteria pass" : "ACCEPTANCE FAILED") << "\n";
  return all ? 0 : 1;
}
