#include <random>
#include <vector>

#include "doctest.h"
#include "tower/transexp.hpp"

using namespace tower;

TEST_CASE("exists_transexp: dense without endpoints, with named reasons") {
  CHECK(exists_transexp(parse_order_type("eta")).yes);
  CHECK(exists_transexp(parse_order_type("eta+eta")).yes);
  CHECK(exists_transexp(parse_order_type("eta*eta")).yes);

  ExistsDecision three = exists_transexp(parse_order_type("3"));
  CHECK(!three.yes);
  CHECK(three.reason == "not dense");
  CHECK(!exists_transexp(parse_order_type("zeta")).yes);
  CHECK(!exists_transexp(parse_order_type("omega")).yes);
  CHECK(exists_transexp(parse_order_type("eta+1")).reason ==
        "has a greatest element");
  CHECK(exists_transexp(parse_order_type("1+eta")).reason ==
        "has a least element");
}

TEST_CASE("positive cone handle: deterministic enumeration of a dense order") {
  HahnRegionOrder cone(std::nullopt,
                       hahn_zero(HahnRegionOrder::exponent_order()),
                       std::nullopt);
  HahnElement zero = hahn_zero(HahnRegionOrder::exponent_order());
  for (int i = 0; i < 20; ++i) {
    HahnElement g = cone.at(Int(i));
    CHECK(cone.contains(g));
    CHECK(cone.index_of(g) == Int(i));
    CHECK(hahn_compare(g, zero) > 0);
  }
  // no least element: the cut below the first enumerated element is inhabited
  CHECK(cone.first_index_between(std::nullopt,
                                 std::optional<HahnElement>(cone.at(Int(0))))
            .has_value());
  CHECK(cone.first_index_between(std::optional<HahnElement>(cone.at(Int(0))),
                                 std::nullopt)
            .has_value());
}

TEST_CASE("build_phi refuses a rank that is not dense without endpoints") {
  CHECK_THROWS_AS(build_phi(build_chi(parse_order_type("3"), 1),
                            PhiMode::Growth, 7),
                  UnsupportedConstruction);
  CHECK_THROWS_AS(build_phi(build_chi(parse_order_type("eta+1"), 1),
                            PhiMode::Generic, 7),
                  UnsupportedConstruction);
}

TEST_CASE("growth mode: pinned chain and the growth relation everywhere") {
  PhiMap phi = build_phi(build_chi(parse_order_type("eta"), 3),
                         PhiMode::Growth, 11);
  for (long k = -3; k <= 3; ++k) {
    Rat bk = phi.chain_position(Int(k));
    CHECK(bk < phi.chain_position(Int(k + 1)));
    // the pin is the image of the chain index
    CHECK(phi.apply_position(phi.chain_index(Int(k))) == bk);
    // each pin clears the class position of the next chain index
    CHECK(bk > phi.m_position(phi.chain_index(Int(k + 1))));
    CHECK(bk > phi.m_position(phi.chain_index(Int(k))));
  }

  std::mt19937_64 rng(77);
  for (int i = 0; i < 100; ++i) {
    HahnElement h = sample_cone_element(rng, false);
    Rat y = phi.apply_position(h);
    CHECK(y > phi.m_position(h));
    CHECK(hahn_compare(phi.invert_position(y), h) == 0);
  }
}

TEST_CASE("growth mode: the induced class contraction moves strictly up") {
  PhiMap phi = build_phi(build_chi(parse_order_type("eta"), 3),
                         PhiMode::Growth, 11);
  const OrderTypePtr& delta = phi.delta();
  std::mt19937_64 rng(31);
  std::vector<HahnElement> gs;
  gs.push_back(hahn_neg(PhiMap::unit_index()));
  while (gs.size() < 100) gs.push_back(sample_cone_element(rng, true));
  std::sort(gs.begin(), gs.end(),
            [](const HahnElement& a, const HahnElement& b) {
              return hahn_compare(a, b) < 0;
            });
  ElemPtr prev;
  for (const HahnElement& g : gs) {
    ElemPtr xt = xt_class(phi, g);
    CHECK(compare_elements(delta, xt, phi.chi().class_of(g)) > 0);
    if (prev) CHECK(compare_elements(delta, prev, xt) <= 0);
    prev = xt;
  }

  GrowthEncodingReport rep = check_growth_encoding(phi, 200, 5);
  CHECK(rep.passed());
  CHECK(rep.strict == 200);
  CHECK(rep.non_strict == 0);
}

TEST_CASE("nogrowth mode: the unit index is pinned to its own class") {
  PhiMap phi = build_phi(build_chi(parse_order_type("eta"), 3),
                         PhiMode::NoGrowth, 5);
  HahnElement h0 = PhiMap::unit_index();
  CHECK(phi.apply_position(h0) == phi.m_position(h0));
  CHECK(elements_equal(phi.delta(), phi.apply(h0), phi.index_class(h0)));

  // the encoding check reports the violation with the canonical probe
  GrowthEncodingReport rep = check_growth_encoding(phi, 60, 9);
  CHECK(rep.passed());
  CHECK(rep.non_strict >= 1);
  REQUIRE(!rep.witnesses.empty());
  CHECK(rep.witnesses[0].find("g=-1@0") != std::string::npos);

  CHECK_THROWS_AS(phi.chain_position(Int(0)), DomainError);
}

TEST_CASE("terms: tl_apply splits the finite part, steps move k alone") {
  PhiMap phi = build_phi(build_chi(parse_order_type("eta"), 3),
                         PhiMode::Growth, 11);
  AIndex a = make_aindex(PhiMap::unit_index());

  PTerm p = tl_apply(phi, a, Rat(7, 2));
  CHECK(p.k == 3);
  CHECK(p.t == Rat(1, 2));
  PTerm base = tl_apply(phi, a, Rat(0));
  CHECK(base.k == 0);
  CHECK(base.t == 0);
  PTerm neg = tl_apply(phi, a, Rat(-3, 2));
  CHECK(neg.k == -2);
  CHECK(neg.t == Rat(1, 2));

  CHECK(pterm_equal(pterm_exp(p), tl_apply(phi, a, Rat(9, 2))));
  CHECK(pterm_equal(pterm_log(pterm_exp(neg)), neg));

  // lexicographic: k before t, index before k
  CHECK(pterm_compare(phi, tl_apply(phi, a, Rat(11, 4)),
                      tl_apply(phi, a, Rat(3))) < 0);
  CHECK(pterm_compare(phi, tl_apply(phi, a, Rat(9, 4)),
                      tl_apply(phi, a, Rat(11, 4))) < 0);
  HahnElement bigger = hahn_unit(HahnRegionOrder::exponent_order(),
                                 OrderElement::eta(Rat(-1)));
  REQUIRE(hahn_compare(PhiMap::unit_index(), bigger) < 0);
  CHECK(pterm_compare(phi, tl_apply(phi, a, Rat(9)),
                      tl_apply(phi, make_aindex(bigger), Rat(-9))) < 0);
  CHECK(pterm_compare(phi, p, tl_apply(phi, a, Rat(7, 2))) == 0);

  // terms do not cross between maps
  PhiMap other = build_phi(build_chi(parse_order_type("eta"), 3),
                           PhiMode::Growth, 12);
  PTerm foreign = tl_apply(other, a, Rat(1, 2));
  CHECK_THROWS_AS(pterm_compare(phi, p, foreign), DomainError);

  CHECK_THROWS_AS(make_aindex(hahn_zero(HahnRegionOrder::exponent_order())),
                  DomainError);
}

TEST_CASE("term literals parse and print") {
  PhiMap phi = build_phi(build_chi(parse_order_type("eta"), 3),
                         PhiMode::Growth, 11);
  PTerm p = tl_apply(phi, make_aindex(PhiMap::unit_index()), Rat(7, 2));
  CHECK(pterm_to_string(p) == "1@0;3;1/2");
  CHECK(pterm_equal(parse_pterm(phi, pterm_to_string(p)), p));
  PTerm q = parse_pterm(phi, " 2@1/2 + -1@3 ; -2 ; 0 ");
  CHECK(q.k == -2);
  CHECK(q.t == 0);
  CHECK(pterm_equal(parse_pterm(phi, pterm_to_string(q)), q));

  CHECK_THROWS_AS(parse_pterm(phi, "1@0;2;1"), DomainError);      // offset
  CHECK_THROWS_AS(parse_pterm(phi, "-1@0;2;0"), DomainError);     // sign
  CHECK_THROWS_AS(parse_pterm(phi, "1@0;2"), ParseError);         // fields
  CHECK_THROWS_AS(parse_pterm(phi, "1@0;2;0;0"), ParseError);
}

TEST_CASE("diagram maps: unwinding, strict monotonicity, two-way agreement") {
  PhiMap phi = build_phi(build_chi(parse_order_type("eta"), 3),
                         PhiMode::Growth, 11);
  const OrderTypePtr& delta = phi.delta();

  HahnElement h = hahn_unit(HahnRegionOrder::exponent_order(),
                            OrderElement::eta(Rat(1, 2)), Rat(3));
  CHECK(elements_equal(delta, delta_t(phi, hahn_neg(h)), phi.apply(h)));
  CHECK_THROWS_AS(delta_t(phi, h), DomainError);

  std::mt19937_64 rng(19);
  std::vector<HahnElement> gs;
  while (gs.size() < 40) gs.push_back(sample_cone_element(rng, true));
  std::sort(gs.begin(), gs.end(),
            [](const HahnElement& a, const HahnElement& b) {
              return hahn_compare(a, b) < 0;
            });
  for (std::size_t i = 0; i + 1 < gs.size(); ++i) {
    if (hahn_compare(gs[i], gs[i + 1]) == 0) continue;
    CHECK(compare_elements(delta, delta_t(phi, gs[i]),
                           delta_t(phi, gs[i + 1])) < 0);
  }

  for (int i = 0; i < 30; ++i) {
    long den = 1 + static_cast<long>(rng() % 6);
    long num = static_cast<long>(rng() % (20 * den + 1)) - 10 * den;
    Rat q{Int(num), Int(den)};
    q.canonicalize();
    HahnElement unit = hahn_unit(HahnRegionOrder::exponent_order(),
                                 OrderElement::eta(q));
    ElemPtr direct = epsilon_t(phi, q);
    ElemPtr composed =
        gamma_label(phi.chi(), delta_t(phi, phi.chi().chi(hahn_neg(unit))));
    CHECK(elements_equal(delta, direct, composed));
  }

  ElemPtr label = OrderElement::eta(Rat(2, 3));
  CHECK(elements_equal(delta, gamma_label(phi.chi(), label), label));
  CHECK_THROWS_AS(gamma_label(phi.chi(), OrderElement::fin(Int(0))),
                  DomainError);
}

TEST_CASE("synthesis suite passes in every mode") {
  ChiStructure chi = build_chi(parse_order_type("eta"), 3);
  for (PhiMode mode : {PhiMode::Generic, PhiMode::Growth, PhiMode::NoGrowth}) {
    PhiMap phi = build_phi(chi, mode, 21);
    SynthCheckReport rep = check_synthesis(phi, 40, 13);
    INFO(to_string(mode));
    for (const std::string& v : rep.violations) { INFO(v); }
    CHECK(rep.passed());
    CHECK(rep.checks > 200);
  }
}

TEST_CASE("json: reload answers the recorded queries identically") {
  PhiMap phi = build_phi(build_chi(parse_order_type("eta"), 3),
                         PhiMode::Growth, 11);
  const OrderTypePtr& delta = phi.delta();
  std::mt19937_64 rng(101);
  std::vector<std::pair<HahnElement, Rat>> poslog;
  for (int i = 0; i < 12; ++i) {
    HahnElement h = sample_cone_element(rng, false);
    poslog.emplace_back(h, phi.apply_position(h));
  }
  std::vector<std::pair<HahnElement, std::string>> xtlog;
  for (int i = 0; i < 8; ++i) {
    HahnElement g = sample_cone_element(rng, true);
    xtlog.emplace_back(g, element_to_string(delta, xt_class(phi, g)));
  }

  nlohmann::json snap = phi.to_json();
  PhiMap re = PhiMap::from_json(snap);
  CHECK(re.to_json() == snap);
  for (const auto& [h, y] : poslog) CHECK(re.apply_position(h) == y);
  for (const auto& [g, label] : xtlog)
    CHECK(element_to_string(delta, xt_class(re, g)) == label);
  // replays were table hits, so the reloaded state is unchanged
  CHECK(re.to_json() == snap);

  PhiMap pinned = build_phi(build_chi(parse_order_type("eta"), 3),
                            PhiMode::NoGrowth, 5);
  Rat y0 = pinned.apply_position(PhiMap::unit_index());
  nlohmann::json psnap = pinned.to_json();
  PhiMap pre = PhiMap::from_json(psnap);
  CHECK(pre.apply_position(PhiMap::unit_index()) == y0);
  CHECK(pre.to_json() == psnap);

  // a tampered pin is rejected on reload
  nlohmann::json bad = psnap;
  bad["phi_iso"]["pairs"][0][1] = "999";
  CHECK_THROWS_AS(PhiMap::from_json(bad), StructuralError);
}
