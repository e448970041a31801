#include "tower/contraction.hpp"

#include <random>

#include "tower/errors.hpp"

namespace tower {

namespace {

const OrderTypePtr& g_exponents() { return HahnRegionOrder::exponent_order(); }

HahnElement neg_unit_at(const Rat& q) {
  return hahn_neg(hahn_unit(g_exponents(), OrderElement::eta(q)));
}

Rat random_rat(std::mt19937_64& rng, long span, long dens) {
  long num = static_cast<long>(rng() % static_cast<unsigned long>(2 * span + 1)) - span;
  long den = static_cast<long>(rng() % static_cast<unsigned long>(dens)) + 1;
  Rat v(num, den);
  v.canonicalize();
  return v;
}

Rat random_nonzero(std::mt19937_64& rng, long span, long dens) {
  for (;;) {
    Rat v = random_rat(rng, span, dens);
    if (v != 0) return v;
  }
}

// Negative group element with one to three support points.
HahnElement random_negative(std::mt19937_64& rng) {
  std::size_t nterms = 1 + rng() % 3;
  std::vector<std::pair<ElemPtr, Rat>> terms;
  Rat q = random_rat(rng, 400, 24);
  Rat lead = random_nonzero(rng, 40, 12);
  if (lead > 0) lead = Rat(-lead);
  terms.emplace_back(OrderElement::eta(q), lead);
  for (std::size_t i = 1; i < nterms; ++i) {
    Rat inc = random_rat(rng, 20, 8);
    q = Rat(q + inc * inc + 1 + Rat(static_cast<long>(rng() % 7), 8));
    terms.emplace_back(OrderElement::eta(q), random_nonzero(rng, 40, 12));
  }
  return hahn_make(g_exponents(), std::move(terms));
}

}  // namespace

std::string to_string(EquivResult r) {
  switch (r) {
    case EquivResult::Equivalent:
      return "equivalent";
    case EquivResult::NotEquivalent:
      return "not-equivalent";
    case EquivResult::Unknown:
      return "unknown";
  }
  throw DomainError("unreachable equivalence result");
}

ChiStructure::ChiStructure(OrderTypePtr delta, std::uint64_t seed)
    : delta_(std::move(delta)),
      pair_type_(OrderType::lex_prod(delta_, OrderType::eta())),
      seed_(seed),
      eta_(OrderTypeOrder(pair_type_), RationalOrder(), seed) {}

Rat ChiStructure::eta_value(const ElemPtr& d, const Rat& t) {
  return eta_.apply(OrderElement::pair(d, OrderElement::eta(t)));
}

std::pair<ElemPtr, Rat> ChiStructure::eta_inverse(const Rat& q) {
  ElemPtr e = eta_.invert(q);
  return {e->a, e->b->q};
}

Rat ChiStructure::anchor(const ElemPtr& d) { return eta_value(d, Rat(0)); }

Rat ChiStructure::theta(const ElemPtr& d, const Rat& q) {
  auto [dq, t] = eta_inverse(q);
  if (!elements_equal(delta_, dq, d))
    throw DomainError("value lies outside the block of the given class");
  return eta_value(d, Rat(t + 1));
}

Rat ChiStructure::vg_rational(const HahnElement& g) const {
  return hahn_vg(g)->q;
}

ChiStructure::LambdaFrame ChiStructure::lambda_frame(const ElemPtr& d,
                                                     const Int& k) {
  Rat a = eta_value(d, Rat(k));
  Rat b = eta_value(d, Rat(Int(k + 1)));
  Rat ia = eta_value(d, Rat(Int(k + 2)));
  Rat ib = eta_value(d, Rat(Int(k + 3)));
  if (!(a < b && b <= ia && ia < ib))
    throw StructuralError("successor intervals came out of order");
  HahnElement plo = neg_unit_at(ia);
  HahnElement phi = neg_unit_at(ib);
  std::uint64_t ds =
      seed_ ^ std::hash<std::string>{}(element_to_string(delta_, d) + "#" +
                                       k.get_str());
  return LambdaFrame{RationalOrder(a, b),
                     HahnRegionOrder(std::nullopt, plo, phi),
                     {{a, plo}, {b, phi}},
                     ds};
}

ChiStructure::LambdaIso& ChiStructure::lambda_for(const ElemPtr& d,
                                                  const Int& k) {
  std::pair<std::string, Int> key{element_to_string(delta_, d), k};
  auto it = lambdas_.find(key);
  if (it != lambdas_.end()) return it->second;
  LambdaFrame f = lambda_frame(d, k);
  auto ins = lambdas_.emplace(
      std::move(key), pinned_interval_iso(f.pins, f.left, f.right, f.seed));
  return ins.first->second;
}

HahnElement ChiStructure::chi(const HahnElement& g) {
  if (hahn_compare(g, hahn_zero(g.delta)) >= 0)
    throw DomainError("contraction argument must be negative");
  Rat q = vg_rational(g);
  auto [d, t] = eta_inverse(q);
  Int k = rat_floor(t);
  return lambda_for(d, k).apply(q);
}

ElemPtr ChiStructure::class_of(const HahnElement& g) {
  if (hahn_compare(g, hahn_zero(g.delta)) >= 0)
    throw DomainError("class lookup needs a negative element");
  return eta_inverse(vg_rational(g)).first;
}

Rat ChiStructure::shift(const Rat& q) {
  return vg_rational(chi(neg_unit_at(q)));
}

HahnElement ChiStructure::preimage_point(const HahnElement& w) {
  if (hahn_compare(w, hahn_zero(w.delta)) >= 0)
    throw DomainError("preimage target must be negative");
  Rat qw = vg_rational(w);
  auto [d, tw] = eta_inverse(qw);
  Int kw = rat_floor(tw);
  HahnElement marker = neg_unit_at(eta_value(d, Rat(kw)));
  Int ksrc = hahn_compare(w, marker) < 0 ? Int(kw - 3) : Int(kw - 2);
  Rat qpre = lambda_for(d, ksrc).invert(w);
  return neg_unit_at(qpre);
}

nlohmann::json ChiStructure::to_json() const {
  nlohmann::json ls = nlohmann::json::array();
  for (const auto& [key, iso] : lambdas_)
    ls.push_back(nlohmann::json{{"class", key.first},
                               {"k", key.second.get_str()},
                               {"iso", iso.to_json()}});
  return nlohmann::json{{"delta", to_string(delta_)},
                        {"seed", seed_},
                        {"eta", eta_.to_json()},
                        {"lambdas", std::move(ls)}};
}

ChiStructure ChiStructure::from_json(const nlohmann::json& j) {
  OrderTypePtr delta = parse_order_type(j.at("delta").get<std::string>());
  ChiStructure c(delta, j.at("seed").get<std::uint64_t>());
  c.eta_ = EtaIso::from_json(OrderTypeOrder(c.pair_type_), RationalOrder(),
                             j.at("eta"));
  for (const auto& entry : j.at("lambdas")) {
    ElemPtr d = parse_element(delta, entry.at("class").get<std::string>());
    Int k(entry.at("k").get<std::string>());
    LambdaFrame f = c.lambda_frame(d, k);
    std::pair<std::string, Int> key{element_to_string(delta, d), k};
    c.lambdas_.emplace(key, LambdaIso::from_json(f.left, f.right,
                                                 entry.at("iso"), f.pins));
  }
  return c;
}

ChiStructure build_chi(OrderTypePtr delta, std::uint64_t seed) {
  return ChiStructure(std::move(delta), seed);
}

EquivResult equiv_budgeted(ChiStructure& chi, const HahnElement& g,
                           const HahnElement& h, unsigned budget) {
  if (budget == 0) throw DomainError("equivalence budget must be positive");
  HahnElement cg = g, ch = h;
  for (unsigned n = 1; n <= budget; ++n) {
    cg = chi.chi(cg);
    ch = chi.chi(ch);
    if (hahn_compare(g, ch) <= 0 && hahn_compare(h, cg) <= 0) {
      if (!elements_equal(chi.delta(), chi.class_of(g), chi.class_of(h)))
        throw StructuralError("iteration witness crosses distinct classes");
      return EquivResult::Equivalent;
    }
  }
  if (!elements_equal(chi.delta(), chi.class_of(g), chi.class_of(h)))
    return EquivResult::NotEquivalent;
  return EquivResult::Unknown;
}

ContractionCheckReport check_contraction(
    const std::function<HahnElement(const HahnElement&)>& map,
    std::size_t samples, std::uint64_t seed) {
  ContractionCheckReport r;
  r.samples = samples;
  r.seed = seed;
  std::mt19937_64 rng(seed);
  std::vector<HahnElement> xs, ws;
  xs.reserve(samples);
  ws.reserve(samples);
  for (std::size_t i = 0; i < samples; ++i) {
    HahnElement x = random_negative(rng);
    HahnElement w = map(x);
    if (hahn_compare(x, w) >= 0)
      r.violations.push_back("centripetality: map(" + hahn_to_string(x) +
                             ") = " + hahn_to_string(w) +
                             " does not exceed its argument");
    // Same valuation, different coefficient and tail: images must agree.
    Rat c2 = random_nonzero(rng, 40, 12);
    if (c2 > 0) c2 = Rat(-c2);
    Rat qx = hahn_vg(x)->q;
    std::vector<std::pair<ElemPtr, Rat>> terms{{OrderElement::eta(qx), c2}};
    if (rng() % 2) {
      Rat inc = random_rat(rng, 6, 3);
      terms.emplace_back(OrderElement::eta(Rat(qx + 1 + inc * inc)),
                         random_nonzero(rng, 40, 12));
    }
    HahnElement y = hahn_make(x.delta, std::move(terms));
    if (hahn_compare(map(y), w) != 0)
      r.violations.push_back("class constancy: " + hahn_to_string(x) + " and " +
                             hahn_to_string(y) +
                             " share a valuation but map apart");
    xs.push_back(std::move(x));
    ws.push_back(std::move(w));
  }
  for (std::size_t i = 0; i < xs.size(); ++i)
    for (std::size_t j = i + 1; j < xs.size(); ++j) {
      ++r.pairs_tested;
      int c = hahn_compare(xs[i], xs[j]);
      int cw = hahn_compare(ws[i], ws[j]);
      if ((c < 0 && cw > 0) || (c > 0 && cw < 0) || (c == 0 && cw != 0))
        r.violations.push_back("monotonicity: " + hahn_to_string(xs[i]) +
                               " vs " + hahn_to_string(xs[j]) +
                               " maps against the order");
    }
  return r;
}

ContractionCheckReport check_contraction(ChiStructure& chi,
                                         std::size_t samples,
                                         std::uint64_t seed) {
  ContractionCheckReport r = check_contraction(
      [&chi](const HahnElement& g) { return chi.chi(g); }, samples, seed);
  std::mt19937_64 rng(seed ^ 0xda942042e4dd58b5ull);
  for (std::size_t i = 0; i < samples; ++i) {
    HahnElement w = random_negative(rng);
    HahnElement g = chi.preimage_point(w);
    if (hahn_compare(chi.chi(g), w) != 0)
      r.violations.push_back("surjectivity: no witness recovered for " +
                             hahn_to_string(w));
  }
  return r;
}

}  // namespace tower
