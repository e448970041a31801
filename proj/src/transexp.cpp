#include "tower/transexp.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <utility>

#include "tower/errors.hpp"

namespace tower {

namespace {

std::uint64_t sub_seed(std::uint64_t seed, const std::string& tag) {
  return seed ^ std::hash<std::string>{}(tag);
}

HahnRegionOrder positive_cone() {
  return HahnRegionOrder(std::nullopt,
                         hahn_zero(HahnRegionOrder::exponent_order()),
                         std::nullopt);
}

ChiStructure require_dense_rank(ChiStructure chi) {
  ExistsDecision d = exists_transexp(chi.delta());
  if (!d.yes)
    throw UnsupportedConstruction("no synthesis over this rank: " + d.reason);
  return chi;
}

std::string trimmed(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

}  // namespace

std::string to_string(PhiMode m) {
  switch (m) {
    case PhiMode::Generic:
      return "generic";
    case PhiMode::Growth:
      return "growth";
    case PhiMode::NoGrowth:
      return "nogrowth";
  }
  throw DomainError("unhandled synthesis mode");
}

PhiMode parse_phi_mode(const std::string& text) {
  if (text == "generic") return PhiMode::Generic;
  if (text == "growth") return PhiMode::Growth;
  if (text == "nogrowth") return PhiMode::NoGrowth;
  throw ParseError("unknown synthesis mode \"" + text + "\"", 0);
}

ExistsDecision exists_transexp(const OrderTypePtr& delta) {
  ExistsDecision d;
  if (!is_dense(delta)) {
    d.reason = "not dense";
    return d;
  }
  if (has_min(delta)) {
    d.reason = "has a least element";
    return d;
  }
  if (has_max(delta)) {
    d.reason = "has a greatest element";
    return d;
  }
  d.yes = true;
  return d;
}

AIndex make_aindex(HahnElement h) {
  if (hahn_compare(h, hahn_zero(h.delta)) <= 0)
    throw DomainError("an index element must be positive");
  return AIndex{std::move(h)};
}

bool pterm_equal(const PTerm& p, const PTerm& q) {
  return p.phi == q.phi && p.k == q.k && p.t == q.t &&
         hahn_compare(p.a, q.a) == 0;
}

std::string pterm_to_string(const PTerm& p) {
  return hahn_to_string(p.a) + ";" + int_to_string(p.k) + ";" +
         rat_to_string(p.t);
}

PhiMap::PhiMap(ChiStructure chi, PhiMode mode, std::uint64_t seed)
    : chi_(require_dense_rank(std::move(chi))),
      mode_(mode),
      seed_(seed),
      class_iso_(ReversedOrder<OrderTypeOrder>(OrderTypeOrder(chi_.delta())),
                 RationalOrder(), sub_seed(seed, "class-axis")),
      a_iso_(positive_cone(), RationalOrder(), sub_seed(seed, "a-axis")) {
  switch (mode_) {
    case PhiMode::Generic:
      free_iso_.emplace(RationalOrder(), RationalOrder(),
                        sub_seed(seed_, "phi-free"));
      break;
    case PhiMode::NoGrowth: {
      HahnElement h0 = unit_index();
      Rat x = a_iso_.apply(h0);
      Rat y = class_iso_.apply(chi_.class_of(hahn_neg(h0)));
      free_iso_.emplace(RationalOrder(), RationalOrder(),
                        sub_seed(seed_, "phi-pinned"),
                        std::vector<LineIso::Pair>{{x, y}});
      break;
    }
    case PhiMode::Growth:
      // Warm start so a fresh artifact already carries a usable chain.
      b_value(Int(2));
      b_value(Int(-2));
      break;
  }
}

std::string PhiMap::id() const {
  return to_string(mode_) + "#" + std::to_string(seed_) + "#" +
         tower::to_string(chi_.delta()) + "#" + std::to_string(chi_.seed());
}

HahnElement PhiMap::unit_index() {
  return hahn_unit(HahnRegionOrder::exponent_order(),
                   OrderElement::eta(Rat(0)));
}

ElemPtr PhiMap::index_class(const HahnElement& h) {
  if (hahn_compare(h, hahn_zero(h.delta)) <= 0)
    throw DomainError("an index element must be positive");
  return chi_.class_of(hahn_neg(h));
}

Rat PhiMap::index_position(const HahnElement& h) {
  if (hahn_compare(h, hahn_zero(h.delta)) <= 0)
    throw DomainError("an index element must be positive");
  return a_iso_.apply(h);
}

Rat PhiMap::class_position(const ElemPtr& label) {
  return class_iso_.apply(label);
}

ElemPtr PhiMap::class_at_position(const Rat& y) { return class_iso_.invert(y); }

Rat PhiMap::m_position(const HahnElement& h) {
  return class_position(index_class(h));
}

ElemPtr PhiMap::apply(const HahnElement& h) {
  return class_at_position(apply_position(h));
}

Rat PhiMap::apply_position(const HahnElement& h) {
  return coord_apply(index_position(h));
}

HahnElement PhiMap::invert_position(const Rat& y) {
  return a_iso_.invert(coord_invert(y));
}

HahnElement PhiMap::invert_class(const ElemPtr& label) {
  return invert_position(class_position(label));
}

HahnElement PhiMap::chain_index(const Int& k) {
  if (mode_ != PhiMode::Growth)
    throw DomainError("the pinned chain exists only in growth mode");
  return a_elem(k);
}

Rat PhiMap::chain_position(const Int& k) {
  if (mode_ != PhiMode::Growth)
    throw DomainError("the pinned chain exists only in growth mode");
  return b_value(k);
}

// Rung k is the anchor index of the class sitting at position k: its class
// position is k by construction, so the chain visits every class band and
// the mu sequence is strictly increasing and unbounded both ways. Using the
// A-axis enumeration here instead would descend the index cone so slowly
// that positions below the materialized chain become unreachable.
HahnElement PhiMap::a_elem(const Int& k) {
  auto it = a_elems_.find(k);
  if (it != a_elems_.end()) return it->second;
  ElemPtr label = class_iso_.invert(Rat(k));
  HahnElement a = hahn_unit(HahnRegionOrder::exponent_order(),
                            OrderElement::eta(chi_.anchor(label)));
  return a_elems_.emplace(k, std::move(a)).first->second;
}

Rat PhiMap::x_value(const Int& k) {
  auto it = x_.find(k);
  if (it != x_.end()) return it->second;
  Rat x = a_iso_.apply(a_elem(k));
  return x_.emplace(k, std::move(x)).first->second;
}

Rat PhiMap::mu(const Int& k) {
  auto it = mu_.find(k);
  if (it != mu_.end()) return it->second;
  Rat v = class_iso_.apply(chi_.class_of(hahn_neg(a_elem(k))));
  return mu_.emplace(k, std::move(v)).first->second;
}

// Chain positions. Upward each pin clears the class position of the index
// after next by a whole unit; downward the pin splits the gap between the
// previous class position and the pin above. Both keep the chain strictly
// increasing and strictly above the class positions between pins.
Rat PhiMap::b_value(const Int& k) {
  auto it = b_.find(k);
  if (it != b_.end()) return it->second;
  if (b_.empty()) b_.emplace(Int(0), Rat(mu(Int(1)) + 1));
  while (b_.rbegin()->first < k) {
    Int j = Int(b_.rbegin()->first + 1);
    Rat m = mu(Int(j + 1));
    Rat prev = b_.rbegin()->second;
    b_.emplace(j, Rat((prev > m ? prev : m) + 1));
  }
  while (k < b_.begin()->first) {
    Int j = Int(b_.begin()->first - 1);
    Rat below = mu(Int(j + 1));
    b_.emplace(j, rat_midpoint(below, b_.begin()->second));
  }
  return b_.at(k);
}

PhiMap::LineIso& PhiMap::slot(const Int& k) {
  auto it = slots_.find(k);
  if (it != slots_.end()) return it->second;
  Rat xlo = x_value(k);
  Rat xhi = x_value(Int(k + 1));
  Rat lo = b_value(k);
  Rat hi = b_value(Int(k + 1));
  if (!(xlo < xhi) || !(lo < hi))
    throw StructuralError("the pinned chain is not strictly increasing");
  std::vector<LineIso::Pair> pins{{xlo, lo}, {xhi, hi}};
  LineIso iso(RationalOrder(xlo, xhi), RationalOrder(lo, hi),
              sub_seed(seed_, "phi-slot#" + int_to_string(k)),
              std::move(pins));
  return slots_.emplace(k, std::move(iso)).first->second;
}

Rat PhiMap::coord_apply(const Rat& x) {
  if (mode_ != PhiMode::Growth) return free_iso_->apply(x);
  x_value(Int(0));
  // Rung positions run to -inf and +inf, one rung per step, so the walk
  // brackets any x in linear time.
  for (int guard = 0; x < x_.begin()->second; ++guard) {
    if (guard > 100000)
      throw StructuralError("the chain walk failed to bracket the position");
    x_value(Int(x_.begin()->first - 1));
  }
  for (int guard = 0; !(x < x_.rbegin()->second); ++guard) {
    if (guard > 100000)
      throw StructuralError("the chain walk failed to bracket the position");
    x_value(Int(x_.rbegin()->first + 1));
  }
  for (auto it = x_.rbegin(); it != x_.rend(); ++it) {
    if (it->second <= x) {
      if (it->second == x) return b_value(it->first);
      return slot(it->first).apply(x);
    }
  }
  throw StructuralError("the chain walk lost its bracket");
}

Rat PhiMap::coord_invert(const Rat& y) {
  if (mode_ != PhiMode::Growth) return free_iso_->invert(y);
  b_value(Int(0));
  for (int guard = 0; y < b_.begin()->second; ++guard) {
    if (guard > 100000)
      throw StructuralError("the chain walk failed to bracket the position");
    b_value(Int(b_.begin()->first - 1));
  }
  for (int guard = 0; !(y < b_.rbegin()->second); ++guard) {
    if (guard > 100000)
      throw StructuralError("the chain walk failed to bracket the position");
    b_value(Int(b_.rbegin()->first + 1));
  }
  for (auto it = b_.rbegin(); it != b_.rend(); ++it) {
    if (it->second <= y) {
      if (it->second == y) return x_value(it->first);
      return slot(it->first).invert(y);
    }
  }
  throw StructuralError("the chain walk lost its bracket");
}

nlohmann::json PhiMap::to_json() const {
  nlohmann::json j{{"mode", to_string(mode_)},
                   {"seed", seed_},
                   {"chi", chi_.to_json()},
                   {"class_iso", class_iso_.to_json()},
                   {"a_iso", a_iso_.to_json()}};
  if (mode_ == PhiMode::Growth) {
    nlohmann::json chain = nlohmann::json::array();
    for (const auto& [k, b] : b_)
      chain.push_back({int_to_string(k), rat_to_string(b)});
    j["b_table"] = std::move(chain);
    nlohmann::json slots = nlohmann::json::object();
    for (const auto& [k, iso] : slots_) slots[int_to_string(k)] = iso.to_json();
    j["slots"] = std::move(slots);
  } else {
    j["phi_iso"] = free_iso_->to_json();
  }
  return j;
}

PhiMap::PhiMap(LoadTag, const nlohmann::json& j)
    : chi_(require_dense_rank(ChiStructure::from_json(j.at("chi")))),
      mode_(parse_phi_mode(j.at("mode").get<std::string>())),
      seed_(j.at("seed").get<std::uint64_t>()),
      class_iso_(ClassIso::from_json(
          ReversedOrder<OrderTypeOrder>(OrderTypeOrder(chi_.delta())),
          RationalOrder(), j.at("class_iso"))),
      a_iso_(AIso::from_json(positive_cone(), RationalOrder(),
                             j.at("a_iso"))) {
  switch (mode_) {
    case PhiMode::Generic:
      free_iso_ = LineIso::from_json(RationalOrder(), RationalOrder(),
                                     j.at("phi_iso"));
      break;
    case PhiMode::NoGrowth: {
      // The pin is recomputed, not trusted: it must land on table hits of
      // the reloaded axes and match the leading saved pair.
      HahnElement h0 = unit_index();
      Rat x = a_iso_.apply(h0);
      Rat y = class_iso_.apply(chi_.class_of(hahn_neg(h0)));
      free_iso_ = LineIso::from_json(
          RationalOrder(), RationalOrder(), j.at("phi_iso"),
          std::vector<LineIso::Pair>{{std::move(x), std::move(y)}});
      break;
    }
    case PhiMode::Growth: {
      // The chain is recomputed from the reloaded axes (pure table hits)
      // and the saved table is an integrity check, not a data source.
      std::map<Int, Rat> saved;
      for (const auto& row : j.at("b_table"))
        saved.emplace(parse_integer(row.at(0).get<std::string>()),
                      parse_rational(row.at(1).get<std::string>()));
      if (saved.empty())
        throw StructuralError("saved chain is empty");
      b_value(saved.begin()->first);
      b_value(saved.rbegin()->first);
      if (b_.size() != saved.size())
        throw StructuralError("saved chain span disagrees with the axes");
      for (const auto& [k, b] : saved)
        if (b_value(k) != b)
          throw StructuralError("saved chain disagrees with the axes");
      std::vector<std::pair<Int, const nlohmann::json*>> keys;
      for (auto it = j.at("slots").begin(); it != j.at("slots").end(); ++it)
        keys.emplace_back(parse_integer(it.key()), &it.value());
      std::sort(keys.begin(), keys.end(),
                [](const auto& a, const auto& b) { return a.first < b.first; });
      for (const auto& [k, js] : keys) {
        Rat xlo = x_value(k);
        Rat xhi = x_value(Int(k + 1));
        Rat lo = b_value(k);
        Rat hi = b_value(Int(k + 1));
        std::vector<LineIso::Pair> pins{{xlo, lo}, {xhi, hi}};
        slots_.emplace(k,
                       LineIso::from_json(RationalOrder(xlo, xhi),
                                          RationalOrder(lo, hi), *js,
                                          std::move(pins)));
      }
      break;
    }
  }
}

PhiMap PhiMap::from_json(const nlohmann::json& j) {
  return PhiMap(LoadTag{}, j);
}

PhiMap build_phi(ChiStructure chi, PhiMode mode, std::uint64_t seed) {
  return PhiMap(std::move(chi), mode, seed);
}

PTerm tl_apply(PhiMap& phi, const AIndex& a, const Rat& b) {
  Int k = rat_floor(b);
  return PTerm{a.h, k, Rat(b - k), phi.id()};
}

PTerm pterm_exp(const PTerm& p) { return PTerm{p.a, Int(p.k + 1), p.t, p.phi}; }

PTerm pterm_log(const PTerm& p) { return PTerm{p.a, Int(p.k - 1), p.t, p.phi}; }

int pterm_compare(PhiMap& phi, const PTerm& p, const PTerm& q) {
  if (p.phi != phi.id() || q.phi != phi.id())
    throw DomainError("term was built under a different synthesis map");
  int c = hahn_compare(p.a, q.a);
  if (c != 0) return c;
  if (p.k != q.k) return p.k < q.k ? -1 : 1;
  if (p.t != q.t) return p.t < q.t ? -1 : 1;
  return 0;
}

PTerm parse_pterm(PhiMap& phi, const std::string& text) {
  std::size_t first = text.find(';');
  std::size_t second = first == std::string::npos ? std::string::npos
                                                  : text.find(';', first + 1);
  if (second == std::string::npos || text.find(';', second + 1) != std::string::npos)
    throw ParseError("a term literal has exactly three ;-separated fields",
                     first == std::string::npos ? text.size() : first);
  HahnElement a = parse_hahn(HahnRegionOrder::exponent_order(),
                             trimmed(text.substr(0, first)));
  if (hahn_compare(a, hahn_zero(a.delta)) <= 0)
    throw DomainError("an index element must be positive");
  Int k = parse_integer(trimmed(text.substr(first + 1, second - first - 1)),
                        first + 1);
  Rat t = parse_rational(trimmed(text.substr(second + 1)), second + 1);
  if (t < 0 || t >= 1) throw DomainError("a term offset must lie in [0, 1)");
  return PTerm{std::move(a), std::move(k), std::move(t), phi.id()};
}

ElemPtr delta_t(PhiMap& phi, const HahnElement& g) {
  if (hahn_compare(g, hahn_zero(g.delta)) >= 0)
    throw DomainError("the diagram maps need a negative element");
  return phi.apply(hahn_neg(g));
}

ElemPtr gamma_label(const ChiStructure& chi, const ElemPtr& label) {
  validate_element(chi.delta(), label);
  return label;
}

ElemPtr epsilon_t(PhiMap& phi, const Rat& q) {
  HahnElement unit = hahn_unit(HahnRegionOrder::exponent_order(),
                               OrderElement::eta(q));
  HahnElement hq = phi.chi().chi(hahn_neg(unit));
  return gamma_label(phi.chi(), delta_t(phi, hq));
}

ElemPtr xt_class(PhiMap& phi, const HahnElement& g) {
  if (hahn_compare(g, hahn_zero(g.delta)) >= 0)
    throw DomainError("the induced contraction needs a negative element");
  HahnElement h = phi.invert_class(phi.chi().class_of(g));
  return phi.chi().class_of(phi.chi().chi(hahn_neg(h)));
}

HahnElement sample_cone_element(std::mt19937_64& rng, bool negative) {
  const OrderTypePtr& ex = HahnRegionOrder::exponent_order();
  for (;;) {
    std::size_t n = 1 + rng() % 3;
    std::vector<std::pair<ElemPtr, Rat>> terms;
    for (std::size_t i = 0; i < n; ++i) {
      long den = 1 + static_cast<long>(rng() % 8);
      long num = static_cast<long>(rng() % 81) - 40;
      Rat q{Int(num), Int(den)};
      q.canonicalize();
      long cden = 1 + static_cast<long>(rng() % 6);
      long cnum = static_cast<long>(rng() % 21) - 10;
      if (cnum == 0) cnum = 1;
      Rat c{Int(cnum), Int(cden)};
      c.canonicalize();
      terms.emplace_back(OrderElement::eta(q), c);
    }
    HahnElement g = hahn_make(ex, std::move(terms));
    if (is_zero(g)) continue;
    bool neg = hahn_compare(g, hahn_zero(ex)) < 0;
    if (neg != negative) g = hahn_neg(g);
    return g;
  }
}

bool GrowthEncodingReport::passed() const {
  switch (mode) {
    case PhiMode::Growth:
      return non_strict == 0;
    case PhiMode::NoGrowth:
      return non_strict >= 1;
    case PhiMode::Generic:
      return true;
  }
  return false;
}

nlohmann::json GrowthEncodingReport::to_json() const {
  return nlohmann::json{{"mode", to_string(mode)},   {"samples", samples},
                        {"seed", seed},              {"strict", strict},
                        {"non_strict", non_strict},  {"witnesses", witnesses},
                        {"passed", passed()}};
}

GrowthEncodingReport check_growth_encoding(PhiMap& phi, std::size_t samples,
                                           std::uint64_t seed) {
  GrowthEncodingReport rep;
  rep.mode = phi.mode();
  rep.samples = samples;
  rep.seed = seed;
  std::mt19937_64 rng(seed);
  const OrderTypePtr& delta = phi.delta();
  std::vector<HahnElement> gs;
  gs.push_back(hahn_neg(PhiMap::unit_index()));
  while (gs.size() < samples) gs.push_back(sample_cone_element(rng, true));
  for (const HahnElement& g : gs) {
    ElemPtr cls = phi.chi().class_of(g);
    ElemPtr xt = xt_class(phi, g);
    if (compare_elements(delta, xt, cls) > 0) {
      ++rep.strict;
    } else {
      ++rep.non_strict;
      rep.witnesses.push_back("g=" + hahn_to_string(g) +
                              " class=" + element_to_string(delta, cls) +
                              " xt=" + element_to_string(delta, xt));
    }
  }
  return rep;
}

nlohmann::json SynthCheckReport::to_json() const {
  return nlohmann::json{{"mode", to_string(mode)},
                        {"samples", samples},
                        {"seed", seed},
                        {"checks", checks},
                        {"passed", passed()},
                        {"violations", violations}};
}

SynthCheckReport check_synthesis(PhiMap& phi, std::size_t samples,
                                 std::uint64_t seed) {
  SynthCheckReport rep;
  rep.mode = phi.mode();
  rep.samples = samples;
  rep.seed = seed;
  std::mt19937_64 rng(seed);
  const OrderTypePtr& delta = phi.delta();
  auto note = [&](const std::string& s) { rep.violations.push_back(s); };
  auto rnd_rat = [&](long lo, long hi, long dmax) {
    long den = 1 + static_cast<long>(rng() % dmax);
    long span = (hi - lo) * den + 1;
    long num = lo * den + static_cast<long>(rng() % span);
    Rat v{Int(num), Int(den)};
    v.canonicalize();
    return v;
  };

  // Round-trips, mode contract, order preservation.
  std::vector<HahnElement> hs;
  hs.push_back(PhiMap::unit_index());
  while (hs.size() < std::max<std::size_t>(samples, 2))
    hs.push_back(sample_cone_element(rng, false));
  std::vector<Rat> pos;
  pos.reserve(hs.size());
  for (const HahnElement& h : hs) {
    Rat y = phi.apply_position(h);
    ++rep.checks;
    if (phi.mode() == PhiMode::Growth && !(y > phi.m_position(h)))
      note("growth relation fails at h=" + hahn_to_string(h));
    ++rep.checks;
    if (hahn_compare(phi.invert_position(y), h) != 0)
      note("position round trip fails at h=" + hahn_to_string(h));
    ++rep.checks;
    if (!elements_equal(delta, phi.apply(h), phi.class_at_position(y)))
      note("label and position forms disagree at h=" + hahn_to_string(h));
    ++rep.checks;
    if (hahn_compare(phi.invert_class(phi.apply(h)), h) != 0)
      note("class round trip fails at h=" + hahn_to_string(h));
    pos.push_back(std::move(y));
  }
  if (phi.mode() == PhiMode::NoGrowth) {
    ++rep.checks;
    if (phi.apply_position(PhiMap::unit_index()) !=
        phi.m_position(PhiMap::unit_index()))
      note("the pinned index is not sent to its own class");
  }
  std::vector<std::size_t> ix(hs.size());
  std::iota(ix.begin(), ix.end(), 0);
  std::sort(ix.begin(), ix.end(), [&](std::size_t i, std::size_t j) {
    return hahn_compare(hs[i], hs[j]) < 0;
  });
  for (std::size_t i = 0; i + 1 < ix.size(); ++i) {
    if (hahn_compare(hs[ix[i]], hs[ix[i + 1]]) == 0) continue;
    ++rep.checks;
    if (!(pos[ix[i]] < pos[ix[i + 1]]))
      note("order preservation fails between h=" + hahn_to_string(hs[ix[i]]) +
           " and h=" + hahn_to_string(hs[ix[i + 1]]));
  }

  // Term order: antisymmetry, transitivity, exponential steps.
  auto rnd_term = [&]() {
    const HahnElement& a = hs[rng() % hs.size()];
    long k = static_cast<long>(rng() % 11) - 5;
    long den = 1 + static_cast<long>(rng() % 9);
    Rat t{Int(static_cast<long>(rng() % den)), Int(den)};
    t.canonicalize();
    return tl_apply(phi, AIndex{a}, Rat(Rat(k) + t));
  };
  for (std::size_t i = 0; i < samples; ++i) {
    PTerm p = rnd_term(), q = rnd_term(), r = rnd_term();
    ++rep.checks;
    if (pterm_compare(phi, p, q) != -pterm_compare(phi, q, p))
      note("term order is not antisymmetric at " + pterm_to_string(p) +
           " vs " + pterm_to_string(q));
    ++rep.checks;
    if (pterm_compare(phi, p, q) <= 0 && pterm_compare(phi, q, r) <= 0 &&
        pterm_compare(phi, p, r) > 0)
      note("term order is not transitive at " + pterm_to_string(p) + ", " +
           pterm_to_string(q) + ", " + pterm_to_string(r));
    ++rep.checks;
    if (pterm_compare(phi, p, q) !=
        pterm_compare(phi, pterm_exp(p), pterm_exp(q)))
      note("exponential step changes the order of " + pterm_to_string(p) +
           " vs " + pterm_to_string(q));
    ++rep.checks;
    if (!pterm_equal(pterm_log(pterm_exp(p)), p))
      note("log does not undo exp at " + pterm_to_string(p));
  }

  // tl_apply: the exponential recurrence and the pair order.
  for (std::size_t i = 0; i < samples; ++i) {
    const HahnElement& a = hs[rng() % hs.size()];
    const HahnElement& a2 = hs[rng() % hs.size()];
    Rat b = rnd_rat(-8, 8, 6);
    Rat b2 = rnd_rat(-8, 8, 6);
    PTerm p = tl_apply(phi, AIndex{a}, b);
    ++rep.checks;
    if (!pterm_equal(tl_apply(phi, AIndex{a}, Rat(b + 1)), pterm_exp(p)))
      note("shifting the finite part by 1 is not an exponential step at a=" +
           hahn_to_string(a) + " b=" + rat_to_string(b));
    int want = hahn_compare(a, a2);
    if (want == 0) want = b < b2 ? -1 : (b2 < b ? 1 : 0);
    ++rep.checks;
    if (pterm_compare(phi, p, tl_apply(phi, AIndex{a2}, b2)) != want)
      note("term order disagrees with the pair order at a=" +
           hahn_to_string(a) + " b=" + rat_to_string(b) + " vs a=" +
           hahn_to_string(a2) + " b=" + rat_to_string(b2));
  }

  // Diagram agreement.
  std::size_t diag = std::max<std::size_t>(samples / 4, 8);
  for (std::size_t i = 0; i < diag; ++i) {
    Rat q = rnd_rat(-10, 10, 6);
    HahnElement unit = hahn_unit(HahnRegionOrder::exponent_order(),
                                 OrderElement::eta(q));
    ElemPtr composed =
        gamma_label(phi.chi(), delta_t(phi, phi.chi().chi(hahn_neg(unit))));
    ++rep.checks;
    if (!elements_equal(delta, epsilon_t(phi, q), composed))
      note("diagram maps disagree at q=" + rat_to_string(q));
  }

  // delta_t strictly increasing, xt_class non-decreasing.
  std::vector<HahnElement> gs;
  gs.push_back(hahn_neg(PhiMap::unit_index()));
  std::size_t pairs = std::max<std::size_t>(samples / 4, 8);
  while (gs.size() < pairs) gs.push_back(sample_cone_element(rng, true));
  std::sort(gs.begin(), gs.end(), [](const HahnElement& x, const HahnElement& y) {
    return hahn_compare(x, y) < 0;
  });
  for (std::size_t i = 0; i + 1 < gs.size(); ++i) {
    if (hahn_compare(gs[i], gs[i + 1]) == 0) continue;
    ++rep.checks;
    if (compare_elements(delta, delta_t(phi, gs[i]), delta_t(phi, gs[i + 1])) >= 0)
      note("delta_t is not strictly increasing between g=" +
           hahn_to_string(gs[i]) + " and g=" + hahn_to_string(gs[i + 1]));
    ++rep.checks;
    if (compare_elements(delta, xt_class(phi, gs[i]),
                         xt_class(phi, gs[i + 1])) > 0)
      note("xt_class decreases between g=" + hahn_to_string(gs[i]) +
           " and g=" + hahn_to_string(gs[i + 1]));
  }
  if (phi.mode() == PhiMode::Growth) {
    for (const HahnElement& g : gs) {
      ++rep.checks;
      if (compare_elements(delta, xt_class(phi, g), phi.chi().class_of(g)) <= 0)
        note("induced contraction is not strictly above the class of g=" +
             hahn_to_string(g));
    }
  }
  return rep;
}

}  // namespace tower
