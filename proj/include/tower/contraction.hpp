#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "tower/dlo.hpp"
#include "tower/hahn.hpp"
#include "tower/orders.hpp"
#include "tower/ordertype.hpp"
#include "tower/rational.hpp"

namespace tower {

enum class EquivResult { Equivalent, NotEquivalent, Unknown };

std::string to_string(EquivResult r);

// Outcome of sampling a contraction candidate: every violation carries the
// offending inputs so a failure is reproducible from the seed alone.
struct ContractionCheckReport {
  std::size_t samples = 0;
  std::size_t pairs_tested = 0;
  std::uint64_t seed = 0;
  std::vector<std::string> violations;
  bool passed() const { return violations.empty(); }
};

// Centripetal contraction on the negative cone of the rational-exponent Hahn
// group, built so that the quotient by equivalence is order-isomorphic to a
// prescribed order type.
//
// The group positions are carved into blocks through an order isomorphism
// eta between delta x QQ (lexicographic, major first) and QQ; each block
// carries the successor conjugated from the minor coordinate. chi sends an
// element with valuation q two successor intervals deeper inside its block,
// through a lazily materialized interval isomorphism whose endpoints are
// pinned at the indicator images.
//
// Queries grow memo tables: single-writer. A copy is a frozen snapshot and
// safe for concurrent reads.
class ChiStructure {
 public:
  using EtaIso = PartialIso<OrderTypeOrder, RationalOrder>;
  using LambdaIso = PartialIso<RationalOrder, HahnRegionOrder>;

  ChiStructure(OrderTypePtr delta, std::uint64_t seed);

  const OrderTypePtr& delta() const { return delta_; }
  const OrderTypePtr& pair_type() const { return pair_type_; }
  std::uint64_t seed() const { return seed_; }

  // eta(d, t) and its inverse, in block coordinates.
  Rat eta_value(const ElemPtr& d, const Rat& t);
  std::pair<ElemPtr, Rat> eta_inverse(const Rat& q);

  // c_d = eta(d, 0).
  Rat anchor(const ElemPtr& d);

  // Conjugated successor on the block of d. q must lie in that block.
  Rat theta(const ElemPtr& d, const Rat& q);

  // The contraction itself. g must be negative.
  HahnElement chi(const HahnElement& g);

  // Major coordinate of the block holding vg(g). g must be negative.
  ElemPtr class_of(const HahnElement& g);

  // Induced map on valuations: shift(q) = vg(chi(-1@q)).
  Rat shift(const Rat& q);

  // Preimage witness: a negative element g with chi(g) = w.
  HahnElement preimage_point(const HahnElement& w);

  nlohmann::json to_json() const;
  static ChiStructure from_json(const nlohmann::json& j);

 private:
  // Everything needed to build or reload one interval iso: handles, endpoint
  // pins and the derived seed. Recomputed, not stored, so reloads agree.
  struct LambdaFrame {
    RationalOrder left;
    HahnRegionOrder right;
    std::vector<LambdaIso::Pair> pins;
    std::uint64_t seed;
  };

  LambdaFrame lambda_frame(const ElemPtr& d, const Int& k);
  LambdaIso& lambda_for(const ElemPtr& d, const Int& k);
  Rat vg_rational(const HahnElement& g) const;

  OrderTypePtr delta_;
  OrderTypePtr pair_type_;
  std::uint64_t seed_;
  EtaIso eta_;
  std::map<std::pair<std::string, Int>, LambdaIso> lambdas_;
};

ChiStructure build_chi(OrderTypePtr delta, std::uint64_t seed);

// Iterates chi on both sides hunting for the two-sided domination witness;
// falls back to the exact class comparison for a negative answer. Unknown
// only when the budget runs out inside a shared class.
EquivResult equiv_budgeted(ChiStructure& chi, const HahnElement& g,
                           const HahnElement& h, unsigned budget = 64);

// Samples a candidate contraction for monotonicity, constancy on archimedean
// classes and centripetality. The ChiStructure overload also probes
// surjectivity by inverting random targets through the interval tables.
ContractionCheckReport check_contraction(
    const std::function<HahnElement(const HahnElement&)>& map,
    std::size_t samples, std::uint64_t seed);
ContractionCheckReport check_contraction(ChiStructure& chi,
                                         std::size_t samples,
                                         std::uint64_t seed);

}  // namespace tower
