#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "json.hpp"

#include "tower/contraction.hpp"

namespace tower {

enum class PhiMode { Generic, Growth, NoGrowth };

std::string to_string(PhiMode m);
PhiMode parse_phi_mode(const std::string& text);

// Synthesis is possible exactly over a dense rank without endpoints.
// reason names the first failing predicate, empty on yes.
struct ExistsDecision {
  bool yes = false;
  std::string reason;
};
ExistsDecision exists_transexp(const OrderTypePtr& delta);

// Positive element of the rational-exponent group, indexing one synthesized
// value. Index order is the group order on the positive cone; the class
// associated with an index h is class_of(chi, -h), the block of its
// valuation.
struct AIndex {
  HahnElement h;
};
AIndex make_aindex(HahnElement h);

// k exponential steps from offset t inside the abstract fundamental segment
// of index a. Segment maps are never evaluated, only their monotonicity and
// endpoints matter, so the offset is stored untouched. Terms order
// lexicographically in (index, k, offset) and compare only under the map
// they were built with.
struct PTerm {
  HahnElement a;
  Int k;
  Rat t;            // in [0, 1)
  std::string phi;  // fingerprint of the owning map
};

bool pterm_equal(const PTerm& p, const PTerm& q);

// Literal form "<hahn>;<k>;<t>".
std::string pterm_to_string(const PTerm& p);

// Order bijection from the positive cone onto the contraction classes,
// realized through two rational coordinate axes: a seeded iso from the cone
// to QQ, and a seeded iso from the class labels, taken in reversed label
// order, to QQ. Reversing the label axis makes the transported class
// position of an index grow with the index (larger positive elements have
// smaller valuations, hence smaller labels), so every growth comparison is
// a plain rational comparison of positions.
//
// Modes differ in how the position map QQ -> QQ is built:
//   generic    free back-and-forth, no guarantee either way;
//   growth     a pinned chain with one rung per integer class position k:
//              the rung index is the anchor index of the class at k, so its
//              own class position is exactly k, and the zig-zag (max(.)+1
//              upward, midpoint downward) places the pin above the class
//              position of the next rung; gaps are filled by pinned
//              interval isos. This forces apply_position > m_position
//              everywhere, pins and gaps alike, and keeps both walk
//              directions linear in the distance walked;
//   nogrowth   the unit index is pinned to its own class position, so the
//              growth inequality fails there by construction.
//
// Queries extend memo tables, single-writer. A copy is a frozen snapshot
// and safe for concurrent reads.
class PhiMap {
 public:
  using ClassIso = PartialIso<ReversedOrder<OrderTypeOrder>, RationalOrder>;
  using AIso = PartialIso<HahnRegionOrder, RationalOrder>;
  using LineIso = PartialIso<RationalOrder, RationalOrder>;

  // Throws UnsupportedConstruction unless the rank is dense without
  // endpoints.
  PhiMap(ChiStructure chi, PhiMode mode, std::uint64_t seed);

  PhiMode mode() const { return mode_; }
  std::uint64_t seed() const { return seed_; }
  ChiStructure& chi() { return chi_; }
  const OrderTypePtr& delta() const { return chi_.delta(); }

  // Distinguishes maps so terms cannot cross between them.
  std::string id() const;

  // The canonical unit index 1@0, the nogrowth pin.
  static HahnElement unit_index();

  // Class of an index: class_of(chi, -h). h must be positive.
  ElemPtr index_class(const HahnElement& h);

  // Coordinates. index_position is strictly increasing in h;
  // class_position is strictly decreasing in the label order.
  Rat index_position(const HahnElement& h);
  Rat class_position(const ElemPtr& label);
  ElemPtr class_at_position(const Rat& y);
  Rat m_position(const HahnElement& h);

  // The bijection itself, in label and position form, with inverses.
  ElemPtr apply(const HahnElement& h);
  Rat apply_position(const HahnElement& h);
  HahnElement invert_position(const Rat& y);
  HahnElement invert_class(const ElemPtr& label);

  // Growth-mode pinned chain: the k-th chain index and its pinned class
  // position. DomainError outside growth mode.
  HahnElement chain_index(const Int& k);
  Rat chain_position(const Int& k);

  nlohmann::json to_json() const;
  static PhiMap from_json(const nlohmann::json& j);

 private:
  struct LoadTag {};
  PhiMap(LoadTag, const nlohmann::json& j);

  Rat coord_apply(const Rat& x);
  Rat coord_invert(const Rat& y);
  HahnElement a_elem(const Int& k);
  Rat x_value(const Int& k);
  Rat mu(const Int& k);
  Rat b_value(const Int& k);
  LineIso& slot(const Int& k);

  ChiStructure chi_;
  PhiMode mode_;
  std::uint64_t seed_;
  ClassIso class_iso_;
  AIso a_iso_;
  std::optional<LineIso> free_iso_;    // generic and nogrowth
  std::map<Int, Rat> b_;               // growth: pinned chain positions
  std::map<Int, HahnElement> a_elems_; // growth: rung anchor indices
  std::map<Int, Rat> x_;               // growth: index position of a_elem(k)
  std::map<Int, Rat> mu_;              // growth: class position of a_elem(k)
  std::map<Int, LineIso> slots_;       // growth: gap fillers
};

PhiMap build_phi(ChiStructure chi, PhiMode mode, std::uint64_t seed);

// The only constructor of terms from an index and a finite part; the
// exponential steps move k alone.
PTerm tl_apply(PhiMap& phi, const AIndex& a, const Rat& b);
PTerm pterm_exp(const PTerm& p);
PTerm pterm_log(const PTerm& p);

// Three-way term order. Throws DomainError when either term was built under
// a different map. The map is an order bijection, so the class positions of
// two indices order exactly as the indices themselves.
int pterm_compare(PhiMap& phi, const PTerm& p, const PTerm& q);
PTerm parse_pterm(PhiMap& phi, const std::string& text);

// Class-level diagram maps. delta_t(g) = phi(-g) for negative g; gamma is
// the label identity between contraction classes and shift classes;
// epsilon_t chains them through the group-exponential surrogate
// q -> chi(-1@q).
ElemPtr delta_t(PhiMap& phi, const HahnElement& g);
ElemPtr gamma_label(const ChiStructure& chi, const ElemPtr& label);
ElemPtr epsilon_t(PhiMap& phi, const Rat& q);

// Class of chi(-h') where h' is the index phi sends to the class of g.
// Growth mode puts this strictly above the class of g; at the nogrowth pin
// the two coincide.
ElemPtr xt_class(PhiMap& phi, const HahnElement& g);

// Random finite-support element of the requested sign over the shared
// exponent line, desk-scale terms, for the property suites.
HahnElement sample_cone_element(std::mt19937_64& rng, bool negative);

struct GrowthEncodingReport {
  PhiMode mode = PhiMode::Generic;
  std::size_t samples = 0;
  std::uint64_t seed = 0;
  std::size_t strict = 0;
  std::size_t non_strict = 0;
  std::vector<std::string> witnesses;  // samples where strictness fails
  bool passed() const;
  nlohmann::json to_json() const;
};

// Compares xt_class(g) with class_of(g) on the canonical probe -1@0 and on
// random negative samples. growth passes when every comparison is strict;
// nogrowth passes when a non-strict witness is found; generic always passes
// and the report is informative.
GrowthEncodingReport check_growth_encoding(PhiMap& phi, std::size_t samples,
                                           std::uint64_t seed);

struct SynthCheckReport {
  PhiMode mode = PhiMode::Generic;
  std::size_t samples = 0;
  std::uint64_t seed = 0;
  std::size_t checks = 0;
  std::vector<std::string> violations;
  bool passed() const { return violations.empty(); }
  nlohmann::json to_json() const;
};

// Property suite over one map: phi round-trips and preserves order, the
// growth or pin contract of the mode holds, term order is total and moves
// with exponential steps, tl_apply respects the pair order and commutes
// with pterm_exp, the diagram maps agree, delta_t is strictly increasing
// and xt_class is non-decreasing.
SynthCheckReport check_synthesis(PhiMap& phi, std::size_t samples,
                                 std::uint64_t seed);

}  // namespace tower
