#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "json.hpp"

#include "tower/errors.hpp"
#include "tower/rational.hpp"

namespace tower {

// Back-and-forth machinery between two countable dense linear orders without
// endpoints. Every extension is forced: the partner of a new element is the
// member of the opposite order with the smallest enumeration index inside the
// cut spanned by its realized neighbours. One rule, no randomness, so a table
// is a pure function of the handles and the query sequence and replays
// exactly from its serialized form.
//
// A handle is any order exposing Elem, cmp, contains, at, index_of,
// first_index_between, to_text, from_text. Pins are looked up by cmp only,
// so a pin may sit on the boundary of an open-interval handle.
//
// Mutation (apply, invert, step) is single-writer; a copied iso is a frozen
// snapshot and safe to read from other threads.
template <typename LO, typename RO>
class PartialIso {
 public:
  using LElem = typename LO::Elem;
  using RElem = typename RO::Elem;

  struct Pair {
    LElem left;
    RElem right;
  };

  PartialIso(LO left, RO right, std::uint64_t seed)
      : PartialIso(std::move(left), std::move(right), seed,
                   std::vector<Pair>{}) {}

  PartialIso(LO left, RO right, std::uint64_t seed, std::vector<Pair> pins)
      : left_(std::move(left)), right_(std::move(right)), seed_(seed) {
    spot_check_density();
    install_pins(std::move(pins));
  }

  const LO& left_order() const { return left_; }
  const RO& right_order() const { return right_; }
  std::uint64_t seed() const { return seed_; }
  std::uint64_t step_count() const { return steps_; }
  std::size_t size() const { return table_.size(); }

  // Realized pairs sorted by the left (equivalently right) order.
  std::vector<Pair> table() const {
    std::vector<Pair> out;
    out.reserve(table_.size());
    for (const Entry& e : table_) out.push_back({e.l, e.r});
    return out;
  }

  // Realized pairs in insertion order, pins first.
  std::vector<Pair> log() const {
    std::vector<const Entry*> by_stamp = stamp_order();
    std::vector<Pair> out;
    out.reserve(by_stamp.size());
    for (const Entry* e : by_stamp) out.push_back({e->l, e->r});
    return out;
  }

  // Table hits resolve before the containment check so that a pin on the
  // boundary of an open-interval handle stays reachable.
  RElem apply(const LElem& a) {
    if (auto hit = find_left(a)) return table_[*hit].r;
    if (!left_.contains(a)) throw DomainError("element outside the left order");
    return extend_from_left(a);
  }

  LElem invert(const RElem& b) {
    if (auto hit = find_right(b)) return table_[*hit].l;
    if (!right_.contains(b))
      throw DomainError("element outside the right order");
    return extend_from_right(b);
  }

  // One alternation step: odd steps match the earliest unmatched element of
  // the left enumeration, even steps of the right.
  void step() {
    ++steps_;
    if (steps_ % 2 == 1) {
      for (;;) {
        LElem a = left_.at(lcur_);
        if (!find_left(a)) {
          extend_from_left(a);
          break;
        }
        lcur_ += 1;
      }
    } else {
      for (;;) {
        RElem b = right_.at(rcur_);
        if (!find_right(b)) {
          extend_from_right(b);
          break;
        }
        rcur_ += 1;
      }
    }
  }

  nlohmann::json to_json() const {
    nlohmann::json pairs = nlohmann::json::array();
    for (const Entry* e : stamp_order())
      pairs.push_back({left_.to_text(e->l), right_.to_text(e->r)});
    return nlohmann::json{
        {"seed", seed_}, {"step_count", steps_}, {"pairs", std::move(pairs)}};
  }

  // Rebuilds from a saved table. Pins are not marked in the schema, so a
  // pinned iso must be reloaded with the same pins; they are matched against
  // the leading pairs. Every later pair must be the deterministic witness
  // extension of its prefix in one of the two query directions.
  static PartialIso from_json(LO left, RO right, const nlohmann::json& j,
                              std::vector<Pair> pins = {}) {
    const std::size_t npins = pins.size();
    PartialIso iso(std::move(left), std::move(right),
                   j.at("seed").get<std::uint64_t>(), std::move(pins));
    const nlohmann::json& pairs = j.at("pairs");
    if (pairs.size() < npins)
      throw StructuralError("saved table is missing pinned pairs");
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      // Pins may sit on handle boundaries where from_text would reject them,
      // so the pin prefix is compared through canonical text instead.
      if (i < npins) {
        const Entry& e = table_entry(iso, i);
        if (iso.left_.to_text(e.l) != pairs[i].at(0).get<std::string>() ||
            iso.right_.to_text(e.r) != pairs[i].at(1).get<std::string>())
          throw StructuralError("saved pins disagree with the supplied pins");
        continue;
      }
      LElem a = iso.left_.from_text(pairs[i].at(0).get<std::string>());
      RElem b = iso.right_.from_text(pairs[i].at(1).get<std::string>());
      iso.replay_pair(a, b);
    }
    iso.steps_ = j.at("step_count").get<std::uint64_t>();
    return iso;
  }

 private:
  struct Entry {
    LElem l;
    RElem r;
    std::uint64_t stamp;
  };

  static const Entry& table_entry(const PartialIso& iso, std::size_t stamp) {
    for (const Entry& e : iso.table_)
      if (e.stamp == stamp) return e;
    throw StructuralError("missing pinned table entry");
  }

  std::vector<const Entry*> stamp_order() const {
    std::vector<const Entry*> v;
    v.reserve(table_.size());
    for (const Entry& e : table_) v.push_back(&e);
    std::sort(v.begin(), v.end(), [](const Entry* x, const Entry* y) {
      return x->stamp < y->stamp;
    });
    return v;
  }

  std::size_t lower_bound_left(const LElem& a) const {
    std::size_t lo = 0, hi = table_.size();
    while (lo < hi) {
      std::size_t mid = (lo + hi) / 2;
      if (left_.cmp(table_[mid].l, a) < 0)
        lo = mid + 1;
      else
        hi = mid;
    }
    return lo;
  }

  std::size_t lower_bound_right(const RElem& b) const {
    std::size_t lo = 0, hi = table_.size();
    while (lo < hi) {
      std::size_t mid = (lo + hi) / 2;
      if (right_.cmp(table_[mid].r, b) < 0)
        lo = mid + 1;
      else
        hi = mid;
    }
    return lo;
  }

  std::optional<std::size_t> find_left(const LElem& a) const {
    std::size_t pos = lower_bound_left(a);
    if (pos < table_.size() && left_.cmp(table_[pos].l, a) == 0) return pos;
    return std::nullopt;
  }

  std::optional<std::size_t> find_right(const RElem& b) const {
    std::size_t pos = lower_bound_right(b);
    if (pos < table_.size() && right_.cmp(table_[pos].r, b) == 0) return pos;
    return std::nullopt;
  }

  RElem extend_from_left(const LElem& a) {
    std::size_t pos = lower_bound_left(a);
    std::optional<RElem> rp, rs;
    if (pos > 0) rp = table_[pos - 1].r;
    if (pos < table_.size()) rs = table_[pos].r;
    auto idx = right_.first_index_between(rp, rs);
    if (!idx)
      throw StructuralError("cut between realized partners is empty on the right");
    RElem b = right_.at(*idx);
    insert_checked(pos, Entry{a, b, next_stamp_++});
    return b;
  }

  LElem extend_from_right(const RElem& b) {
    std::size_t pos = lower_bound_right(b);
    std::optional<LElem> lp, ls;
    if (pos > 0) lp = table_[pos - 1].l;
    if (pos < table_.size()) ls = table_[pos].l;
    auto idx = left_.first_index_between(lp, ls);
    if (!idx)
      throw StructuralError("cut between realized partners is empty on the left");
    LElem a = left_.at(*idx);
    insert_checked(pos, Entry{a, b, next_stamp_++});
    return a;
  }

  void insert_checked(std::size_t pos, Entry e) {
    if (pos > 0 && (left_.cmp(table_[pos - 1].l, e.l) >= 0 ||
                    right_.cmp(table_[pos - 1].r, e.r) >= 0))
      throw StructuralError("extension violates order preservation");
    if (pos < table_.size() && (left_.cmp(e.l, table_[pos].l) >= 0 ||
                                right_.cmp(e.r, table_[pos].r) >= 0))
      throw StructuralError("extension violates order preservation");
    table_.insert(table_.begin() + static_cast<std::ptrdiff_t>(pos),
                  std::move(e));
    for (std::size_t i = 0; i + 1 < table_.size(); ++i)
      if (left_.cmp(table_[i].l, table_[i + 1].l) >= 0 ||
          right_.cmp(table_[i].r, table_[i + 1].r) >= 0)
        throw StructuralError("realized table lost order preservation");
  }

  void replay_pair(const LElem& a, const RElem& b) {
    if (find_left(a) || find_right(b))
      throw StructuralError("replayed pair duplicates a realized element");
    std::size_t pos = lower_bound_left(a);
    std::optional<RElem> rp, rs;
    if (pos > 0) rp = table_[pos - 1].r;
    if (pos < table_.size()) rs = table_[pos].r;
    if (auto idx = right_.first_index_between(rp, rs))
      if (right_.cmp(right_.at(*idx), b) == 0) {
        insert_checked(pos, Entry{a, b, next_stamp_++});
        return;
      }
    std::size_t rpos = lower_bound_right(b);
    std::optional<LElem> lp, ls;
    if (rpos > 0) lp = table_[rpos - 1].l;
    if (rpos < table_.size()) ls = table_[rpos].l;
    if (auto idx = left_.first_index_between(lp, ls))
      if (left_.cmp(left_.at(*idx), a) == 0) {
        insert_checked(pos, Entry{a, b, next_stamp_++});
        return;
      }
    throw StructuralError(
        "replayed pair is not the deterministic extension in either direction");
  }

  // Bounded sampler: hunts for adjacent pairs and endpoints among a few
  // enumerated elements. Density of a black-box handle is caller-asserted;
  // this only catches gross mistakes like handing over a finite order.
  void spot_check_density() const {
    auto probe = [&](const auto& ord, const char* side) {
      using E = typename std::decay_t<decltype(ord)>::Elem;
      std::vector<E> xs;
      try {
        xs.push_back(ord.at(Int(0)));
        std::mt19937_64 rng(seed_ ^ 0x9e3779b97f4a7c15ull);
        for (int t = 0; t < 5; ++t)
          xs.push_back(ord.at(Int(static_cast<unsigned long>(rng() % 64))));
      } catch (const DomainError&) {
        throw StructuralError(std::string(side) +
                              " handle enumeration ends; the order is finite");
      }
      for (const E& x : xs) {
        if (!ord.first_index_between(std::nullopt, std::optional<E>(x)))
          throw StructuralError(std::string(side) +
                                " handle has a least element");
        if (!ord.first_index_between(std::optional<E>(x), std::nullopt))
          throw StructuralError(std::string(side) +
                                " handle has a greatest element");
      }
      for (const E& x : xs)
        for (const E& y : xs)
          if (ord.cmp(x, y) < 0 &&
              !ord.first_index_between(std::optional<E>(x), std::optional<E>(y)))
            throw StructuralError(std::string(side) +
                                  " handle has adjacent elements; not dense");
    };
    probe(left_, "left");
    probe(right_, "right");
  }

  void install_pins(std::vector<Pair> pins) {
    for (std::size_t i = 0; i + 1 < pins.size(); ++i)
      if (left_.cmp(pins[i].left, pins[i + 1].left) >= 0 ||
          right_.cmp(pins[i].right, pins[i + 1].right) >= 0)
        throw StructuralError("pins are not strictly increasing");
    for (Pair& p : pins)
      table_.push_back(
          Entry{std::move(p.left), std::move(p.right), next_stamp_++});
    if (table_.empty()) return;
    // A gap that is empty on one side but not the other can never be filled
    // order-preservingly; catch that now rather than on first query.
    auto gap_state = [&](const auto& ord, const auto& lo, const auto& hi) {
      return ord.first_index_between(lo, hi).has_value();
    };
    using LOpt = std::optional<LElem>;
    using ROpt = std::optional<RElem>;
    for (std::size_t i = 0; i + 1 <= table_.size(); ++i) {
      LOpt llo = i == 0 ? LOpt{} : LOpt{table_[i - 1].l};
      ROpt rlo = i == 0 ? ROpt{} : ROpt{table_[i - 1].r};
      LOpt lhi = i == table_.size() ? LOpt{} : LOpt{table_[i].l};
      ROpt rhi = i == table_.size() ? ROpt{} : ROpt{table_[i].r};
      if (gap_state(left_, llo, lhi) != gap_state(right_, rlo, rhi))
        throw StructuralError("pin gap is empty on exactly one side");
    }
    LOpt llast{table_.back().l};
    ROpt rlast{table_.back().r};
    if (gap_state(left_, llast, LOpt{}) != gap_state(right_, rlast, ROpt{}))
      throw StructuralError("pin gap is empty on exactly one side");
  }

  LO left_;
  RO right_;
  std::uint64_t seed_ = 0;
  std::uint64_t steps_ = 0;
  std::uint64_t next_stamp_ = 0;
  Int lcur_{0};
  Int rcur_{0};
  std::vector<Entry> table_;
};

template <typename LO, typename RO>
typename RO::Elem iso_apply(PartialIso<LO, RO>& iso,
                            const typename LO::Elem& a) {
  return iso.apply(a);
}

template <typename LO, typename RO>
typename LO::Elem iso_invert(PartialIso<LO, RO>& iso,
                             const typename RO::Elem& b) {
  return iso.invert(b);
}

template <typename LO, typename RO>
PartialIso<LO, RO> pinned_interval_iso(
    std::vector<typename PartialIso<LO, RO>::Pair> pins, LO left, RO right,
    std::uint64_t seed = 0) {
  return PartialIso<LO, RO>(std::move(left), std::move(right), seed,
                            std::move(pins));
}

}  // namespace tower
