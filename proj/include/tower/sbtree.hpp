#pragma once

#include <optional>

#include "tower/rational.hpp"

namespace tower {

// Enumeration backbone for the rational line and its intervals.
//
// Two classic binary trees over the rationals are used:
//
//  * the Calkin-Wilf tree (node a/b has children a/(a+b) and (a+b)/b) gives
//    the canonical enumeration of the positive rationals: node numbers are
//    breadth-first, node n has children 2n and 2n+1, so the n-th positive
//    rational is read off the binary digits of n;
//
//  * the Stern-Brocot tree (mediant subdivision) carries the same values
//    level by level but is a binary *search* tree, which makes "the
//    simplest rational inside an interval" a short directed walk.
//
// Both trees place a value at the same depth, and a nonempty open interval
// contains exactly one value of minimal depth (any two nodes at one depth
// have an ancestor strictly between them). So the least Calkin-Wilf index
// inside an interval is found by a Stern-Brocot walk followed by an index
// computation, never by scanning the enumeration.
//
// All walks jump over runs of equal direction with one division per run, so
// costs are linear in the continued-fraction length of the values involved.

// Calkin-Wilf node number (1-based breadth-first) of a positive rational.
Int cw_number(const Rat& v);

// Value at Calkin-Wilf node n >= 1.
Rat cw_value(const Int& n);

// Canonical enumeration of the whole rational line:
//   0, 1, -1, 1/2, -1/2, 2, -2, 1/3, -1/3, 3/2, ...
// i.e. zero first, then the Calkin-Wilf sequence interleaved with its
// negation.
Rat eta_at(const Int& i);
Int eta_index(const Rat& v);

// Least index of the canonical line enumeration whose value lies strictly
// between lo and hi (either bound may be absent). None when the open
// interval is empty, which for the full line only happens when lo >= hi.
std::optional<Int> eta_first_between(const std::optional<Rat>& lo,
                                     const std::optional<Rat>& hi);

// The (0,1) face of the Stern-Brocot tree (root 1/2), used to enumerate
// bounded rational intervals through an order-preserving rational transport.
// Indices are 0-based.
Rat unit_at(const Int& i);
Int unit_index(const Rat& v);
std::optional<Int> unit_first_between(const std::optional<Rat>& lo,
                                      const std::optional<Rat>& hi);

// Simplest (minimal Stern-Brocot depth) positive rational strictly inside
// (lo, hi); bounds optional, intersected with (0, inf). None if empty.
std::optional<Rat> sb_simplest_positive_between(const std::optional<Rat>& lo,
                                                const std::optional<Rat>& hi);

}  // namespace tower
