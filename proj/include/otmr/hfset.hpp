#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "otmr/ordinal.hpp"

namespace otmr {

// A hereditarily finite set, or a von Neumann ordinal >= w (so that codes of
// w-like objects can be exercised). Values are hash-consed: equal sets share
// one node, so equality is pointer equality and copies are free.
//
// The canonical total order puts hereditarily finite sets first, ordered by
// rank, then size, then lexicographically by their sorted elements;
// infinite ordinals follow in ordinal order.
class HFSet {
 public:
  HFSet();  // the empty set

  static HFSet empty() { return HFSet(); }
  static HFSet make(std::vector<HFSet> elems);
  // Von Neumann ordinal: hereditarily finite for finite a.
  static HFSet ordinal(const Ordinal& a);
  // `{}`, `{{},{{}}}`, `#3`, `#w`; whitespace is ignored.
  static HFSet parse(std::string_view text);

  bool is_empty() const;
  bool is_infinite() const;
  // Sorted elements; raises not-decidable for infinite ordinals.
  const std::vector<HFSet>& elements() const;
  size_t size() const;
  uint32_t rank() const;  // finite rank; meaningless for infinite ordinals
  bool contains(const HFSet& x) const;
  bool subset_of(const HFSet& y) const;
  // The ordinal this set is, if it is a von Neumann ordinal.
  std::optional<Ordinal> as_ordinal() const;

  HFSet with(const HFSet& x) const;  // this ∪ {x}
  HFSet union_of() const;            // ⋃ this
  std::string to_string() const;
  size_t hash() const;
  uint64_t id() const;  // stable only within one process

  friend bool operator==(const HFSet& a, const HFSet& b) { return a.n_ == b.n_; }
  friend std::strong_ordering operator<=>(const HFSet& a, const HFSet& b);

  struct Node;

 private:
  explicit HFSet(const Node* n) : n_(n) {}
  const Node* n_;
};

HFSet kpair(const HFSet& a, const HFSet& b);  // {{a},{a,b}}
std::optional<std::pair<HFSet, HFSet>> as_kpair(const HFSet& p);
// The function {<j, x_j> | j < n} with Kuratowski pairs.
HFSet make_seq(const std::vector<HFSet>& xs);
// Recognizes a function whose domain is a finite ordinal.
std::optional<std::vector<HFSet>> as_seq(const HFSet& f);

std::vector<HFSet> transitive_closure(const HFSet& x);  // tc({x}) in canonical order
// V_n (the sets of rank < n) in canonical order; n <= 5.
const std::vector<HFSet>& cumulative_level(unsigned n);

}  // namespace otmr

template <>
struct std::hash<otmr::HFSet> {
  size_t operator()(const otmr::HFSet& s) const { return s.hash(); }
};
