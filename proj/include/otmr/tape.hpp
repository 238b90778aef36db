#pragma once

#include <functional>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "otmr/ordinal.hpp"

namespace otmr {

// Position `start + k` holds pattern[k % pattern.size()] for every finite k,
// so the block covers [start, start.limit_part() + w).
struct TapeBlock {
  Ordinal start;
  std::string pattern;
  Ordinal end() const;
  friend bool operator==(const TapeBlock&, const TapeBlock&) = default;
};

// A binary sequence of ordinal length with finitely many isolated ones and
// finitely many w-periodic blocks.
//
// Invariants (kept by normalize()): isolated ones lie outside every block and
// below length; blocks are disjoint, sorted, have a primitive nonzero
// pattern, and are extended as far left as the surrounding bits allow, so
// equal tapes have equal representations.
class BitTape {
 public:
  BitTape() = default;

  // Literal syntax: bits with `(p)^w` for a block, e.g. `(01)^w011`.
  static BitTape parse(std::string_view text);

  bool bit(const Ordinal& pos) const;
  const Ordinal& length() const { return length_; }
  const std::set<Ordinal>& ones() const { return ones_; }
  const std::vector<TapeBlock>& blocks() const { return blocks_; }
  bool is_finite() const { return blocks_.empty() && length_.is_finite(); }

  // Builders; each keeps the invariants. set_one extends length as needed;
  // add_block requires the covered region to be free of other blocks.
  void set_one(const Ordinal& pos);
  void add_block(const Ordinal& start, std::string pattern);
  void set_length(const Ordinal& len);

  // This tape followed by `tail` at position length().
  BitTape concat(const BitTape& tail) const;
  // The suffix starting at `offset`, re-based to position 0.
  BitTape suffix(const Ordinal& offset) const;

  std::string to_string() const;

  friend bool operator==(const BitTape&, const BitTape&) = default;

 private:
  void normalize();
  std::set<Ordinal> ones_;
  std::vector<TapeBlock> blocks_;
  Ordinal length_;
};

// A set of ordinals: finitely many points plus finitely many runs, where a
// run r stands for every ordinal in [r, r.limit_part() + w).
// Invariant: points lie outside runs; no point sits directly before a run.
struct OrdSet {
  std::set<Ordinal> points;
  std::set<Ordinal> runs;

  static OrdSet of(std::initializer_list<Ordinal> xs);
  static OrdSet from(const std::set<Ordinal>& xs);
  // {0, 1, 2, ...}
  static OrdSet naturals();

  bool contains(const Ordinal& a) const;
  bool is_finite() const { return runs.empty(); }
  void insert(const Ordinal& a);
  void add_run(const Ordinal& r);
  // sup{2a+2 | a in X}
  Ordinal code_sup() const;
  std::string to_string() const;

  friend bool operator==(const OrdSet&, const OrdSet&) = default;
  friend auto operator<=>(const OrdSet&, const OrdSet&) = default;
};

struct LowPair {
  Ordinal ord;
  OrdSet ordset;
  friend bool operator==(const LowPair&, const LowPair&) = default;
};

BitTape encode_ordset(const OrdSet& x);
BitTape encode_lowpair(const LowPair& p);
BitTape encode_seq(const std::vector<LowPair>& s);

struct DecodedSet {
  OrdSet set;
  Ordinal beta;  // the code occupies [0, beta + 3)
};
struct DecodedPair {
  LowPair pair;
  Ordinal length;  // beta + 3 + ord + 1
};

// Decoders read the code starting at `offset` and ignore everything after
// its terminator. Failures raise malformed-code.
DecodedSet decode_ordset(const BitTape& b, const Ordinal& offset = Ordinal(0));
DecodedPair decode_lowpair_at(const BitTape& b, const Ordinal& offset);
LowPair decode_lowpair(const BitTape& b);
std::vector<LowPair> decode_seq(const BitTape& b);

LowPair seq_index(const BitTape& b, const Ordinal& i);
BitTape seq_remove(const BitTape& b, const Ordinal& i);
BitTape seq_append(const BitTape& b, const LowPair& p);

bool tape_member(const Ordinal& a, const BitTape& b);

using OrdFn = std::function<Ordinal(const Ordinal&)>;
using OrdPred = std::function<bool(const Ordinal&)>;

// Images of infinite runs are not computable in finite time and raise
// not-decidable.
BitTape tape_image(const OrdFn& f, const BitTape& b);

// Least member satisfying pred. Runs are searched up to `run_cap` members;
// an exhausted cap raises not-decidable rather than answering not-found.
std::optional<Ordinal> tape_bounded_search(const BitTape& b, const OrdPred& pred,
                                           uint64_t run_cap = 4096);

// Structural check used by tests: every even slot at or below beta is 0.
bool even_slots_clear(const BitTape& b, const DecodedSet& d);

}  // namespace otmr
