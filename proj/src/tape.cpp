#include "otmr/tape.hpp"

#include <algorithm>
#include <numeric>

#include "otmr/error.hpp"

namespace otmr {

namespace {

Ordinal segment_end(const Ordinal& o) { return o.limit_part() + Ordinal::omega(); }

bool odd_slot(const Ordinal& pos) { return pos.finite_part() % 2 == 1; }

// pos = 2a + 1 for the returned a.
Ordinal slot_member(const Ordinal& pos) {
  return pos.limit_part() + Ordinal((pos.finite_part() - 1) / 2);
}

[[noreturn]] void malformed(const std::string& why) { throw Error("malformed-code", why); }

std::string primitive(const std::string& p) {
  size_t n = p.size();
  for (size_t d = 1; d < n; ++d) {
    if (n % d != 0) continue;
    bool ok = true;
    for (size_t i = d; i < n && ok; ++i) ok = p[i] == p[i - d];
    if (ok) return p.substr(0, d);
  }
  return p;
}

// Rotate so that index `shift` becomes index 0.
std::string rotate_by(const std::string& p, uint64_t shift) {
  size_t k = static_cast<size_t>(shift % p.size());
  return p.substr(k) + p.substr(0, k);
}

char block_bit(const TapeBlock& b, const Ordinal& pos) {
  uint64_t k = pos.finite_part() - b.start.finite_part();
  return b.pattern[static_cast<size_t>(k % b.pattern.size())];
}

bool in_block(const TapeBlock& b, const Ordinal& pos) { return b.start <= pos && pos < b.end(); }

}  // namespace

Ordinal TapeBlock::end() const { return segment_end(start); }

bool BitTape::bit(const Ordinal& pos) const {
  if (!(pos < length_)) return false;
  if (ones_.count(pos)) return true;
  for (const TapeBlock& b : blocks_)
    if (in_block(b, pos)) return block_bit(b, pos) == '1';
  return false;
}

void BitTape::set_one(const Ordinal& pos) {
  for (const TapeBlock& b : blocks_) {
    if (in_block(b, pos)) {
      if (block_bit(b, pos) == '1') return;
      throw Error("malformed-code", "cannot override a periodic block at " + pos.to_string());
    }
  }
  ones_.insert(pos);
  if (!(pos < length_)) length_ = pos.succ();
  normalize();
}

void BitTape::add_block(const Ordinal& start, std::string pattern) {
  if (pattern.empty() || pattern.find_first_not_of("01") != std::string::npos)
    throw Error("parse-error", "block pattern must be a nonempty bit string");
  TapeBlock nb{start, std::move(pattern)};
  for (const TapeBlock& b : blocks_)
    if (in_block(b, start) || in_block(nb, b.start))
      throw Error("malformed-code", "overlapping blocks at " + start.to_string());
  for (auto it = ones_.begin(); it != ones_.end();) {
    if (in_block(nb, *it)) {
      if (block_bit(nb, *it) != '1') throw Error("malformed-code", "block contradicts a set bit");
      it = ones_.erase(it);
    } else {
      ++it;
    }
  }
  if (length_ < nb.end()) length_ = nb.end();
  if (nb.pattern.find('1') != std::string::npos) blocks_.push_back(std::move(nb));
  normalize();
}

void BitTape::set_length(const Ordinal& len) {
  for (const Ordinal& o : ones_)
    if (!(o < len)) throw Error("malformed-code", "length below a set bit");
  for (const TapeBlock& b : blocks_)
    if (len < b.end()) throw Error("malformed-code", "length inside a block");
  length_ = len;
}

void BitTape::normalize() {
  for (TapeBlock& b : blocks_) {
    b.pattern = primitive(b.pattern);
    while (b.start.finite_part() > 0) {
      Ordinal prev = b.start.pred();
      bool v = ones_.count(prev) > 0;
      if (v != (b.pattern.back() == '1')) break;
      ones_.erase(prev);
      b.start = prev;
      b.pattern = b.pattern.back() + b.pattern.substr(0, b.pattern.size() - 1);
    }
  }
  std::sort(blocks_.begin(), blocks_.end(),
            [](const TapeBlock& a, const TapeBlock& b) { return a.start < b.start; });
}

BitTape BitTape::concat(const BitTape& tail) const {
  BitTape out = *this;
  for (const Ordinal& o : tail.ones_) out.ones_.insert(length_ + o);
  for (const TapeBlock& b : tail.blocks_) out.blocks_.push_back(TapeBlock{length_ + b.start, b.pattern});
  out.length_ = length_ + tail.length_;
  out.normalize();
  return out;
}

BitTape BitTape::suffix(const Ordinal& offset) const {
  BitTape out;
  if (!(offset < length_)) return out;
  for (const Ordinal& o : ones_)
    if (offset <= o) out.ones_.insert(ord_sub_left(offset, o));
  for (const TapeBlock& b : blocks_) {
    if (!(offset < b.end())) continue;
    if (offset <= b.start) {
      out.blocks_.push_back(TapeBlock{ord_sub_left(offset, b.start), b.pattern});
    } else {
      uint64_t shift = offset.finite_part() - b.start.finite_part();
      out.blocks_.push_back(TapeBlock{Ordinal(0), rotate_by(b.pattern, shift)});
    }
  }
  out.length_ = ord_sub_left(offset, length_);
  out.normalize();
  return out;
}

BitTape BitTape::parse(std::string_view text) {
  BitTape t;
  Ordinal cur;
  size_t i = 0;
  auto fail = [&](const std::string& m) {
    throw Error("parse-error", "tape '" + std::string(text) + "': " + m + " at offset " + std::to_string(i));
  };
  while (i < text.size()) {
    char c = text[i];
    if (c == ' ' || c == '\t' || c == '\n') {
      ++i;
    } else if (c == '0' || c == '1') {
      if (c == '1') t.ones_.insert(cur);
      cur = cur.succ();
      ++i;
    } else if (c == '(') {
      size_t close = text.find(')', i);
      if (close == std::string_view::npos) fail("unclosed block");
      std::string pat(text.substr(i + 1, close - i - 1));
      if (pat.empty() || pat.find_first_not_of("01") != std::string::npos) fail("bad block pattern");
      if (text.substr(close + 1, 2) != "^w") fail("expected ^w after block");
      TapeBlock b{cur, pat};
      if (pat.find('1') != std::string::npos) t.blocks_.push_back(b);
      cur = b.end();
      i = close + 3;
    } else {
      fail(std::string("unexpected '") + c + "'");
    }
  }
  t.length_ = cur;
  t.normalize();
  return t;
}

std::string BitTape::to_string() const {
  std::string out;
  Ordinal cur;
  size_t zero_segments = 0;
  auto next_block = [&](const Ordinal& from) -> const TapeBlock* {
    for (const TapeBlock& b : blocks_)
      if (from <= b.start) return &b;
    return nullptr;
  };
  while (cur < length_) {
    const TapeBlock* nb = next_block(cur);
    if (nb && nb->start == cur) {
      out += "(" + nb->pattern + ")^w";
      cur = nb->end();
      continue;
    }
    auto it = ones_.lower_bound(cur);
    Ordinal next = length_;
    if (it != ones_.end() && *it < next) next = *it;
    if (nb && nb->start < next) next = nb->start;
    if (next.limit_part() == cur.limit_part()) {
      out.append(static_cast<size_t>(next.finite_part() - cur.finite_part()), '0');
      cur = next;
      if (it != ones_.end() && *it == cur && cur < length_) {
        out += '1';
        cur = cur.succ();
      }
    } else {
      if (++zero_segments > 1024) throw Error("bound-overflow", "zero gap too long to print");
      out += "(0)^w";
      cur = segment_end(cur);
    }
  }
  return out;
}

OrdSet OrdSet::of(std::initializer_list<Ordinal> xs) {
  OrdSet s;
  for (const Ordinal& x : xs) s.insert(x);
  return s;
}

OrdSet OrdSet::from(const std::set<Ordinal>& xs) {
  OrdSet s;
  for (const Ordinal& x : xs) s.insert(x);
  return s;
}

OrdSet OrdSet::naturals() {
  OrdSet s;
  s.add_run(Ordinal(0));
  return s;
}

bool OrdSet::contains(const Ordinal& a) const {
  if (points.count(a)) return true;
  for (const Ordinal& r : runs)
    if (r <= a && a < segment_end(r)) return true;
  return false;
}

void OrdSet::insert(const Ordinal& a) {
  if (contains(a)) return;
  for (auto it = runs.begin(); it != runs.end(); ++it) {
    if (a.succ() == *it) {
      runs.erase(it);
      add_run(a);
      return;
    }
  }
  points.insert(a);
}

void OrdSet::add_run(const Ordinal& r0) {
  Ordinal r = r0;
  for (auto it = runs.begin(); it != runs.end();) {
    if (it->limit_part() == r.limit_part()) {
      r = std::min(r, *it);
      it = runs.erase(it);
    } else {
      ++it;
    }
  }
  for (auto it = points.begin(); it != points.end();) {
    if (r <= *it && *it < segment_end(r))
      it = points.erase(it);
    else
      ++it;
  }
  while (r.finite_part() > 0 && points.count(r.pred())) {
    r = r.pred();
    points.erase(r);
  }
  runs.insert(r);
}

Ordinal OrdSet::code_sup() const {
  Ordinal s;
  for (const Ordinal& p : points) s = std::max(s, ord_double(p) + Ordinal(2));
  for (const Ordinal& r : runs) s = std::max(s, segment_end(r));
  return s;
}

std::string OrdSet::to_string() const {
  std::string out = "{";
  bool first = true;
  std::vector<std::pair<Ordinal, bool>> items;
  for (const Ordinal& p : points) items.emplace_back(p, false);
  for (const Ordinal& r : runs) items.emplace_back(r, true);
  std::sort(items.begin(), items.end());
  for (const auto& [o, run] : items) {
    if (!first) out += ',';
    first = false;
    out += o.to_string();
    if (run) out += "..";
  }
  return out + "}";
}

BitTape encode_ordset(const OrdSet& x) {
  Ordinal beta = x.code_sup();
  BitTape t;
  for (const Ordinal& p : x.points) t.set_one(ord_double(p) + Ordinal(1));
  for (const Ordinal& r : x.runs) t.add_block(ord_double(r), "01");
  t.set_one(beta + Ordinal(1));
  t.set_one(beta + Ordinal(2));
  return t;
}

BitTape encode_lowpair(const LowPair& p) {
  BitTape t = encode_ordset(p.ordset);
  t.set_one(t.length() + p.ord);
  return t;
}

BitTape encode_seq(const std::vector<LowPair>& s) {
  BitTape t;
  for (const LowPair& p : s) t = t.concat(encode_lowpair(p));
  return t.concat(BitTape::parse("1111"));
}

DecodedSet decode_ordset(const BitTape& b, const Ordinal& offset) {
  BitTape t = b.suffix(offset);
  OrdSet elems;
  std::vector<Ordinal> odd_ones;
  std::optional<Ordinal> terminal;

  auto one_it = t.ones().begin();
  auto block_it = t.blocks().begin();
  while (!terminal) {
    bool have_one = one_it != t.ones().end();
    bool have_block = block_it != t.blocks().end();
    if (!have_one && !have_block) break;
    if (have_one && (!have_block || *one_it < block_it->start)) {
      if (odd_slot(*one_it))
        odd_ones.push_back(*one_it);
      else
        terminal = *one_it;
      ++one_it;
      continue;
    }
    const TapeBlock& blk = *block_it++;
    size_t n = blk.pattern.size();
    size_t period = std::lcm(n, size_t{2});
    uint64_t base = blk.start.finite_part();
    std::optional<size_t> even_one;
    bool odd_all = true, odd_none = true;
    for (size_t k = 0; k < period; ++k) {
      bool v = blk.pattern[k % n] == '1';
      bool odd = (base + k) % 2 == 1;
      if (!odd && v && !even_one) even_one = k;
      if (odd) (v ? odd_none : odd_all) = false;
    }
    if (even_one) {
      for (size_t k = 0; k < *even_one; ++k)
        if (blk.pattern[k % n] == '1') odd_ones.push_back(blk.start + Ordinal(k));
      terminal = blk.start + Ordinal(*even_one);
    } else if (odd_all) {
      Ordinal first_odd = blk.start + Ordinal(base % 2 == 0 ? 1 : 0);
      elems.add_run(slot_member(first_odd));
    } else if (!odd_none) {
      malformed("periodic block " + blk.pattern + " does not code a set of ordinals");
    }
  }
  if (!terminal) malformed("no set terminator before the end of the tape");
  if (terminal->finite_part() < 2) malformed("set terminator at " + terminal->to_string() + " has no room");
  Ordinal beta = terminal->limit_part() + Ordinal(terminal->finite_part() - 2);
  if (!t.bit(beta + Ordinal(1))) malformed("expected 11 at " + (beta + Ordinal(1)).to_string());
  for (const Ordinal& q : odd_ones)
    if (q < beta) elems.insert(slot_member(q));
  if (!(elems.code_sup() == beta))
    malformed("terminator at " + beta.to_string() + " does not match sup " + elems.code_sup().to_string());
  return DecodedSet{elems, beta};
}

DecodedPair decode_lowpair_at(const BitTape& b, const Ordinal& offset) {
  DecodedSet s = decode_ordset(b, offset);
  BitTape t = b.suffix(offset);
  Ordinal from = s.beta + Ordinal(3);
  std::optional<Ordinal> pos;
  auto it = t.ones().lower_bound(from);
  if (it != t.ones().end()) pos = *it;
  for (const TapeBlock& blk : t.blocks()) {
    if (!(from < blk.end())) continue;
    Ordinal begin = std::max(from, blk.start);
    if (pos && !(begin < *pos)) break;
    for (size_t k = 0; k < blk.pattern.size(); ++k) {
      Ordinal q = begin + Ordinal(k);
      if (block_bit(blk, q) == '1') {
        if (!pos || q < *pos) pos = q;
        break;
      }
    }
    break;
  }
  if (!pos) malformed("pair code has no terminal 1");
  return DecodedPair{LowPair{ord_sub_left(from, *pos), s.set}, pos->succ()};
}

LowPair decode_lowpair(const BitTape& b) { return decode_lowpair_at(b, Ordinal(0)).pair; }

std::vector<LowPair> decode_seq(const BitTape& b) {
  std::vector<LowPair> out;
  Ordinal cur;
  for (;;) {
    if (!(cur < b.length())) malformed("sequence has no 1111 terminator");
    bool end = true;
    for (uint64_t k = 0; k < 4 && end; ++k) end = b.bit(cur + Ordinal(k));
    if (end) return out;
    DecodedPair p = decode_lowpair_at(b, cur);
    out.push_back(p.pair);
    cur = cur + p.length;
  }
}

LowPair seq_index(const BitTape& b, const Ordinal& i) {
  auto s = decode_seq(b);
  if (!i.is_finite() || i.finite_part() >= s.size())
    throw Error("index-out-of-range", i.to_string() + " >= " + std::to_string(s.size()));
  return s[static_cast<size_t>(i.finite_part())];
}

BitTape seq_remove(const BitTape& b, const Ordinal& i) {
  auto s = decode_seq(b);
  if (!i.is_finite() || i.finite_part() >= s.size())
    throw Error("index-out-of-range", i.to_string() + " >= " + std::to_string(s.size()));
  s.erase(s.begin() + static_cast<long>(i.finite_part()));
  return encode_seq(s);
}

BitTape seq_append(const BitTape& b, const LowPair& p) {
  auto s = decode_seq(b);
  s.push_back(p);
  return encode_seq(s);
}

bool tape_member(const Ordinal& a, const BitTape& b) { return decode_ordset(b).set.contains(a); }

BitTape tape_image(const OrdFn& f, const BitTape& b) {
  DecodedSet d = decode_ordset(b);
  if (!d.set.is_finite()) throw Error("not-decidable", "image of an infinite run");
  OrdSet img;
  for (const Ordinal& a : d.set.points) img.insert(f(a));
  return encode_ordset(img);
}

std::optional<Ordinal> tape_bounded_search(const BitTape& b, const OrdPred& pred, uint64_t run_cap) {
  DecodedSet d = decode_ordset(b);
  std::vector<std::pair<Ordinal, bool>> items;
  for (const Ordinal& p : d.set.points) items.emplace_back(p, false);
  for (const Ordinal& r : d.set.runs) items.emplace_back(r, true);
  std::sort(items.begin(), items.end());
  for (const auto& [o, run] : items) {
    if (!run) {
      if (pred(o)) return o;
      continue;
    }
    for (uint64_t k = 0; k < run_cap; ++k)
      if (pred(o + Ordinal(k))) return o + Ordinal(k);
    throw Error("not-decidable", "search cap exhausted inside the run at " + o.to_string());
  }
  return std::nullopt;
}

bool even_slots_clear(const BitTape& b, const DecodedSet& d) {
  for (const Ordinal& o : b.ones())
    if (!odd_slot(o) && o <= d.beta) return false;
  for (const TapeBlock& blk : b.blocks()) {
    if (d.beta < blk.start) continue;
    uint64_t span = blk.end() <= d.beta ? std::lcm(blk.pattern.size(), size_t{2})
                                        : d.beta.finite_part() - blk.start.finite_part() + 1;
    for (uint64_t k = 0; k < span; ++k) {
      Ordinal q = blk.start + Ordinal(k);
      if (!odd_slot(q) && block_bit(blk, q) == '1') return false;
    }
  }
  return true;
}

}  // namespace otmr
