#include <random>
#include <set>
#include <string>

#include "doctest.h"
#include "otmr/error.hpp"
#include "otmr/tape.hpp"

using namespace otmr;

namespace {

Ordinal w() { return Ordinal::omega(); }

// Direct transcription of the coding condition for finite sets of naturals.
std::string naive_set_code(const std::set<uint64_t>& x) {
  uint64_t beta = 0;
  for (uint64_t a : x) beta = std::max(beta, 2 * a + 2);
  std::string s(beta + 3, '0');
  for (uint64_t p = 0; p < beta; ++p)
    if (p % 2 == 1 && x.count((p - 1) / 2)) s[p] = '1';
  s[beta + 1] = s[beta + 2] = '1';
  return s;
}

OrdSet finite_set(const std::set<uint64_t>& x) {
  OrdSet s;
  for (uint64_t a : x) s.insert(Ordinal(a));
  return s;
}

std::string random_bits(std::mt19937_64& rng, size_t n) {
  std::string s;
  for (size_t i = 0; i < n; ++i) s += (rng() & 1) ? '1' : '0';
  return s;
}

bool kind_is(const std::function<void()>& f, const std::string& kind) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind() == kind;
  }
  return false;
}

}  // namespace

TEST_CASE("fixed small codes") {
  CHECK(encode_ordset(OrdSet{}).to_string() == "011");
  CHECK(encode_ordset(OrdSet::of({0})).to_string() == "01011");
  CHECK(encode_ordset(OrdSet::naturals()).to_string() == "(01)^w011");
  BitTape om = encode_ordset(OrdSet::naturals());
  CHECK(om.bit(w()) == false);
  CHECK(om.bit(w() + Ordinal(1)));
  CHECK(om.bit(w() + Ordinal(2)));
  CHECK(om.length() == w() + Ordinal(3));
}

TEST_CASE("pair and sequence codes") {
  CHECK(encode_lowpair({0, {}}).to_string() == "0111");
  CHECK(encode_lowpair({2, {}}).to_string() == "011001");
  CHECK(encode_lowpair({0, OrdSet::of({0})}).to_string() == "010111");
  CHECK(decode_lowpair(BitTape::parse("0111")) == LowPair{0, {}});
  CHECK(decode_lowpair(BitTape::parse("0101110110")) == LowPair{0, OrdSet::of({0})});
  CHECK(kind_is([] { decode_lowpair(BitTape::parse("11")); }, "malformed-code"));
  CHECK(kind_is([] { decode_lowpair(BitTape::parse("1101")); }, "malformed-code"));
  CHECK(kind_is([] { decode_lowpair(BitTape::parse("011")); }, "malformed-code"));

  CHECK(encode_seq({}).to_string() == "1111");
  CHECK(seq_append(encode_seq({}), {0, {}}).to_string() == "01111111");
  BitTape s = encode_seq({{0, {}}, {1, {}}});
  CHECK(seq_index(s, 1) == LowPair{1, {}});
  CHECK(kind_is([&] { seq_index(s, 2); }, "index-out-of-range"));
  CHECK(decode_seq(seq_remove(s, 0)) == std::vector<LowPair>{{1, {}}});
}

TEST_CASE("transfinite pair code") {
  LowPair p{w(), OrdSet::naturals()};
  BitTape t = encode_lowpair(p);
  CHECK(t.to_string() == "(01)^w011(0)^w1");
  CHECK(decode_lowpair(t) == p);
  // An omega gap after a finite set code lands the terminal 1 at w.
  LowPair q{w(), OrdSet::of({1})};
  CHECK(decode_lowpair(encode_lowpair(q)) == q);
  std::vector<LowPair> seq{{0, {}}, p, {3, OrdSet::of({2, 5})}};
  CHECK(decode_seq(encode_seq(seq)) == seq);
}

TEST_CASE("encoder matches the direct coding condition") {
  for (uint64_t mask = 0; mask < (1u << 9); ++mask) {
    std::set<uint64_t> x;
    for (uint64_t i = 0; i < 9; ++i)
      if (mask >> i & 1) x.insert(i);
    BitTape t = encode_ordset(finite_set(x));
    REQUIRE(t.to_string() == naive_set_code(x));
    DecodedSet d = decode_ordset(t);
    CHECK(d.set == finite_set(x));
    CHECK(even_slots_clear(t, d));
  }
}

TEST_CASE("round trips and prefix robustness") {
  std::mt19937_64 rng(11);
  for (int iter = 0; iter < 400; ++iter) {
    std::set<uint64_t> x;
    size_t n = rng() % 6;
    for (size_t i = 0; i < n; ++i) x.insert(rng() % 32);
    LowPair p{Ordinal(rng() % 32), finite_set(x)};
    if (iter % 7 == 0) p.ordset.add_run(w());
    if (iter % 11 == 0) p.ord = w() + Ordinal(rng() % 5);
    BitTape code = encode_lowpair(p);
    REQUIRE(decode_lowpair(code) == p);
    BitTape tail = BitTape::parse(random_bits(rng, 1 + rng() % 40));
    CHECK(decode_lowpair(code.concat(tail)) == p);
    if (iter % 3 == 0) CHECK(decode_lowpair(code.concat(BitTape::parse("(1)^w"))) == p);
  }
  for (int iter = 0; iter < 100; ++iter) {
    std::vector<LowPair> s;
    size_t n = rng() % 5;
    for (size_t i = 0; i < n; ++i) {
      std::set<uint64_t> x;
      for (size_t k = rng() % 4; k > 0; --k) x.insert(rng() % 10);
      s.push_back({Ordinal(rng() % 6), finite_set(x)});
    }
    BitTape code = encode_seq(s);
    CHECK(decode_seq(code) == s);
    CHECK(decode_seq(code.concat(BitTape::parse(random_bits(rng, 20)))) == s);
    LowPair extra{Ordinal(rng() % 4), finite_set({rng() % 5})};
    auto appended = s;
    appended.push_back(extra);
    CHECK(decode_seq(seq_append(code, extra)) == appended);
  }
}

TEST_CASE("literal syntax round trips") {
  for (const char* s : {"011", "(01)^w011", "0(1)^w", "(01)^w(0)^w1", "(011)^w0101", "1(0)^w(0)^w1"}) {
    CHECK(BitTape::parse(s).to_string() == s);
  }
  CHECK(BitTape::parse("01(01)^w011") == BitTape::parse("(01)^w011"));
  CHECK(BitTape::parse("(0101)^w") == BitTape::parse("(01)^w"));
  CHECK(kind_is([] { BitTape::parse("01(2)^w"); }, "parse-error"));
}

TEST_CASE("membership") {
  CHECK(tape_member(0, encode_ordset(OrdSet::of({0}))));
  CHECK_FALSE(tape_member(1, encode_ordset(OrdSet::of({0}))));
  CHECK(tape_member(5, encode_ordset(OrdSet::naturals())));
  CHECK_FALSE(tape_member(w(), encode_ordset(OrdSet::naturals())));
  CHECK(kind_is([] { tape_member(0, BitTape::parse("(0100)^w011")); }, "malformed-code"));
}

TEST_CASE("image and bounded search") {
  OrdFn id = [](const Ordinal& a) { return a; };
  OrdFn succ = [](const Ordinal& a) { return a.succ(); };
  OrdFn zero = [](const Ordinal&) { return Ordinal(0); };
  OrdFn dbl = [](const Ordinal& a) { return ord_double(a); };
  CHECK(tape_image(id, encode_ordset(OrdSet::of({1, 3}))) == encode_ordset(OrdSet::of({1, 3})));
  CHECK(tape_image(succ, encode_ordset(OrdSet::of({0, 1}))) == encode_ordset(OrdSet::of({1, 2})));
  CHECK(tape_image(zero, encode_ordset(OrdSet::of({2, 7}))) == encode_ordset(OrdSet::of({0})));

  std::mt19937_64 rng(5);
  for (int i = 0; i < 100; ++i) {
    std::set<uint64_t> x;
    for (size_t k = rng() % 6; k > 0; --k) x.insert(rng() % 20);
    BitTape b = encode_ordset(finite_set(x));
    OrdFn gf = [&](const Ordinal& a) { return dbl(succ(a)); };
    CHECK(tape_image(gf, b) == tape_image(dbl, tape_image(succ, b)));
  }

  OrdPred even = [](const Ordinal& a) { return a.finite_part() % 2 == 0; };
  CHECK(tape_bounded_search(encode_ordset(OrdSet::of({1, 2, 3})), even) == Ordinal(2));
  CHECK_FALSE(tape_bounded_search(encode_ordset(OrdSet::of({1, 3})), even).has_value());
  CHECK_FALSE(tape_bounded_search(encode_ordset(OrdSet{}), even).has_value());
  OrdPred big = [](const Ordinal& a) { return Ordinal(10) < a; };
  CHECK(tape_bounded_search(encode_ordset(OrdSet::naturals()), big) == Ordinal(11));
  OrdPred never = [](const Ordinal&) { return false; };
  CHECK(kind_is([&] { tape_bounded_search(encode_ordset(OrdSet::naturals()), never); }, "not-decidable"));
}
