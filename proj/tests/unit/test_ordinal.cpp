#include <algorithm>
#include <tuple>
#include <vector>

#include "doctest.h"
#include "otmr/error.hpp"
#include "otmr/ordinal.hpp"

using namespace otmr;

namespace {

Ordinal w() { return Ordinal::omega(); }
Ordinal O(const char* s) { return Ordinal::parse(s); }

std::vector<Ordinal> cnf_sample() {
  return {O("0"), O("1"), O("7"), O("w"), O("w+1"), O("w*2"), O("w*3+4"), O("w^2"), O("w^2*2+w+5"),
          O("w^3+w^2"), O("w^5*2+w^3+1"), O("w^7")};
}

// Every ordinal below w^2 as (a, n) = w*a + n.
std::vector<Ordinal> below_w2(uint64_t amax, uint64_t nmax) {
  std::vector<Ordinal> out;
  for (uint64_t a = 0; a <= amax; ++a)
    for (uint64_t n = 0; n <= nmax; ++n) out.push_back(w() * Ordinal(a) + Ordinal(n));
  return out;
}

}  // namespace

TEST_CASE("comparison") {
  CHECK(ord_cmp(0, 0) == Ordering::equal);
  CHECK(ord_cmp(3, w()) == Ordering::less);
  CHECK(ord_cmp(O("w*2+1"), O("w*2")) == Ordering::greater);
  CHECK(O("w^2") > O("w*100+100"));
}

TEST_CASE("parse and print round trip") {
  for (const char* s : {"0", "5", "w", "w+3", "w*2", "w^2*3+w+1", "w^7*2+w^3"}) {
    CHECK(O(s).to_string() == s);
  }
  Ordinal saved = ordinal_bound();
  set_ordinal_bound_exponent(O("w*2"));
  for (const char* s : {"w^(w+1)", "w^w*2+w^3", "w^(w+3)*4"}) CHECK(O(s).to_string() == s);
  set_ordinal_bound(saved);
  CHECK(O("w^2*3 + w + 1") == O("w^2*3+w+1"));
  CHECK(O("1+w") == w());
  CHECK_THROWS_AS(O("w+"), Error);
  CHECK_THROWS_AS(O("x"), Error);
}

TEST_CASE("bound is enforced") {
  // Default bound is w^w; w^w itself parses only as an exponent.
  try {
    O("w^w");
    FAIL("expected bound-overflow");
  } catch (const Error& e) {
    CHECK(e.kind() == "bound-overflow");
  }
  CHECK_NOTHROW(O("w^40"));
  CHECK(O("w^30") * O("w^30") == O("w^60"));
  CHECK_THROWS_AS(O("w^(w+1)"), Error);
  Ordinal saved = ordinal_bound();
  set_ordinal_bound_exponent(3);
  CHECK_THROWS_AS(O("w^2") * O("w"), Error);
  CHECK_THROWS_AS(O("w^3"), Error);
  set_ordinal_bound(saved);
  CHECK_THROWS_AS(Ordinal(UINT64_MAX) + Ordinal(1), Error);
}

TEST_CASE("addition and multiplication") {
  CHECK(ord_add(1, w()) == w());
  CHECK(ord_add(w(), 1) == O("w+1"));
  CHECK(ord_mul(w(), 2) == O("w*2"));
  CHECK(ord_mul(2, w()) == w());
  CHECK(O("w+3") * O("w") == O("w^2"));
  CHECK(O("w+3") * Ordinal(2) == O("w*2+3"));
  CHECK(O("w*2+1") + O("w^2") == O("w^2"));
  CHECK(O("w^2+w") + O("w*3+1") == O("w^2+w*4+1"));

  for (uint64_t a = 0; a < 64; ++a)
    for (uint64_t b = 0; b < 64; ++b) {
      CHECK(ord_add(a, b) == Ordinal(a + b));
      CHECK(ord_mul(a, b) == Ordinal(a * b));
    }

  auto s = cnf_sample();
  for (const auto& a : s)
    for (const auto& b : s) {
      CHECK(a + b >= b);
      if (!b.is_zero()) CHECK(a + b > a);
      for (const auto& c : s) {
        CHECK((a + b) + c == a + (b + c));
        CHECK(a * (b + c) == a * b + a * c);
        if ((a * b).leading_exponent() < Ordinal(5) && c.leading_exponent() < Ordinal(2))
          CHECK((a * b) * c == a * (b * c));
      }
      if (a <= b) CHECK(a + ord_sub_left(a, b) == b);
    }
}

TEST_CASE("sup and doubling") {
  CHECK(ord_sup({}) == Ordinal(0));
  CHECK(ord_sup({2, 5, 3}) == Ordinal(5));
  CHECK(ord_sup({w(), 4}) == w());
  CHECK(ord_double(3) == Ordinal(6));
  CHECK(ord_double(O("w+3")) == O("w+6"));
  CHECK(Ordinal(2) * O("w+3") == O("w+6"));
}

TEST_CASE("finite pairing matches enumeration of the canonical order") {
  std::vector<std::tuple<uint64_t, uint64_t, uint64_t>> pairs;
  for (uint64_t a = 0; a < 64; ++a)
    for (uint64_t b = 0; b < 64; ++b) pairs.emplace_back(std::max(a, b), a, b);
  std::sort(pairs.begin(), pairs.end());
  for (size_t i = 0; i < pairs.size(); ++i) {
    auto [m, a, b] = pairs[i];
    REQUIRE(godel_pair(a, b) == Ordinal(i));
    REQUIRE(godel_unpair(Ordinal(i)) == OrdPair{a, b});
  }
  CHECK(godel_pair(0, 1) == Ordinal(1));
  CHECK(godel_pair(1, 0) == Ordinal(2));
  CHECK(godel_pair(1, 2) == Ordinal(5));
  CHECK(godel_pair(2, 2) == Ordinal(8));
}

TEST_CASE("transfinite pairing is the order type of the canonical order") {
  // The block of pairs with maximum m has order type m + m + 1, and block
  // starts are continuous at limits.
  auto ms = below_w2(4, 6);
  std::sort(ms.begin(), ms.end());
  for (const auto& m : ms) {
    CHECK(pair_block_start(m.succ()) == pair_block_start(m) + m + m + Ordinal(1));
  }
  CHECK(pair_block_start(w()) == w());
  CHECK(pair_block_start(O("w*2")) == O("w^2"));
  CHECK(pair_block_start(O("w*3")) == O("w^2*2"));
  // Limits: T(w*(a+1)) exceeds every T(w*a+n) and is reached by no finite step.
  for (uint64_t a = 1; a < 4; ++a) {
    Ordinal lim = w() * Ordinal(a + 1);
    for (uint64_t n = 0; n < 20; ++n) {
      Ordinal below = pair_block_start(w() * Ordinal(a) + Ordinal(n));
      CHECK(below < pair_block_start(lim));
    }
    // Any value below T(lim) lies in some earlier block.
    Ordinal probe = O("w^2") * Ordinal(a - 1) + w() * Ordinal(1000) + Ordinal(3);
    if (a >= 2) CHECK(probe < pair_block_start(lim));
  }

  // Strict monotonicity along the canonical order, and inverse agreement.
  auto xs = below_w2(3, 4);
  std::vector<std::tuple<Ordinal, Ordinal, Ordinal>> pairs;
  for (const auto& a : xs)
    for (const auto& b : xs) pairs.emplace_back(std::max(a, b), a, b);
  std::sort(pairs.begin(), pairs.end());
  for (size_t i = 0; i < pairs.size(); ++i) {
    auto [m, a, b] = pairs[i];
    Ordinal v = godel_pair(a, b);
    CHECK(godel_unpair(v) == OrdPair{a, b});
    if (i > 0) {
      auto [m0, a0, b0] = pairs[i - 1];
      CHECK(godel_pair(a0, b0) < v);
    }
  }
  CHECK(godel_pair(O("w"), 0) == O("w*2"));
  CHECK(godel_pair(O("w"), 1) == O("w*2+1"));
  CHECK(godel_pair(0, O("w")) == O("w"));
}

TEST_CASE("unpair inverts pair on a sample below w^3") {
  for (uint64_t p = 0; p < 4; ++p)
    for (uint64_t q = 0; q < 12; ++q)
      for (uint64_t r = 0; r < 8; ++r) {
        Ordinal o = O("w^2") * Ordinal(p) + w() * Ordinal(q) + Ordinal(r);
        CHECK(godel_pair(godel_unpair(o)) == o);
      }
  CHECK_THROWS_AS(godel_pair(O("w^2"), 0), Error);
  CHECK_THROWS_AS(godel_unpair(O("w^3")), Error);
}
