#include <random>
#include <set>

#include "doctest.h"
#include "otmr/error.hpp"
#include "otmr/setcode.hpp"

using namespace otmr;

namespace {

HFSet S(const char* t) { return HFSet::parse(t); }

bool kind_is(const std::function<void()>& f, const std::string& kind) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind() == kind;
  }
  return false;
}

HFSet random_set(std::mt19937_64& rng, unsigned rank) {
  const auto& pool = cumulative_level(rank);
  std::vector<HFSet> e;
  for (size_t k = rng() % 5; k > 0; --k) e.push_back(pool[rng() % pool.size()]);
  return HFSet::make(e);
}

// Mostowski collapse straight from the pair list, independent of PreCode.
HFSet collapse_from_pairs(const Code& c) {
  std::set<Ordinal> pairs = c.pre->pairs();
  uint64_t n = c.pre->domain().finite_part();
  std::vector<std::optional<HFSet>> val(n);
  std::function<HFSet(uint64_t)> go = [&](uint64_t v) -> HFSet {
    if (val[v]) return *val[v];
    std::vector<HFSet> e;
    for (uint64_t u = 0; u < n; ++u)
      if (pairs.count(godel_pair(Ordinal(u), Ordinal(v)))) e.push_back(go(u));
    val[v] = HFSet::make(e);
    return *val[v];
  };
  return go(c.rho.finite_part());
}

}  // namespace

TEST_CASE("hereditarily finite sets") {
  CHECK(S("{}") == HFSet());
  CHECK(S("{{},{}}") == S("{{}}"));
  CHECK(S("{{{}},{}}").to_string() == "{{},{{}}}");
  CHECK(HFSet::ordinal(2) == S("{{},{{}}}"));
  CHECK(S("{{},{{}}}").as_ordinal() == Ordinal(2));
  CHECK_FALSE(S("{{{}}}").as_ordinal().has_value());
  CHECK(S("#w").is_infinite());
  CHECK(S("#w").contains(HFSet::ordinal(7)));
  CHECK_FALSE(S("#w").contains(S("{{{}}}")));
  CHECK(S("#3") == HFSet::ordinal(3));
  CHECK(S("{{{}}}").union_of() == S("{{}}"));
  CHECK(cumulative_level(2).size() == 2);
  CHECK(cumulative_level(4).size() == 16);
  CHECK(cumulative_level(5).size() == 65536);
  CHECK(as_kpair(kpair(S("{}"), S("{{}}"))) == std::make_pair(S("{}"), S("{{}}")));
  CHECK(as_kpair(kpair(S("{}"), S("{}"))) == std::make_pair(S("{}"), S("{}")));
  std::vector<HFSet> xs{S("{}"), S("{{}}"), S("{}")};
  CHECK(as_seq(make_seq(xs)) == xs);
  CHECK(as_seq(HFSet()) == std::vector<HFSet>{});
  CHECK(kind_is([] { S("{{}"); }, "parse-error"));
}

TEST_CASE("canonical codes") {
  Code e = build_code(HFSet());
  CHECK(e.rho == Ordinal(0));
  CHECK(e.pre->domain() == Ordinal(1));
  CHECK(e.pre->pairs().empty());
  Code one = build_code(S("{{}}"));
  CHECK(one.to_string() == "code(1; 1; 2)");
  CHECK(build_code(S("{{{}}}")).to_string() == "code(2; 1,5; 3)");
  CHECK(Code::parse("code(2; 1,5; 3)") == build_code(S("{{{}}}")));

  Code junk = Code::parse("code(0; 1; 2)");
  CHECK(decode_set(junk) == HFSet());
  CHECK(essdom(junk) == std::vector<Ordinal>{0});
  CHECK(essdom(e) == std::vector<Ordinal>{0});
  CHECK(essdom(one) == std::vector<Ordinal>{0, 1});
}

TEST_CASE("pre-code validation") {
  // Nodes 1 and 2 both code {0}.
  CHECK(kind_is([] { PreCode::from_edges(4, {{0, 1}, {0, 2}, {1, 3}, {2, 3}}); }, "invalid-code"));
  CHECK(kind_is([] { PreCode::from_edges(2, {{0, 1}, {1, 0}}); }, "invalid-code"));
  CHECK(kind_is([] { PreCode::from_edges(2, {}); }, "invalid-code"));
  CHECK(kind_is([] { Code::parse("code(3; 1; 2)"); }, "invalid-code"));
  CHECK(kind_is([] { Code::parse("code(1; 1)"); }, "parse-error"));
}

TEST_CASE("round trip for every set of rank at most 3") {
  for (const HFSet& x : cumulative_level(4)) {
    Code c = build_code(x);
    REQUIRE(decode_set(c) == x);
    CHECK(collapse_from_pairs(c) == x);
    CHECK(Code::parse(c.to_string()) == c);
  }
  std::mt19937_64 rng(3);
  for (int i = 0; i < 200; ++i) {
    HFSet x = random_set(rng, 4);
    CHECK(collapse_from_pairs(build_code(x)) == x);
  }
}

TEST_CASE("scrambled codes") {
  CHECK(decode_set(build_code_scrambled(HFSet(), 4)) == HFSet());
  Code s1 = build_code_scrambled(S("{{}}"), 1);
  CHECK_FALSE(s1 == build_code(S("{{}}")));
  CHECK(decode_set(s1) == S("{{}}"));
  Code s7 = build_code_scrambled(S("{{},{{}}}"), 7);
  CHECK(collapse_from_pairs(s7) == S("{{},{{}}}"));
  CHECK(essdom(s7).size() == 3);
}

TEST_CASE("decode and subset") {
  Code a = build_code(S("{{}}"));
  CHECK(decode_match(a, a, a.rho) == a.rho);
  for (uint64_t seed = 0; seed < 10; ++seed) {
    Code b = build_code_scrambled(S("{{}}"), seed);
    auto m = decode_match(a, b, Ordinal(0));
    REQUIRE(m.has_value());
    CHECK(b.pre->value(*m) == HFSet());
  }
  CHECK_FALSE(decode_match(a, build_code(HFSet()), a.rho).has_value());
  Code two = build_code_scrambled(S("{{},{{}}}"), 3);
  CHECK(subset_check(a, two, Ordinal(0), two.rho));
  CHECK(subset_check(a, two, a.rho, two.rho));
  CHECK_FALSE(subset_check(a, a, a.rho, Ordinal(0)));

  // Extensional oracle on decoded values for every node pair.
  std::mt19937_64 rng(9);
  for (int i = 0; i < 60; ++i) {
    Code x = build_code_scrambled(random_set(rng, 3), rng());
    Code y = build_code_scrambled(random_set(rng, 3), rng());
    uint64_t nx = x.pre->size(), ny = y.pre->size();
    for (uint64_t u = 0; u < nx; ++u) {
      auto m = decode_match(x, y, Ordinal(u));
      auto oracle = y.pre->node_of(x.pre->value(Ordinal(u)));
      CHECK(m == oracle);
      for (uint64_t v = 0; v < ny; ++v)
        CHECK(subset_check(x, y, Ordinal(u), Ordinal(v)) ==
              x.pre->value(Ordinal(u)).subset_of(y.pre->value(Ordinal(v))));
    }
  }
}

TEST_CASE("merge and separate") {
  CHECK(decode_set(merge_codes({})) == HFSet());
  CHECK(decode_set(merge_codes({build_code(HFSet())})) == S("{{}}"));
  Code m = merge_codes({build_code(HFSet()), build_code_scrambled(HFSet(), 5)});
  CHECK(decode_set(m) == S("{{}}"));
  CHECK(m.pre->size() == 2);

  std::mt19937_64 rng(21);
  for (int i = 0; i < 50; ++i) {
    std::vector<Code> cs;
    std::vector<HFSet> want;
    for (size_t k = rng() % 5; k > 0; --k) {
      HFSet x = random_set(rng, 3);
      cs.push_back(build_code_scrambled(x, rng()));
      want.push_back(x);
    }
    HFSet expect = HFSet::make(want);
    CHECK(decode_set(merge_codes(cs)) == expect);
    std::shuffle(cs.begin(), cs.end(), rng);
    CHECK(decode_set(merge_codes(cs)) == expect);
  }

  Code pair = build_code(S("{{},{{}}}"));
  auto is_empty = [](const Code& c) { return decode_set(c).is_empty(); };
  CHECK(decode_set(separate(pair, is_empty)) == S("{{}}"));
  CHECK(decode_set(separate(build_code(HFSet()), is_empty)) == HFSet());
  CHECK(decode_set(separate(build_code(S("{{}}")), [](const Code&) { return true; })) == S("{{}}"));
  CHECK(kind_is([] { merge_codes({build_code(S("#w"))}); }, "unsupported"));
}

TEST_CASE("code isomorphisms") {
  Code c = build_code(S("{{},{{}}}"));
  auto id = build_iso(c, c);
  REQUIRE(id.has_value());
  for (const auto& [k, v] : id->mapping) CHECK(k == v);
  CHECK_FALSE(build_iso(build_code(HFSet()), build_code(S("{{}}"))).has_value());

  std::mt19937_64 rng(77);
  int equal = 0;
  for (int i = 0; i < 300; ++i) {
    HFSet x = random_set(rng, 3);
    HFSet y = (rng() % 2) ? x : random_set(rng, 3);
    Code a = build_code_scrambled(x, rng());
    Code b = build_code_scrambled(y, rng());
    auto f = build_iso(a, b);
    CHECK(f.has_value() == (x == y));
    if (f) {
      ++equal;
      CHECK(is_code_iso(a, b, *f));
      CHECK(f->mapping.size() == transitive_closure(x).size());
    }
  }
  CHECK(equal > 100);

  // Restricting to the essential domain preserves the decoded set.
  for (int i = 0; i < 50; ++i) {
    HFSet x = random_set(rng, 4);
    Code a = build_code_scrambled(x, 2 * rng() + 1);
    auto dom = essdom(a);
    std::map<Ordinal, uint32_t> idx;
    for (uint32_t k = 0; k < dom.size(); ++k) idx[dom[k]] = k;
    std::vector<std::pair<uint32_t, uint32_t>> edges;
    for (const Ordinal& v : dom)
      for (const Ordinal& u : a.pre->members(v)) edges.emplace_back(idx.at(u), idx.at(v));
    Code r(Ordinal(idx.at(a.rho)), std::make_shared<PreCode>(PreCode::from_edges(dom.size(), edges)));
    CHECK(decode_set(r) == x);
  }

  // A corrupted map is rejected.
  Code a = build_code(S("{{},{{}}}"));
  Code b = build_code_scrambled(S("{{},{{}}}"), 8);
  auto f = build_iso(a, b);
  REQUIRE(f.has_value());
  CodeIso bad = *f;
  std::swap(bad.mapping.begin()->second, std::next(bad.mapping.begin())->second);
  CHECK_FALSE(is_code_iso(a, b, bad));
}

TEST_CASE("codes of w") {
  Code w1 = build_code(S("#w"));
  Code w2 = build_code_scrambled(S("#w"), 2);
  CHECK(decode_set(w2) == S("#w"));
  auto f = build_iso(w1, w2);
  REQUIRE(f.has_value());
  CHECK(is_code_iso(w1, w2, *f));
  Code three = build_code(HFSet::ordinal(3));
  auto m = decode_match(three, w1, three.rho);
  CHECK(m == Ordinal(3));
  CHECK(w1.pre->has_edge(*m, w1.rho));
  CHECK_FALSE(build_iso(three, w1).has_value());
  CHECK(Code::parse(w2.to_string()) == w2);
}

TEST_CASE("sequence codes") {
  std::vector<Code> parts{build_code(S("{{}}")), build_code_scrambled(HFSet(), 3), build_code(S("{{}}"))};
  Code s = seq_code(parts);
  CHECK(decode_set(s) == make_seq({S("{{}}"), HFSet(), S("{{}}")}));
  auto back = seq_parts(s);
  REQUIRE(back.size() == 3);
  CHECK(decode_set(back[1]) == HFSet());
  CHECK(decode_set(seq_code({})) == HFSet());
  CHECK(kind_is([] { seq_parts(build_code(S("{{{}}}"))); }, "invalid-code"));
}
