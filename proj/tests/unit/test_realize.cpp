#include <random>

#include "doctest.h"
#include "otmr/corpus.hpp"
#include "otmr/error.hpp"
#include "otmr/realize.hpp"

using namespace otmr;

namespace {

Formula F(const char* t) { return Formula::parse(t); }
HFSet S(const char* t) { return HFSet::parse(t); }

std::string kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  return "";
}

const CodeUniverse& U3() {
  static const CodeUniverse u = CodeUniverse::level(3);
  return u;
}

}  // namespace

TEST_CASE("code universes") {
  const CodeUniverse& u = U3();
  CHECK(u.sets().size() == 4);
  for (const HFSet& x : u.sets()) {
    const auto& cs = u.codes_for(x);
    CHECK(cs.front() == build_code(x));
    for (const Code& c : cs) CHECK(decode_set(c) == x);
  }
  CHECK(u.codes_for(S("{{},{{}}}")).size() > 1);
  auto pairs = u.codes_for_tuple({S("{}"), S("{{}}")});
  REQUIRE_FALSE(pairs.empty());
  for (const Code& c : pairs) CHECK(decode_context(c, 2) == std::vector<HFSet>{S("{}"), S("{{}}")});
  CHECK(u.codes_for_tuple({S("{}"), HFSet::ordinal(Ordinal::omega())}).empty());
  CHECK(kind_of([&] { decode_context(pairs[0], 3); }) == "stuck-term");
}

TEST_CASE("equality realisers") {
  auto r = realize_eq(S("{}"), S("{}"));
  REQUIRE(r);
  CHECK(verify(*r, F("(eq {} {})"), U3()));
  auto r2 = realize_eq(S("{{}}"), S("{{}}"));
  REQUIRE(r2);
  CHECK(verify(*r2, F("(eq {{}} {{}})"), U3()));
  CHECK(verify_uniform(*r2, F("(eq {{},{{}}} {{{}},{}})"), U3()));
  CHECK_FALSE(realize_eq(S("{}"), S("{{}}")));
  CHECK_FALSE(verify(eq_realizer(), F("(eq {} {{}})"), U3()));
}

TEST_CASE("membership realisers") {
  auto r = realize_mem(S("{}"), S("{{}}"));
  REQUIRE(r);
  CHECK(verify(*r, F("(mem {} {{}})"), U3()));
  auto r2 = realize_mem(S("{{}}"), S("{{{}},{}}"));
  REQUIRE(r2);
  CHECK(verify_uniform(*r2, F("(mem {{}} {{{}},{}})"), U3()));
  CHECK_FALSE(realize_mem(S("{}"), S("{}")));
  CHECK_FALSE(verify(mem_realizer(), F("(mem {} {})"), U3()));
  CHECK(realize_mem(S("#3"), S("#w")));
  CHECK(verify(mem_realizer(), F("(mem #3 #w)"), U3()));
}

TEST_CASE("nothing realises bottom") {
  CHECK_FALSE(verify(top_realizer("x"), F("(bot)"), U3()));
  CHECK_FALSE(verify(top_realizer("unit"), F("(bot)"), U3()));
}

TEST_CASE("the universal program") {
  auto r = phi_universal(F("(eq {} {})"));
  REQUIRE(r);
  CHECK(verify(*r, F("(eq {} {})"), U3()));

  Formula ex = F("(ex (x1) (eq x1 {{}}))");
  auto w = phi_universal(ex);
  REQUIRE(w);
  CHECK(verify_uniform(*w, ex, U3()));
  Witness got = extract_witness(*w, ex);
  CHECK(got.values == std::vector<HFSet>{S("{{}}")});
  CHECK(decode_set(got.code) == S("{{}}"));

  CHECK_FALSE(phi_universal(F("(mem {} {})")));
  CHECK(kind_of([] { phi_universal(F("(all (x1) (ex (x2) (mem x1 x2)))")); }) == "not-in-fragment");
  CHECK(kind_of([] { phi_universal(F("(mem x1 {})")); }) == "unbound-variable");

  Assignment a{{1, S("{{}}")}};
  auto open = phi_universal(F("(ex (x2) (mem x2 x1))"), a);
  REQUIRE(open);
  CHECK(verify(*open, F("(ex (x2) (mem x2 {{}}))"), U3()));
}

TEST_CASE("implications") {
  Formula vac = F("(imp (mem {} {}) (bot))");
  auto r = phi_universal(vac);
  REQUIRE(r);
  CHECK(verify_uniform(*r, vac, U3()));
  CHECK_FALSE(phi_universal(F("(imp (eq {} {}) (bot))")));
  // The identity maps every realiser of the antecedent to itself.
  CHECK(verify(top_realizer("x"), F("(imp (mem {} {{}}) (mem {} {{}}))"), U3()));
  CHECK_FALSE(verify(top_realizer("x"), F("(imp (mem {} {{}}) (eq {} {}))"), U3()));
}

TEST_CASE("bounded universal over sequences") {
  Formula f = F("(all (x1) (imp (mem x1 {{},{{}}}) (or (eq x1 {}) (mem {} x1))))");
  auto r = phi_universal(f);
  REQUIRE(r);
  CHECK(verify_uniform(*r, f, U3()));
}

TEST_CASE("Phi agrees with truth on generated sentences") {
  std::mt19937_64 rng(7);
  CorpusOptions o;
  o.depth = 2;
  o.rank = 3;
  int trues = 0, falses = 0;
  for (int i = 0; i < 40; ++i) {
    Formula s = i % 2 ? random_sigma1(rng, o) : random_delta0(rng, o);
    CAPTURE(s.to_string());
    bool truth = sentence_truth(s);
    auto r = phi_universal(s);
    CHECK(r.has_value() == truth);
    if (!r) {
      ++falses;
      continue;
    }
    ++trues;
    CodeUniverse u = CodeUniverse::for_formula(s, 3);
    CHECK(verify(*r, s, u));
    if (is_delta0(classify(s))) CHECK(verify_uniform(*r, s, u));
  }
  CHECK(trues > 5);
  CHECK(falses > 5);
}

TEST_CASE("choosing by node order is not uniform") {
  // A realiser that answers with the first element node it sees.
  Formula f = F("(all (x1) (imp (mem x1 {{{},{{}}}}) (ex (x2) (mem x2 x1))))");
  Value first = top_realizer("(lam u (lam z (pair (prim nth (prim elements x) 0) P)))", mem_realizer());
  CodeUniverse u = CodeUniverse::for_formula(f, 3);
  CHECK(verify(first, f, u));
  CHECK_FALSE(verify_uniform(first, f, u));
  // Outside the fragment, but true: the pointwise construction still applies.
  CHECK(kind_of([&] { phi_universal(f); }) == "not-in-fragment");
  CHECK(verify_uniform(synthesize(f), f, u));
}

TEST_CASE("disjunction and existence extraction") {
  Formula d = F("(or (eq {} {}) (bot))");
  auto r = phi_universal(d);
  REQUIRE(r);
  Extracted e = extract_disjunct(*r, d);
  CHECK(e.index == 0);
  CHECK(verify(e.inner, e.branch, U3()));

  Formula d2 = F("(or (bot) (eq {} {}))");
  Value right = top_realizer("P", Value::pair(Value::ord(Ordinal(1)), eq_realizer()));
  REQUIRE(verify(right, d2, U3()));
  Extracted e2 = extract_disjunct(right, d2);
  CHECK(e2.index == 1);
  CHECK(verify(e2.inner, e2.branch, U3()));

  CHECK(kind_of([&] { extract_disjunct(top_realizer("P", Value::pair(Value::ord(Ordinal(5)), Value())), d2); }) ==
        "stuck-term");

  Formula ex = F("(ex (x1 x2) (and (mem x1 x2) (mem x2 {{{}}})))");
  auto w = phi_universal(ex);
  REQUIRE(w);
  CHECK(verify(*w, ex, U3()));
  Witness got = extract_witness(*w, ex);
  CHECK(got.values == std::vector<HFSet>{S("{}"), S("{{}}")});
  CHECK(verify(got.inner, got.instance, U3()));
}

TEST_CASE("out of fuel is not a refusal") {
  Value loop = top_realizer("(app (real (app x x) unit) (real (app x x) unit))");
  CodeUniverse tight({HFSet()}, 0, 1000);
  CHECK(kind_of([&] { verify(loop, F("(eq {} {})"), tight); }) == "out-of-fuel");
}
