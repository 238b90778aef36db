#include <cstdio>
#include <fstream>
#include <random>

#include "doctest.h"
#include "otmr/corpus.hpp"
#include "otmr/error.hpp"
#include "otmr/glued.hpp"

using namespace otmr;

namespace {

Formula F(const char* t) { return Formula::parse(t); }

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

TEST_CASE("oracle answers") {
  ProvabilityOracle o;
  CHECK(o.proves(F("(eq {} {})")) == Verdict::Yes);
  CHECK(o.proves(F("(mem {} {})")) == Verdict::No);
  CHECK(o.proves(F("(ex (x1) (mem x1 {{}}))")) == Verdict::Yes);
  CHECK(o.proves(F("(and (eq {} {}) (mem {} {}))")) == Verdict::No);
  Formula pi1 = F("(all (x1) (mem x1 {}))");
  CHECK(o.proves(pi1) == Verdict::Unknown);
  CHECK(o.proves(F("(imp (all (x1) (mem x1 {})) (all (x1) (mem x1 {})))")) == Verdict::Yes);
  CHECK(o.proves(F("(all (x1) (imp (and (mem x1 {{}}) (eq x1 x1)) (mem x1 {{}})))")) == Verdict::Yes);
  CHECK(o.proves(F("(imp (all (x1) (mem x1 {})) (bot))")) == Verdict::Unknown);
  o.add(F("(imp (all (x1) (mem x1 {})) (bot))"));
  CHECK(o.proves(F("(imp (all (x1) (mem x1 {})) (bot))")) == Verdict::Yes);
  CHECK(o.proves(F("(or (bot) (imp (all (x1) (mem x1 {})) (bot)))")) == Verdict::Yes);
}

TEST_CASE("oracle files") {
  std::string path = "oracle_fixture.txt";
  {
    std::ofstream out(path);
    out << "; comments and blank lines are skipped\n\n(imp (all (x1) (mem x1 {})) (bot))\n";
  }
  ProvabilityOracle o = ProvabilityOracle::load(path);
  CHECK(o.size() == 1);
  {
    std::ofstream out(path);
    out << "(eq {} {})\n(mem {}\n";
  }
  try {
    ProvabilityOracle::load(path);
    FAIL("expected a parse error");
  } catch (const Error& e) {
    CHECK(e.kind() == "parse-error");
    CHECK(std::string(e.what()).find(":2:") != std::string::npos);
  }
  std::remove(path.c_str());
  CHECK(kind_of([] { ProvabilityOracle::load("/nonexistent/oracle"); }) == "io-error");
}

TEST_CASE("glued verification") {
  ProvabilityOracle o({F("(eq {} {})")});
  CHECK(verify_glued(eq_realizer(), F("(eq {} {})"), o, U3()) == Verdict::Yes);

  // An implication the oracle cannot derive is never glued-realised.
  Formula imp = F("(imp (all (x1) (mem x1 {})) (bot))");
  Value r = synthesize(imp);
  REQUIRE(verify(r, imp, U3()));
  CHECK(verify_glued(r, imp, o, U3()) == Verdict::Unknown);
  o.add(imp);
  CHECK(verify_glued(r, imp, o, U3()) == Verdict::Yes);

  Formula derivable = F("(imp (mem {} {{}}) (mem {} {{}}))");
  CHECK(verify_glued(top_realizer("x"), derivable, ProvabilityOracle(), U3()) == Verdict::Yes);
  CHECK(kind_of([] { verify_glued(eq_realizer(), F("(orw () ((eq {} {})))"), ProvabilityOracle(), U3()); }) ==
        "not-finitary");
}

TEST_CASE("disjunction property extraction") {
  ProvabilityOracle o;
  Formula d = F("(or (eq {} {}) (bot))");
  Extracted e = dp_extract(synthesize(d), d, o, U3());
  CHECK(e.index == 0);
  CHECK(verify_glued(e.inner, e.branch, o, U3()) == Verdict::Yes);

  Formula d2 = F("(or (bot) (all (x1) (imp (mem x1 {{}}) (mem x1 {{}}))))");
  Value right = top_realizer("P", Value::pair(Value::ord(Ordinal(1)), top_realizer("(lam u u)")));
  Extracted e2 = dp_extract(right, d2, o, U3());
  CHECK(e2.index == 1);
  CHECK(verify_glued(e2.inner, e2.branch, o, U3()) == Verdict::Yes);

  Formula d3 = F("(or (bot) (imp (all (x1) (mem x1 {})) (bot)))");
  CHECK(kind_of([&] { dp_extract(synthesize(d3), d3, o, U3()); }) == "not-realised");
}

TEST_CASE("glued realisability implies plain realisability") {
  std::mt19937_64 rng(3);
  CorpusOptions opt;
  opt.depth = 2;
  opt.rank = 3;
  opt.omega = 0;  // glued verification is finitary
  ProvabilityOracle o;
  int glued = 0;
  for (int i = 0; i < 60; ++i) {
    Formula s = i % 3 ? random_delta0(rng, opt) : random_sigma1(rng, opt);
    if (!sentence_truth(s)) continue;
    Formula wrapped = Formula::implies(F("(eq {} {})"), s);
    CodeUniverse u = CodeUniverse::for_formula(s, 3);
    for (const Value& r : {synthesize(wrapped), top_realizer("x")}) {
      Verdict g = verify_glued(r, wrapped, o, u);
      if (g == Verdict::Yes) {
        ++glued;
        CHECK(verify(r, wrapped, u));
      }
    }
  }
  CHECK(glued > 5);
}
