#include <random>

#include "doctest.h"
#include "otmr/error.hpp"
#include "otmr/formula.hpp"

using namespace otmr;

namespace {

Formula P(const char* t) { return Formula::parse(t); }
Term V(uint32_t i) { return Term::v(i); }
Term C(const char* t) { return Term::c(HFSet::parse(t)); }

bool kind_is(const std::function<void()>& f, const std::string& kind) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind() == kind;
  }
  return false;
}

// Random formulas over x0..x3 and small constants, every connective and
// quantifier form included.
Formula random_formula(std::mt19937_64& rng, int depth) {
  static const char* consts[] = {"{}", "{{}}", "{{{}}}", "{{},{{}}}", "#w"};
  auto term = [&]() { return rng() % 2 ? V(rng() % 4) : C(consts[rng() % 5]); };
  if (depth == 0 || rng() % 5 == 0) {
    switch (rng() % 3) {
      case 0: return Formula::mem(term(), term());
      case 1: return Formula::eq(term(), term());
      default: return Formula::bottom();
    }
  }
  auto sub = [&]() { return random_formula(rng, depth - 1); };
  auto some = [&]() {
    std::vector<Formula> ps;
    for (size_t k = rng() % 3; k > 0; --k) ps.push_back(sub());
    return ps;
  };
  switch (rng() % 10) {
    case 0: return Formula::implies(sub(), sub());
    case 1: return Formula::conj(some());
    case 2: return Formula::disj(some());
    case 3: return Formula::conj_omega(some(), {sub()});
    case 4: return Formula::disj_omega({sub()}, {sub(), sub()});
    case 5: return Formula::exists({static_cast<uint32_t>(rng() % 4)}, sub());
    case 6: return Formula::forall({static_cast<uint32_t>(rng() % 4)}, sub());
    case 7: return make_bounded_forall({static_cast<uint32_t>(rng() % 2)}, V(2 + rng() % 2), sub());
    case 8: return make_bounded_exists({0, 1}, rng() % 2 ? V(2) : C("{{}}"), sub());
    default: return Formula::neg(sub());
  }
}

}  // namespace

TEST_CASE("parse and print") {
  CHECK(P("(eq {} {})").to_string() == "(eq {} {})");
  CHECK(P("(ex (x0) (mem x0 x1))").to_string() == "(ex (x0) (mem x0 x1))");
  CHECK(P("(imp (mem x0 {}) (bot))").to_string() == "(not (mem x0 {}))");
  CHECK(P("(all (x0) (imp (mem x0 x1) (eq x0 x0)))").to_string() == "(allin (x0) x1 (eq x0 x0))");
  CHECK(P("(andw ((bot)) ((eq {} {})))").part(7) == P("(eq {} {})"));
  CHECK(P("(andw () ((bot)))").length() == Ordinal::omega());
  CHECK(P("(and)") == Formula::top());
  CHECK(kind_is([] { P("(mem x0)"); }, "parse-error"));
  CHECK(kind_is([] { P("(frob)"); }, "parse-error"));
  CHECK(kind_is([] { P("(ex (x0 x0) (bot))"); }, "parse-error"));
  CHECK(kind_is([] { P("(eq y {})"); }, "parse-error"));
}

TEST_CASE("round trip on a generated corpus") {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 1000; ++i) {
    Formula f = random_formula(rng, 5);
    std::string text = f.to_string();
    Formula g = Formula::parse(text);
    REQUIRE(g == f);
    CHECK(g.to_string() == text);
    CHECK(std::hash<Formula>{}(g) == std::hash<Formula>{}(f));
  }
}

TEST_CASE("free variables and substitution") {
  CHECK(free_vars(P("(mem x0 x1)")) == std::set<uint32_t>{0, 1});
  CHECK(free_vars(P("(ex (x0) (mem x0 x1))")) == std::set<uint32_t>{1});
  CHECK(substitute(P("(eq x0 x0)"), {0}, {HFSet()}) == P("(eq {} {})"));
  CHECK(substitute(P("(ex (x1) (mem x1 x0))"), {0}, {HFSet::parse("{{}}")}) == P("(ex (x1) (mem x1 {{}}))"));
  CHECK(substitute(P("(ex (x0) (mem x0 x0))"), {0}, {HFSet()}) == P("(ex (x0) (mem x0 x0))"));
  CHECK(substitute(P("(mem x0 x1)"), {0, 1}, {HFSet(), HFSet::parse("{{}}")}) == P("(mem {} {{}})"));
  CHECK(kind_is([] { substitute(P("(mem x0 x1)"), {0, 1}, {HFSet()}); }, "length-mismatch"));

  std::mt19937_64 rng(11);
  for (int i = 0; i < 300; ++i) {
    Formula f = random_formula(rng, 4);
    Context ctx{static_cast<uint32_t>(rng() % 4)};
    Formula g = substitute(f, ctx, {HFSet::parse("{{}}")});
    std::set<uint32_t> want = free_vars(f);
    want.erase(ctx[0]);
    CHECK(free_vars(g) == want);
    CHECK(classify(g) == classify(f));
  }
}

TEST_CASE("sequence membership expansion") {
  Formula one = expand_seq_membership({0}, V(1));
  CHECK(one.kind() == FKind::Exists);
  CHECK(one.ctx() == Context{2});
  CHECK(one.body().ctx() == Context{3});
  CHECK(one.body().body().ctx() == Context{4});
  CHECK(free_vars(one) == std::set<uint32_t>{0, 1});
  const Formula& matrix = one.body().body().body();
  CHECK(matrix.part(1).part(0).length() == Ordinal(0));
  CHECK(matrix.part(2) == Formula::mem(V(2), V(1)));

  Formula two = expand_seq_membership({0, 1}, V(5));
  CHECK(two.ctx() == Context{6});
  const Formula& m2 = two.body().body().body();
  CHECK(two.body().body().ctx().size() == 2);
  CHECK(m2.part(1).part(0).length() == Ordinal(1));
  const Formula& pair01 = m2.part(1).part(0).part(0);
  CHECK(pair01.part(0) == Formula::mem(V(8), V(9)));
  CHECK(classify(two) == FClass::Sigma1Inf);

  // Only the covering clause holds a universal outside a bounded form.
  int unbounded_universals = 0;
  std::function<void(const Formula&)> scan = [&](const Formula& f) {
    switch (f.kind()) {
      case FKind::Forall:
        if (!match_bounded(f)) ++unbounded_universals;
        scan(f.body());
        break;
      case FKind::Exists: scan(f.body()); break;
      case FKind::Implies: scan(f.ant()), scan(f.cons()); break;
      case FKind::Conj:
      case FKind::Disj:
        for (const Formula& p : f.distinct_parts()) scan(p);
        break;
      default: break;
    }
  };
  scan(two);
  CHECK(unbounded_universals == 0);

  auto m = match_seq_membership(two);
  REQUIRE(m.has_value());
  CHECK(m->xs == std::vector<Term>{V(0), V(1)});
  CHECK(m->y == V(5));
  Formula inst = substitute(two, {0, 5}, {HFSet(), HFSet::parse("{{}}")});
  auto mi = match_seq_membership(inst);
  REQUIRE(mi.has_value());
  CHECK(mi->xs == std::vector<Term>{C("{}"), V(1)});
  CHECK(Formula::parse(inst.to_string()) == inst);
  CHECK_FALSE(match_seq_membership(P("(ex (x0) (mem x0 x1))")).has_value());
}

TEST_CASE("bounded quantifiers and classification") {
  CHECK(make_bounded_forall({0}, V(1), P("(eq x0 x0)")) == P("(all (x0) (imp (mem x0 x1) (eq x0 x0)))"));
  CHECK(make_bounded_exists({0}, V(1), P("(eq x0 x0)")) == P("(ex (x0) (and (mem x0 x1) (eq x0 x0)))"));
  Formula b2 = make_bounded_forall({0, 1}, V(2), P("(eq x0 x1)"));
  CHECK(b2.body().ant() == expand_seq_membership({0, 1}, V(2)));
  auto mb = match_bounded(b2);
  REQUIRE(mb.has_value());
  CHECK(mb->universal);
  CHECK(mb->bound == V(2));
  CHECK(b2.to_string() == "(allin (x0 x1) x2 (eq x0 x1))");
  Formula b2i = substitute(b2, {2}, {HFSet::parse("{{}}")});
  CHECK(b2i.to_string() == "(allin (x0 x1) {{}} (eq x0 x1) 3)");
  CHECK(Formula::parse(b2i.to_string()) == b2i);

  CHECK(classify(P("(eq {} {})")) == FClass::Delta0Omega);
  CHECK(classify(P("(ex (x0) (eq x0 {}))")) == FClass::Sigma1Omega);
  CHECK(classify(P("(all (x0) (eq x0 x0))")) == FClass::General);
  CHECK(classify(P("(allin (x0) {{}} (eq x0 {}))")) == FClass::Delta0Omega);
  CHECK(classify(b2) == FClass::Delta0Inf);
  CHECK(classify(P("(andw () ((eq {} {})))")) == FClass::Delta0Inf);
  CHECK(classify(P("(ex (x0 x1) (eq x0 x1))")) == FClass::Sigma1Inf);
  CHECK(classify(P("(ex (x0) (ex (x1) (mem x0 x1)))")) == FClass::Sigma1Omega);
  CHECK(classify(P("(ex (x0) (all (x1) (mem x0 x1)))")) == FClass::General);
  CHECK(classify(P("(not (ex (x0) (eq x0 x0)))")) == FClass::General);
  CHECK(classify(underline_forall_fixture(0, V(1), P("(eq x0 x0)"))) == FClass::General);
  CHECK_FALSE(match_bounded(underline_forall_fixture(0, V(1), P("(eq x0 x0)"))).has_value());
}
