#include "doctest.h"
#include "otmr/error.hpp"
#include "otmr/soundness.hpp"

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

CodeUniverse U(const Formula& f) { return CodeUniverse::for_formula(f, 3); }

}  // namespace

TEST_CASE("identity and cut on fixed sequents") {
  RuleData d;
  d.ctx = {0};
  Formula phi = F("(mem x0 {{},{{}}})");
  Value id = sequent_combinator("identity", {}, d);
  Formula goal = sequent(d.ctx, phi, phi);
  CHECK(verify_uniform(id, goal, U(goal)));

  Formula psi = F("(or (eq x0 {}) (eq x0 {{}}))");
  Formula theta = F("(or (eq x0 {{}}) (mem {} {{}}))");
  Value r = synthesize(sequent(d.ctx, phi, psi));
  Value s = synthesize(sequent(d.ctx, psi, theta));
  Value t = sequent_combinator("cut", {r, s}, d);
  Formula cut = sequent(d.ctx, phi, theta);
  CHECK(verify(t, cut, U(cut)));
  // The cut realiser does not silently accept a stronger conclusion.
  CHECK_FALSE(verify(t, sequent(d.ctx, phi, F("(eq x0 {{}})")), U(cut)));
}

TEST_CASE("rule errors") {
  CHECK(kind_of([] { sequent_combinator("modus-tollens", {}, RuleData{}); }) == "unknown-rule");
  CHECK(kind_of([] { sequent_combinator("cut", {top_realizer("x")}, RuleData{}); }) == "arity-mismatch");
  RuleData d;
  d.count = 2;
  CHECK(kind_of([&] { sequent_combinator("conj-intro", {top_realizer("x")}, d); }) == "arity-mismatch");
  CHECK(kind_of([] { sequent_combinator("exists-left", {top_realizer("x")}, RuleData{}); }) == "arity-mismatch");
}

TEST_CASE("every rule is sound on generated instances") {
  uint64_t seed = 11;
  for (const std::string& rule : rule_ids()) {
    RuleReport r = check_rule(rule, 5, seed++);
    CAPTURE(rule);
    CAPTURE(r.failures.empty() ? std::string() : r.failures.front());
    CHECK(r.instances == 5);
    CHECK(r.accepted == r.instances);
  }
}

TEST_CASE("small distributivity on a closed conjunction") {
  Formula conj = F("(and (or (bot) (eq {} {})) (or (mem {} {}) (mem {} {{}})))");
  Value u = synthesize(conj);
  RuleData d;
  d.count = 2;
  Value r = sequent_combinator("small-distributivity", {u}, d);
  Formula goal = F("(or (bot) (and (eq {} {}) (mem {} {{}})))");
  CHECK(verify(r, goal, U(goal)));
  Extracted e = extract_disjunct(r, goal);
  CHECK(e.index == 1);

  Formula left = F("(and (or (eq {} {}) (bot)) (or (eq {} {}) (mem {} {})))");
  Value r2 = sequent_combinator("small-distributivity", {synthesize(left)}, d);
  CHECK(extract_disjunct(r2, F("(or (eq {} {}) (and (bot) (mem {} {})))")).index == 0);
}

TEST_CASE("walking through a full binary tree") {
  WalkingFixture w = walking_fixture(3);
  for (const auto& [f, r] : w.premises) CHECK(verify(r, walking_premise(w.tree, w.phi, f), U(w.conclusion)));
  Value r = walking(w.tree, w.premises);
  CHECK(verify(r, w.conclusion, U(w.conclusion)));
  Value root = interpret(r, synthesize(bar_conjunction(w.tree, w.phi)), kDefaultFuel);
  CHECK(verify(root, w.phi.at({}), U(w.conclusion)));
}

TEST_CASE("walking a single branch is one premise application") {
  TreeSpec t{1, 1, {{0}}};
  std::map<TreeNode, Formula> phi{{{}, F("(or (eq {} {}) (bot))")}, {{0}, F("(eq {} {})")}};
  Value r1 = synthesize(walking_premise(t, phi, {}));
  Value r = walking(t, {{{}, r1}});
  Formula goal = Formula::implies(bar_conjunction(t, phi), phi.at({}));
  CHECK(verify(r, goal, U(goal)));
  Value u = synthesize(bar_conjunction(t, phi));
  Value via_walk = interpret(r, u, kDefaultFuel);
  Value leaf = interpret(interpret(u, Value::ord(Ordinal(0)), 1000), Value::ord(Ordinal(0)), 1000).snd();
  Value direct = interpret(r1, top_realizer("(prim nth P x)", Value::list({leaf})), 1000);
  CHECK(via_walk.to_string() == direct.to_string());
}

TEST_CASE("a bar that misses a branch") {
  TreeSpec t{2, 1, {{0}}};
  CHECK(kind_of([&] { walking(t, {{{}, top_realizer("x")}}); }) == "bar-not-covering");
  CHECK(kind_of([&] { check_bar(TreeSpec{2, 2, {{0}, {1, 0}}}); }) == "bar-not-covering");
  CHECK_NOTHROW(check_bar(TreeSpec{2, 2, {{0}, {1, 0}, {1, 1}}}));
}

TEST_CASE("retracting through a limit node") {
  // φ_f at an w-length node f is "∅ ∈ {∅}"; the premise maps it to the
  // disjunction over the w many restrictions f|α, whose formulas are given
  // by a generator: false at every even α, true at every odd one.
  Formula phi_f = F("(mem {} {{}})");
  Formula limit = Formula::disj_omega({}, {F("(bot)"), F("(mem {} {{}})")});
  Formula premise = Formula::implies(phi_f, limit);
  Value r2 = synthesize(premise);
  REQUIRE(verify(r2, premise, U(premise)));
  auto [alpha, inner] = retract_limit(r2, synthesize(phi_f), limit);
  CHECK(alpha == 1);
  CHECK(verify(inner, limit.part(alpha), U(premise)));
}

TEST_CASE("transfinite transitivity walks forward to the bar") {
  TransitFixture t = transit_fixture(5);
  for (const auto& [f, r] : t.premises) {
    Formula p = transit_premise(t.tree, t.phi, t.vars, f);
    CHECK(verify(r, p, U(p)));
  }
  Value r = transfinite_transitivity(t.tree, t.premises);
  CHECK(verify(r, t.conclusion, U(t.conclusion)));
  Value out = interpret(r, synthesize(t.root), kDefaultFuel);
  Formula disj = transit_conclusion(t.tree, t.phi, t.vars);
  Extracted e = extract_disjunct(out, disj);
  CHECK(verify(e.inner, e.branch, U(t.conclusion)));
  Witness w = extract_witness(e.inner, e.branch);
  CHECK(w.values.size() == 2);
  CHECK(sentence_truth(w.instance));
}

TEST_CASE("transfinite transitivity on a single branch and at the root") {
  TreeSpec line{1, 1, {{0}}};
  std::map<TreeNode, Formula> phi{{{}, F("(eq {} {})")}, {{0}, F("(mem x1 {{}})")}};
  std::map<TreeNode, uint32_t> vars{{{0}, 1}};
  Value p = synthesize(transit_premise(line, phi, vars, {}));
  Value r = transfinite_transitivity(line, {{{}, p}});
  Formula goal = Formula::implies(phi.at({}), transit_conclusion(line, phi, vars));
  CHECK(verify(r, goal, U(goal)));
  Witness w = extract_witness(extract_disjunct(interpret(r, eq_realizer(), 1000), transit_conclusion(line, phi, vars)).inner,
                              transit_conclusion(line, phi, vars).part(0));
  CHECK(w.values == std::vector<HFSet>{HFSet()});

  // With the root in the bar the walk stops at once: (0, s) for the input s.
  TreeSpec root{2, 1, {{}}};
  Value at_root = transfinite_transitivity(root, {});
  Formula g2 = Formula::implies(phi.at({}), transit_conclusion(root, phi, {}));
  CHECK(g2 == F("(imp (eq {} {}) (or (eq {} {})))"));
  CHECK(verify_uniform(at_root, g2, U(g2)));
  Value out = interpret(at_root, eq_realizer(), 1000);
  CHECK(interpret(out, Value::ord(Ordinal(0)), 100).snd() == eq_realizer());
}
