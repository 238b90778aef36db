#include "otmr/soundness.hpp"

#include <set>

#include "otmr/corpus.hpp"
#include "otmr/error.hpp"

namespace otmr {

namespace {

// Variables: x̄ draws from 0.., ȳ from 4.., bound variables start at 10.
constexpr uint32_t kInner = 4;
constexpr uint32_t kBound = 10;

bool holds(const Formula& s) {
  try {
    return sentence_truth(s);
  } catch (const Error& e) {
    if (e.kind() == "not-decidable") return false;
    throw;
  }
}

class Draw {
 public:
  explicit Draw(std::mt19937_64& rng) : rng_(rng) {
    o_.rank = 3;
    o_.seq_bound = 0;
    o_.omega = 0.03;
  }

  Formula f(const std::vector<uint32_t>& vars) {
    o_.depth = 1 + static_cast<int>(rng_() % 2);
    return random_open_delta0(rng_, o_, vars, kBound);
  }
  size_t pick(size_t n) { return rng_() % n; }

  // A ψ over psi_vars with φ ⊢ctx ψ true; falls back to φ ∨ χ.
  Formula consequent(const Context& ctx, const Formula& phi, const std::vector<uint32_t>& psi_vars) {
    for (int k = 0; k < 12; ++k) {
      Formula psi = f(psi_vars);
      if (holds(sequent(ctx, phi, psi))) return psi;
    }
    return Formula::disj({phi, f(psi_vars)});
  }

  Context ctx() {
    Context c;
    for (size_t n = pick(3); n > 0; --n) c.push_back(static_cast<uint32_t>(c.size()));
    return c;
  }

 private:
  std::mt19937_64& rng_;
  CorpusOptions o_;
};

std::vector<uint32_t> join(const Context& a, const Context& b) {
  std::vector<uint32_t> out = a;
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

struct Plan {
  std::vector<Formula> premises;
  RuleData data;
  Formula conclusion;
};

Plan plan(const std::string& rule, Draw& g) {
  Plan p;
  RuleData& d = p.data;
  d.ctx = g.ctx();
  const Context& x = d.ctx;
  if (rule == "identity") {
    Formula phi = g.f(x);
    p.conclusion = sequent(x, phi, phi);
  } else if (rule == "substitution") {
    d.from = {kInner, kInner + 1};
    Formula phi = g.f(d.from);
    Formula psi = g.consequent(d.from, phi, d.from);
    p.premises = {sequent(d.from, phi, psi)};
    for (size_t i = 0; i < d.from.size(); ++i) {
      if (!x.empty() && g.pick(3) != 0)
        d.terms.push_back(Term::v(x[g.pick(x.size())]));
      else
        d.terms.push_back(Term::c(cumulative_level(3)[g.pick(4)]));
    }
    p.conclusion = sequent(x, substitute_terms(phi, d.from, d.terms), substitute_terms(psi, d.from, d.terms));
  } else if (rule == "cut") {
    Formula phi = g.f(x);
    Formula psi = g.consequent(x, phi, x);
    Formula theta = g.consequent(x, psi, x);
    p.premises = {sequent(x, phi, psi), sequent(x, psi, theta)};
    p.conclusion = sequent(x, phi, theta);
  } else if (rule == "equality-refl") {
    if (d.ctx.empty()) d.ctx = {0};
    uint32_t v = d.ctx[g.pick(d.ctx.size())];
    p.conclusion = sequent(d.ctx, Formula::top(), Formula::eq(Term::v(v), Term::v(v)));
  } else if (rule == "equality-subst") {
    d.ctx = {0, 1};
    const uint32_t z = kInner;
    Formula phi = g.f({z, 0});
    Formula at_x = substitute_terms(phi, {z}, {Term::v(0)});
    Formula at_y = substitute_terms(phi, {z}, {Term::v(1)});
    p.conclusion = sequent(d.ctx, Formula::conj({Formula::eq(Term::v(0), Term::v(1)), at_x}), at_y);
  } else if (rule == "conj-elim" || rule == "disj-intro") {
    std::vector<Formula> parts;
    for (size_t n = 2 + g.pick(2); n > 0; --n) parts.push_back(g.f(x));
    d.index = g.pick(parts.size());
    p.conclusion = rule == "conj-elim" ? sequent(x, Formula::conj(parts), parts[d.index])
                                       : sequent(x, parts[d.index], Formula::disj(parts));
  } else if (rule == "conj-intro") {
    Formula theta = g.f(x);
    std::vector<Formula> parts;
    for (size_t n = 2 + g.pick(2); n > 0; --n) {
      parts.push_back(g.consequent(x, theta, x));
      p.premises.push_back(sequent(x, theta, parts.back()));
    }
    d.count = parts.size();
    p.conclusion = sequent(x, theta, Formula::conj(parts));
  } else if (rule == "disj-elim") {
    std::vector<Formula> parts;
    for (size_t n = 2 + g.pick(2); n > 0; --n) parts.push_back(g.f(x));
    Formula theta = g.consequent(x, Formula::disj(parts), x);
    for (const Formula& f : parts) p.premises.push_back(sequent(x, f, theta));
    d.count = parts.size();
    p.conclusion = sequent(x, Formula::disj(parts), theta);
  } else if (rule == "imp-intro" || rule == "imp-elim") {
    Formula phi = g.f(x), psi = g.f(x);
    Formula theta = g.consequent(x, Formula::conj({phi, psi}), x);
    Formula both = sequent(x, Formula::conj({phi, psi}), theta);
    Formula curried = sequent(x, phi, Formula::implies(psi, theta));
    p.premises = {rule == "imp-intro" ? both : curried};
    p.conclusion = rule == "imp-intro" ? curried : both;
  } else if (rule == "exists-left" || rule == "exists-left-inverse") {
    d.inner = {kInner};
    Context xy = join(x, d.inner);
    Formula psi = g.f(x);
    Formula phi = g.pick(2) ? Formula::conj({psi, g.f(xy)}) : g.f(xy);
    Formula open = sequent(xy, phi, psi);
    Formula closed = sequent(x, Formula::exists(d.inner, phi), psi);
    p.premises = {rule == "exists-left" ? open : closed};
    p.conclusion = rule == "exists-left" ? closed : open;
  } else if (rule == "forall-right" || rule == "forall-right-inverse") {
    d.inner = {kInner};
    Context xy = join(x, d.inner);
    Formula phi = g.f(x);
    Formula psi = g.consequent(xy, phi, xy);
    Formula open = sequent(xy, phi, psi);
    Formula closed = sequent(x, phi, Formula::forall(d.inner, psi));
    p.premises = {rule == "forall-right" ? open : closed};
    p.conclusion = rule == "forall-right" ? closed : open;
  } else if (rule == "small-distributivity") {
    Formula phi = g.f(x);
    std::vector<Formula> psis, ors;
    for (size_t n = 2 + g.pick(2); n > 0; --n) {
      psis.push_back(g.f(x));
      ors.push_back(Formula::disj({phi, psis.back()}));
    }
    d.count = psis.size();
    p.conclusion = sequent(x, Formula::conj(ors), Formula::disj({phi, Formula::conj(psis)}));
  } else {
    throw Error("unknown-rule", rule);
  }
  return p;
}

std::set<HFSet> all_constants(const RuleInstance& r) {
  std::set<HFSet> cs = constants(r.conclusion);
  for (const Formula& f : r.premise_formulas) {
    auto more = constants(f);
    cs.insert(more.begin(), more.end());
  }
  return cs;
}

}  // namespace

std::optional<RuleInstance> random_instance(const std::string& rule, std::mt19937_64& rng, int attempts) {
  Draw g(rng);
  for (int k = 0; k < attempts; ++k) {
    Plan p = plan(rule, g);
    bool ok = true;
    for (const Formula& f : p.premises) ok = ok && holds(f);
    if (!ok) continue;
    RuleInstance r{rule, p.premises, {}, p.conclusion, {}};
    for (const Formula& f : p.premises) r.premises.push_back(synthesize(f));
    r.realizer = sequent_combinator(rule, r.premises, p.data);
    return r;
  }
  return std::nullopt;
}

RuleReport check_rule(const std::string& rule, size_t count, uint64_t seed, unsigned rank) {
  RuleReport rep{rule, 0, 0, {}};
  std::mt19937_64 rng(seed);
  for (size_t tries = 0; rep.instances < count && tries < count * 20; ++tries) {
    auto inst = random_instance(rule, rng);
    if (!inst) continue;
    auto cs = all_constants(*inst);
    CodeUniverse u = CodeUniverse::level(rank, {cs.begin(), cs.end()});
    try {
      bool premises_ok = true;
      for (size_t i = 0; i < inst->premises.size() && premises_ok; ++i)
        premises_ok = verify(inst->premises[i], inst->premise_formulas[i], u);
      if (!premises_ok) continue;
      ++rep.instances;
      if (verify(inst->realizer, inst->conclusion, u))
        ++rep.accepted;
      else
        rep.failures.push_back(inst->conclusion.to_string());
    } catch (const Error& e) {
      ++rep.instances;
      rep.failures.push_back(inst->conclusion.to_string() + ": " + e.what());
    }
  }
  return rep;
}

WalkingFixture walking_fixture(uint64_t seed) {
  std::mt19937_64 rng(seed);
  Draw g(rng);
  while (true) {
    WalkingFixture w;
    w.tree = {2, 2, {{0, 0}, {0, 1}, {1, 0}, {1, 1}}};
    for (const TreeNode& f : w.tree.bar) w.phi[f] = g.f({});
    for (uint32_t j : {0u, 1u})
      w.phi[{j}] = g.consequent({}, Formula::conj({w.phi[{j, 0}], w.phi[{j, 1}]}), {});
    w.phi[{}] = g.consequent({}, Formula::conj({w.phi[{0}], w.phi[{1}]}), {});
    // Only a true bar conjunction makes the conclusion's check non-vacuous.
    Formula bar = bar_conjunction(w.tree, w.phi);
    if (!holds(bar)) continue;
    for (const TreeNode& f : inner_nodes(w.tree)) w.premises[f] = synthesize(walking_premise(w.tree, w.phi, f));
    w.conclusion = Formula::implies(bar, w.phi.at({}));
    return w;
  }
}

TransitFixture transit_fixture(uint64_t seed) {
  std::mt19937_64 rng(seed);
  Draw g(rng);
  TransitFixture t;
  t.tree = {2, 2, {{0, 0}, {0, 1}, {1, 0}, {1, 1}}};
  // One child of each inner node always has a witness: x_g equal to a
  // constant at depth 1, equal to its parent's variable at depth 2.
  uint32_t hit = static_cast<uint32_t>(g.pick(2));
  for (uint32_t j : {0u, 1u}) {
    t.vars[{j}] = 1;
    Formula own = g.f({1});
    t.phi[{j}] = j == hit ? Formula::disj({own, Formula::eq(Term::v(1), Term::c(cumulative_level(3)[g.pick(4)]))}) : own;
    uint32_t sure = static_cast<uint32_t>(g.pick(2));
    for (uint32_t k : {0u, 1u}) {
      t.vars[{j, k}] = 2;
      Formula leaf = g.f({1, 2});
      t.phi[{j, k}] = k == sure ? Formula::disj({leaf, Formula::eq(Term::v(2), Term::v(1))}) : leaf;
    }
  }
  do {
    t.root = g.f({});
  } while (!holds(t.root));
  t.phi[{}] = t.root;
  for (const TreeNode& f : inner_nodes(t.tree))
    t.premises[f] = synthesize(transit_premise(t.tree, t.phi, t.vars, f));
  t.conclusion = Formula::implies(t.root, transit_conclusion(t.tree, t.phi, t.vars));
  return t;
}

}  // namespace otmr
