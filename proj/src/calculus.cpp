#include "otmr/calculus.hpp"

#include <algorithm>
#include <set>

#include "otmr/error.hpp"
#include "otmr/realize.hpp"
#include "otmr/truth.hpp"

namespace otmr {

Formula sequent(const Context& ctx, const Formula& phi, const Formula& psi) {
  Formula f = Formula::implies(phi, psi);
  return ctx.empty() ? f : Formula::forall(ctx, f);
}

// ---------------------------------------------------------------------------
// Sequent rules

namespace {

std::string num(uint64_t n) { return std::to_string(n); }

// Program text for a sequent realiser. Inside BODY, `a` is the context code
// and `u` the antecedent realiser.
std::string wrap(bool has_ctx, const std::string& body) {
  return has_ctx ? "(let a x (lam u " + body + "))" : "(let u x " + body + ")";
}

// Premise i applied to a context code and an antecedent realiser.
std::string prem(const std::string& i, bool has_ctx, const std::string& a, const std::string& u) {
  std::string r = "(prim nth P " + i + ")";
  return has_ctx ? "(app " + r + " " + a + " " + u + ")" : "(app " + r + " " + u + ")";
}

void need(const std::string& rule, const std::vector<Value>& premises, size_t n) {
  if (premises.size() != n)
    throw Error("arity-mismatch",
                rule + " takes " + num(n) + " premises, got " + num(premises.size()));
}

Value build(const std::string& body, bool has_ctx, std::vector<Value> param) {
  return top_realizer(wrap(has_ctx, body), Value::list(std::move(param)));
}

}  // namespace

const std::vector<std::string>& rule_ids() {
  static const std::vector<std::string> ids = {
      "identity",      "substitution", "cut",         "equality-refl",       "equality-subst",
      "conj-elim",     "conj-intro",   "disj-intro",  "disj-elim",           "imp-intro",
      "imp-elim",      "exists-left",  "exists-left-inverse", "forall-right", "forall-right-inverse",
      "small-distributivity"};
  return ids;
}

Value sequent_combinator(const std::string& rule, const std::vector<Value>& premises, const RuleData& d) {
  const bool c = !d.ctx.empty();
  const uint64_t lx = d.ctx.size(), ly = d.inner.size();
  const std::string A = c ? "a" : "unit";
  const std::vector<Value>& ps = premises;
  if (rule == "identity") {
    need(rule, ps, 0);
    return build("u", c, {});
  }
  if (rule == "substitution") {
    need(rule, ps, 1);
    if (d.terms.size() != d.from.size())
      throw Error("arity-mismatch", "substitution needs one term per premise variable");
    std::vector<Value> spec;
    for (const Term& t : d.terms) {
      if (!t.is_var) {
        spec.push_back(Value::pair(Value::ord(Ordinal(1)), Value::code(canonical_code(t.value))));
        continue;
      }
      auto it = std::find(d.ctx.begin(), d.ctx.end(), t.var);
      if (it == d.ctx.end()) throw Error("arity-mismatch", "x" + num(t.var) + " is not in the conclusion context");
      spec.push_back(Value::pair(Value::ord(Ordinal(0)), Value::ord(Ordinal(it - d.ctx.begin()))));
    }
    std::string inner = "(prim reorder " + A + " " + num(lx) + " (prim nth P 1))";
    return build(prem("0", !d.from.empty(), inner, "u"), c, {ps[0], Value::list(spec)});
  }
  if (rule == "cut") {
    need(rule, ps, 2);
    return build(prem("1", c, "a", prem("0", c, "a", "u")), c, ps);
  }
  if (rule == "equality-refl") {
    need(rule, ps, 0);
    return build("(prim nth P 0)", c, {eq_realizer()});
  }
  if (rule == "equality-subst") {
    need(rule, ps, 0);
    return build("(app u 1)", c, {});
  }
  if (rule == "conj-elim") {
    need(rule, ps, 0);
    return build("(app u " + num(d.index) + ")", c, {});
  }
  if (rule == "conj-intro") {
    need(rule, ps, d.count);
    return build("(lam i " + prem("i", c, "a", "u") + ")", c, ps);
  }
  if (rule == "disj-intro") {
    need(rule, ps, 0);
    return build("(lam z (pair " + num(d.index) + " u))", c, {});
  }
  if (rule == "disj-elim") {
    need(rule, ps, d.count);
    return build("(let p (app u 0) " + prem("(fst p)", c, "a", "(snd p)") + ")", c, ps);
  }
  if (rule == "imp-intro") {
    need(rule, ps, 1);
    return build("(lam v " + prem("0", c, "a", "(lam i (if i v u))") + ")", c, ps);
  }
  if (rule == "imp-elim") {
    need(rule, ps, 1);
    std::string r = c ? "(app (prim nth P 0) a (app u 0) (app u 1))" : "(app (prim nth P 0) (app u 0) (app u 1))";
    return build(r, c, ps);
  }
  if (rule == "exists-left" || rule == "forall-right") {
    need(rule, ps, 1);
    if (ly == 0) throw Error("arity-mismatch", rule + " needs a nonempty inner context");
    if (rule == "exists-left") {
      std::string joined = "(prim join " + A + " " + num(lx) + " (fst p) " + num(ly) + ")";
      return build("(let p (app u 0) " + prem("0", true, joined, "(snd p)") + ")", c, ps);
    }
    std::string joined = "(prim join " + A + " " + num(lx) + " y " + num(ly) + ")";
    return build("(lam y " + prem("0", true, joined, "u") + ")", c, ps);
  }
  if (rule == "exists-left-inverse" || rule == "forall-right-inverse") {
    need(rule, ps, 1);
    if (ly == 0) throw Error("arity-mismatch", rule + " needs a nonempty inner context");
    // The conclusion context is x̄ȳ, so `a` always exists here.
    std::string xs = "(prim split a " + num(lx) + " " + num(ly) + " 0)";
    std::string ys = "(prim split a " + num(lx) + " " + num(ly) + " 1)";
    if (rule == "exists-left-inverse")
      return build(prem("0", c, xs, "(lam z (pair " + ys + " u))"), true, ps);
    return build("(app " + prem("0", c, xs, "u") + " " + ys + ")", true, ps);
  }
  if (rule == "small-distributivity") {
    std::string pick = "(app u i 0)";
    std::string body = "(lam z (first i (prim range " + num(d.count) + ") (prim is-zero (fst " + pick +
                       ")) (pair 0 (snd " + pick + ")) (pair 1 (lam j (snd (app u j 0))))))";
    if (ps.empty()) return build(body, c, {});
    need(rule, ps, 1);
    Value dist = build(body, false, {});
    return top_realizer("(app (fst P) (snd P) x)", Value::pair(dist, ps[0]));
  }
  throw Error("unknown-rule", rule);
}

// ---------------------------------------------------------------------------
// Trees

namespace {

bool is_prefix(const TreeNode& p, const TreeNode& f) {
  return p.size() <= f.size() && std::equal(p.begin(), p.end(), f.begin());
}

Value node_value(const TreeNode& f) {
  std::vector<Value> xs;
  for (uint32_t j : f) xs.push_back(Value::ord(Ordinal(j)));
  return Value::list(xs);
}

TreeNode node_of(const Value& v) {
  TreeNode f;
  for (const Value& x : v.items()) f.push_back(static_cast<uint32_t>(x.as_ord().to_finite()));
  return f;
}

TreeNode child(TreeNode f, uint32_t j) {
  f.push_back(j);
  return f;
}

TreeNode prefix(const TreeNode& f, size_t n) { return {f.begin(), f.begin() + n}; }

const Formula& phi_at(const std::map<TreeNode, Formula>& phi, const TreeNode& f) {
  auto it = phi.find(f);
  if (it == phi.end()) throw Error("arity-mismatch", "no formula for a tree node of length " + num(f.size()));
  return it->second;
}

// Tree data handed to the walking primitives: (depth, gamma, bar, premises).
Value tree_value(const TreeSpec& t, const std::map<TreeNode, Value>& premises) {
  std::vector<Value> bar, table;
  for (const TreeNode& f : t.bar) bar.push_back(node_value(f));
  for (const auto& [f, r] : premises) table.push_back(Value::pair(node_value(f), r));
  return Value::list({Value::ord(Ordinal(t.depth)), Value::ord(Ordinal(t.gamma)), Value::list(bar),
                      Value::list(table)});
}

struct DecodedTree {
  uint64_t depth, gamma;
  std::vector<TreeNode> bar;
  std::map<TreeNode, Value> premises;
};

DecodedTree decode_tree(const Value& v) {
  const auto& xs = v.items();
  DecodedTree d{xs.at(0).as_ord().to_finite(), xs.at(1).as_ord().to_finite(), {}, {}};
  for (const Value& f : xs.at(2).items()) d.bar.push_back(node_of(f));
  for (const Value& e : xs.at(3).items()) d.premises.emplace(node_of(e.fst()), e.snd());
  return d;
}

void check_premises(const TreeSpec& t, const std::map<TreeNode, Value>& premises) {
  for (const TreeNode& f : inner_nodes(t))
    if (!premises.count(f)) throw Error("arity-mismatch", "missing premise at an inner node of length " + num(f.size()));
}

}  // namespace

void check_bar(const TreeSpec& t) {
  if (t.gamma == 0) throw Error("bar-not-covering", "empty branching");
  std::vector<TreeNode> level{{}};
  for (uint32_t k = 0; k < t.depth; ++k) {
    std::vector<TreeNode> next;
    for (const TreeNode& f : level)
      for (uint32_t j = 0; j < t.gamma; ++j) next.push_back(child(f, j));
    level = std::move(next);
  }
  for (const TreeNode& f : level) {
    bool met = std::any_of(t.bar.begin(), t.bar.end(), [&](const TreeNode& b) { return is_prefix(b, f); });
    if (!met) throw Error("bar-not-covering", "a branch of length " + num(t.depth) + " misses the bar");
  }
}

std::vector<TreeNode> inner_nodes(const TreeSpec& t) {
  std::set<std::pair<size_t, TreeNode>> seen;
  for (const TreeNode& b : t.bar)
    for (size_t n = 0; n < b.size(); ++n) seen.insert({n, prefix(b, n)});
  std::vector<TreeNode> out;
  for (const auto& [n, f] : seen) out.push_back(f);
  return out;
}

Formula bar_conjunction(const TreeSpec& t, const std::map<TreeNode, Formula>& phi) {
  std::vector<Formula> parts;
  for (const TreeNode& f : t.bar) {
    std::vector<Formula> ds;
    for (size_t b = 0; b < f.size(); ++b) ds.push_back(phi_at(phi, prefix(f, b + 1)));
    parts.push_back(Formula::disj(ds));
  }
  return Formula::conj(parts);
}

Formula walking_premise(const TreeSpec& t, const std::map<TreeNode, Formula>& phi, const TreeNode& f) {
  std::vector<Formula> kids;
  for (uint32_t j = 0; j < t.gamma; ++j) kids.push_back(phi_at(phi, child(f, j)));
  return Formula::implies(Formula::conj(kids), phi_at(phi, f));
}

Value walking(const TreeSpec& t, const std::map<TreeNode, Value>& successor_premises) {
  check_bar(t);
  check_premises(t, successor_premises);
  return top_realizer("(prim walk P x)", tree_value(t, successor_premises));
}

Value walk_prim(Interp& in, const std::vector<Value>& args) {
  DecodedTree t = decode_tree(args[0]);
  const Value& u = args[1];
  std::map<TreeNode, Value> r;
  for (size_t k = 0; k < t.bar.size(); ++k) {
    Value p = in.apply(in.apply(u, Value::ord(Ordinal(k))), Value::ord(Ordinal(0)));
    uint64_t b = p.fst().as_ord().to_finite();
    if (b >= t.bar[k].size()) throw Error("stuck-term", "disjunct index out of range");
    r.emplace(prefix(t.bar[k], b + 1), p.snd());
  }
  static const RTerm pick = parse_rterm("(prim nth P x)");
  TreeNode f;
  while (!r.count({})) {
    in.tick();
    if (r.count(f)) {
      f.pop_back();
      continue;
    }
    if (f.size() >= t.depth) throw Error("bar-not-covering", "the walk left the tree without meeting the bar");
    std::vector<Value> kids;
    std::optional<TreeNode> open;
    for (uint32_t j = 0; j < t.gamma && !open; ++j) {
      auto it = r.find(child(f, j));
      if (it == r.end())
        open = child(f, j);
      else
        kids.push_back(it->second);
    }
    if (open) {
      f = *open;
      continue;
    }
    auto premise = t.premises.find(f);
    if (premise == t.premises.end()) throw Error("bar-not-covering", "no premise at a node above the bar");
    r.emplace(f, in.apply(premise->second, Value::realizer(pick, Value::list(kids))));
  }
  return r.at({});
}

std::pair<uint64_t, Value> retract_limit(const Value& r2, const Value& rf, const Formula& disjunction,
                                         uint64_t fuel) {
  Interp in(fuel);
  Value d = in.apply(r2, rf);
  Extracted e = extract_disjunct(d, disjunction, in.fuel_left());
  return {e.index, e.inner};
}

std::vector<uint32_t> path_vars(const std::map<TreeNode, uint32_t>& vars, const TreeNode& f) {
  std::vector<uint32_t> out;
  for (size_t n = 1; n <= f.size(); ++n) {
    auto it = vars.find(prefix(f, n));
    if (it == vars.end()) throw Error("arity-mismatch", "no variable for a tree node");
    out.push_back(it->second);
  }
  return out;
}

Formula transit_premise(const TreeSpec& t, const std::map<TreeNode, Formula>& phi,
                        const std::map<TreeNode, uint32_t>& vars, const TreeNode& f) {
  std::vector<Formula> ds;
  for (uint32_t j = 0; j < t.gamma; ++j) {
    TreeNode g = child(f, j);
    ds.push_back(Formula::exists({vars.at(g)}, phi_at(phi, g)));
  }
  return sequent(path_vars(vars, f), phi_at(phi, f), Formula::disj(ds));
}

Formula transit_conclusion(const TreeSpec& t, const std::map<TreeNode, Formula>& phi,
                           const std::map<TreeNode, uint32_t>& vars) {
  std::vector<Formula> ds;
  for (const TreeNode& f : t.bar) {
    if (f.empty()) {
      ds.push_back(phi_at(phi, f));
      continue;
    }
    std::vector<Formula> cs;
    for (size_t b = 0; b < f.size(); ++b) cs.push_back(phi_at(phi, prefix(f, b + 1)));
    ds.push_back(Formula::exists(path_vars(vars, f), Formula::conj(cs)));
  }
  return Formula::disj(ds);
}

Value transfinite_transitivity(const TreeSpec& t, const std::map<TreeNode, Value>& premises) {
  check_bar(t);
  check_premises(t, premises);
  return top_realizer("(prim transit P x)", tree_value(t, premises));
}

Value transit_prim(Interp& in, const std::vector<Value>& args) {
  DecodedTree t = decode_tree(args[0]);
  static const RTerm emit = parse_rterm("P");
  static const RTerm pick = parse_rterm("(prim nth P x)");
  auto bar_index = [&](const TreeNode& f) -> std::optional<size_t> {
    for (size_t k = 0; k < t.bar.size(); ++k)
      if (t.bar[k] == f) return k;
    return std::nullopt;
  };
  TreeNode f;
  Value cur = args[1];
  std::vector<Code> codes;
  std::vector<Value> along;
  while (true) {
    in.tick();
    if (auto k = bar_index(f)) {
      Value k_ord = Value::ord(Ordinal(*k));
      if (f.empty()) return Value::realizer(emit, Value::pair(k_ord, cur));
      Value conj = Value::realizer(pick, Value::list(along));
      Value ex = Value::realizer(emit, Value::pair(Value::code(context_code(codes)), conj));
      return Value::realizer(emit, Value::pair(k_ord, ex));
    }
    if (f.size() >= t.depth) throw Error("bar-not-covering", "the walk left the tree without meeting the bar");
    auto premise = t.premises.find(f);
    if (premise == t.premises.end()) throw Error("bar-not-covering", "no premise at a node above the bar");
    Value d = f.empty() ? in.apply(premise->second, cur)
                        : in.apply(in.apply(premise->second, Value::code(context_code(codes))), cur);
    Value p = in.apply(d, Value::ord(Ordinal(0)));
    uint64_t j = p.fst().as_ord().to_finite();
    if (j >= t.gamma) throw Error("stuck-term", "child index out of range");
    Value w = in.apply(p.snd(), Value::ord(Ordinal(0)));
    codes.push_back(w.fst().as_code());
    cur = w.snd();
    along.push_back(cur);
    f.push_back(static_cast<uint32_t>(j));
  }
}

}  // namespace otmr
