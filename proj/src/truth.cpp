#include "otmr/truth.hpp"

#include <algorithm>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "otmr/error.hpp"

namespace otmr {

const Code& canonical_code(const HFSet& x) {
  thread_local std::unordered_map<HFSet, Code> cache;
  auto it = cache.find(x);
  if (it != cache.end()) return it->second;
  return cache.emplace(x, build_code(x)).first->second;
}

namespace {

HFSet value_of(const Term& t, const Assignment& a) {
  if (!t.is_var) return t.value;
  auto it = a.find(t.var);
  if (it == a.end()) throw Error("unbound-variable", t.to_string());
  return it->second;
}

// Restores the previous binding of a variable on scope exit.
class Rebind {
 public:
  Rebind(Assignment& a, uint32_t v) : a_(a), v_(v) {
    auto it = a.find(v);
    if (it != a.end()) old_ = it->second;
  }
  ~Rebind() {
    if (old_) a_[v_] = *old_;
    else a_.erase(v_);
  }
  void set(const HFSet& x) { a_[v_] = x; }

 private:
  Assignment& a_;
  uint32_t v_;
  std::optional<HFSet> old_;
};

bool d0(const Formula& f, Assignment& a);

// Runs `body` for each element of the bound's code until it returns `stop`;
// returns whether it stopped.
bool over_elements(const Code& c, bool stop, const std::function<bool(const HFSet&)>& body) {
  if (c.pre->is_segment()) {
    const Ordinal& top = c.rho;
    uint64_t n = top.is_finite() ? top.finite_part() : kInfiniteSearchCap;
    for (uint64_t k = 0; k < n; ++k)
      if (body(HFSet::ordinal(Ordinal(k))) == stop) return true;
    if (!top.is_finite()) throw Error("not-decidable", "bounded search through an infinite set ran out");
    return false;
  }
  for (const Ordinal& node : element_nodes(c))
    if (body(c.pre->value(node)) == stop) return true;
  return false;
}

bool bounded(const Bounded& b, Assignment& a) {
  const Code& c = canonical_code(value_of(b.bound, a));
  // Universal: stop at a counterexample. Existential: stop at a witness.
  const bool stop = !b.universal;
  std::vector<std::unique_ptr<Rebind>> binds;
  for (uint32_t v : b.ctx) binds.push_back(std::make_unique<Rebind>(a, v));
  bool stopped = over_elements(c, stop, [&](const HFSet& y) {
    if (b.ctx.size() == 1) {
      binds[0]->set(y);
      return d0(b.matrix, a);
    }
    auto seq = as_seq(y);
    if (!seq || seq->size() != b.ctx.size()) return !stop;
    for (size_t i = 0; i < seq->size(); ++i) binds[i]->set((*seq)[i]);
    return d0(b.matrix, a);
  });
  return b.universal ? !stopped : stopped;
}

bool d0(const Formula& f, Assignment& a) {
  switch (f.kind()) {
    case FKind::Bottom:
      return false;
    case FKind::Mem:
    case FKind::Eq: {
      const Code& x = canonical_code(value_of(f.left(), a));
      const Code& y = canonical_code(value_of(f.right(), a));
      auto m = decode_match(x, y, x.rho);
      if (!m) return false;
      return f.kind() == FKind::Eq ? *m == y.rho : y.pre->has_edge(*m, y.rho);
    }
    case FKind::Implies:
      return !d0(f.ant(), a) || d0(f.cons(), a);
    case FKind::Conj:
      for (const Formula& p : f.distinct_parts())
        if (!d0(p, a)) return false;
      return true;
    case FKind::Disj:
      for (const Formula& p : f.distinct_parts())
        if (d0(p, a)) return true;
      return false;
    case FKind::Exists:
    case FKind::Forall: {
      auto b = match_bounded(f);
      if (!b) throw Error("not-delta0", f.to_string());
      return bounded(*b, a);
    }
  }
  return false;
}

void collect_guards(const Formula& f, const std::set<uint32_t>& pending, const std::set<uint32_t>& blocked,
                    std::map<uint32_t, std::vector<Term>>& out) {
  switch (f.kind()) {
    case FKind::Mem: {
      const Term& l = f.left();
      const Term& r = f.right();
      if (!l.is_var || !pending.count(l.var)) return;
      if (r.is_var && (blocked.count(r.var) || r.var == l.var)) return;
      out[l.var].push_back(r);
      return;
    }
    case FKind::Conj:
      if (f.is_omega()) return;
      for (const Formula& p : f.prefix()) collect_guards(p, pending, blocked, out);
      return;
    case FKind::Exists: {
      std::set<uint32_t> p2 = pending, b2 = blocked;
      for (uint32_t v : f.ctx()) p2.erase(v), b2.insert(v);
      collect_guards(f.body(), p2, b2, out);
      return;
    }
    default:
      return;
  }
}

bool search_rec(std::vector<uint32_t> remaining, const std::map<uint32_t, std::vector<Term>>& guards,
                const std::vector<HFSet>& universe, const std::unordered_set<HFSet>& uset, Assignment& a,
                const std::function<bool()>& visit) {
  if (remaining.empty()) return visit();
  auto ready = [&](const Term& t) {
    return !t.is_var || (a.count(t.var) && std::find(remaining.begin(), remaining.end(), t.var) == remaining.end());
  };
  size_t pick = 0;
  std::optional<HFSet> bound;
  for (size_t i = 0; i < remaining.size() && !bound; ++i) {
    auto it = guards.find(remaining[i]);
    if (it == guards.end()) continue;
    for (const Term& t : it->second)
      if (ready(t)) {
        HFSet b = value_of(t, a);
        if (b.is_infinite()) continue;
        pick = i;
        bound = b;
        break;
      }
  }
  uint32_t v = remaining[pick];
  remaining.erase(remaining.begin() + static_cast<long>(pick));
  Rebind rb(a, v);
  auto attempt = [&](const HFSet& x) {
    rb.set(x);
    return search_rec(remaining, guards, universe, uset, a, visit);
  };
  if (bound) {
    for (const HFSet& x : bound->elements())
      if (uset.count(x) && attempt(x)) return true;
    return false;
  }
  for (const HFSet& x : universe)
    if (attempt(x)) return true;
  return false;
}

bool bf(const Formula& f, const std::vector<HFSet>& u, const std::unordered_set<HFSet>& uset, Assignment& a) {
  switch (f.kind()) {
    case FKind::Bottom:
      return false;
    case FKind::Mem:
      return value_of(f.right(), a).contains(value_of(f.left(), a));
    case FKind::Eq:
      return value_of(f.left(), a) == value_of(f.right(), a);
    case FKind::Implies:
      return !bf(f.ant(), u, uset, a) || bf(f.cons(), u, uset, a);
    case FKind::Conj:
      for (const Formula& p : f.distinct_parts())
        if (!bf(p, u, uset, a)) return false;
      return true;
    case FKind::Disj:
      for (const Formula& p : f.distinct_parts())
        if (bf(p, u, uset, a)) return true;
      return false;
    case FKind::Exists:
    case FKind::Forall: {
      std::set<uint32_t> pending(f.ctx().begin(), f.ctx().end());
      std::map<uint32_t, std::vector<Term>> guards;
      const Formula& body = f.body();
      bool ex = f.kind() == FKind::Exists;
      if (ex) collect_guards(body, pending, {}, guards);
      else if (body.kind() == FKind::Implies) collect_guards(body.ant(), pending, {}, guards);
      bool found = search_rec(f.ctx(), guards, u, uset, a, [&] { return bf(body, u, uset, a) == ex; });
      return ex ? found : !found;
    }
  }
  return false;
}

}  // namespace

bool eval_delta0(const Formula& f, const Assignment& a) {
  if (!is_delta0(classify(f))) throw Error("not-delta0", f.to_string());
  Assignment env = a;
  return d0(f, env);
}

bool eval_bruteforce(const Formula& f, const std::vector<HFSet>& universe, const Assignment& a) {
  std::unordered_set<HFSet> uset(universe.begin(), universe.end());
  Assignment env = a;
  return bf(f, universe, uset, env);
}

bool search_block(const Context& ctx, const Formula& guard_source, const std::vector<HFSet>& universe, Assignment& a,
                  const std::function<bool()>& visit) {
  std::unordered_set<HFSet> uset(universe.begin(), universe.end());
  std::set<uint32_t> pending(ctx.begin(), ctx.end());
  std::map<uint32_t, std::vector<Term>> guards;
  collect_guards(guard_source, pending, {}, guards);
  return search_rec(ctx, guards, universe, uset, a, visit);
}

std::vector<HFSet> make_universe(unsigned rank, const std::vector<HFSet>& extra) {
  std::set<HFSet> u(cumulative_level(rank).begin(), cumulative_level(rank).end());
  for (const HFSet& x : extra) {
    if (x.is_infinite()) {
      u.insert(x);
      continue;
    }
    for (const HFSet& y : transitive_closure(x)) u.insert(y);
  }
  std::vector<HFSet> todo(u.begin(), u.end());
  while (!todo.empty()) {
    HFSet s = todo.back();
    todo.pop_back();
    if (s.is_infinite()) continue;
    auto seq = as_seq(s);
    if (!seq || seq->empty()) continue;
    HFSet d = HFSet::ordinal(Ordinal(seq->size()));
    for (const HFSet& y : transitive_closure(d))
      if (u.insert(y).second) todo.push_back(y);
  }
  return {u.begin(), u.end()};
}

}  // namespace otmr
