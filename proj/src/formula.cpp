#include "otmr/formula.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <functional>

#include "otmr/error.hpp"

namespace otmr {

struct Formula::Node {
  FKind kind = FKind::Bottom;
  Term a, b;
  std::vector<Formula> parts;  // Implies: {ant, cons}; quantifiers: {body}
  std::vector<Formula> cycle;
  bool omega = false;
  Context ctx;
  size_t hash = 0;
};

namespace {

size_t mix(size_t h, size_t v) { return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2)); }

size_t term_hash(const Term& t) { return t.is_var ? mix(1, t.var) : mix(2, t.value.hash()); }

std::shared_ptr<Formula::Node> fresh_node(FKind k) {
  auto n = std::make_shared<Formula::Node>();
  n->kind = k;
  return n;
}

}  // namespace

std::string Term::to_string() const { return is_var ? "x" + std::to_string(var) : value.to_string(); }

Formula::Formula() : Formula(bottom()) {}

#define OTMR_SEAL(n)                                                   \
  do {                                                                 \
    size_t h = static_cast<size_t>(n->kind) * 31 + n->omega;           \
    h = mix(h, term_hash(n->a));                                       \
    h = mix(h, term_hash(n->b));                                       \
    for (const Formula& p : n->parts) h = mix(h, p.hash()); \
    h = mix(h, 77);                                                    \
    for (const Formula& p : n->cycle) h = mix(h, p.hash()); \
    for (uint32_t v : n->ctx) h = mix(h, v);                           \
    n->hash = h;                                                       \
  } while (0)

Formula Formula::bottom() {
  static const Formula b = [] {
    auto n = fresh_node(FKind::Bottom);
    OTMR_SEAL(n);
    return Formula(std::shared_ptr<const Node>(n));
  }();
  return b;
}

Formula Formula::mem(Term a, Term b) {
  auto n = fresh_node(FKind::Mem);
  n->a = std::move(a);
  n->b = std::move(b);
  OTMR_SEAL(n);
  return Formula(n);
}

Formula Formula::eq(Term a, Term b) {
  auto n = fresh_node(FKind::Eq);
  n->a = std::move(a);
  n->b = std::move(b);
  OTMR_SEAL(n);
  return Formula(n);
}

Formula Formula::implies(Formula a, Formula b) {
  auto n = fresh_node(FKind::Implies);
  n->parts = {std::move(a), std::move(b)};
  OTMR_SEAL(n);
  return Formula(n);
}

Formula Formula::conj(std::vector<Formula> parts) {
  auto n = fresh_node(FKind::Conj);
  n->parts = std::move(parts);
  OTMR_SEAL(n);
  return Formula(n);
}

Formula Formula::disj(std::vector<Formula> parts) {
  auto n = fresh_node(FKind::Disj);
  n->parts = std::move(parts);
  OTMR_SEAL(n);
  return Formula(n);
}

Formula Formula::conj_omega(std::vector<Formula> prefix, std::vector<Formula> cycle) {
  if (cycle.empty()) throw Error("parse-error", "w-indexed conjunction needs a non-empty cycle");
  auto n = fresh_node(FKind::Conj);
  n->omega = true;
  n->parts = std::move(prefix);
  n->cycle = std::move(cycle);
  OTMR_SEAL(n);
  return Formula(n);
}

Formula Formula::disj_omega(std::vector<Formula> prefix, std::vector<Formula> cycle) {
  if (cycle.empty()) throw Error("parse-error", "w-indexed disjunction needs a non-empty cycle");
  auto n = fresh_node(FKind::Disj);
  n->omega = true;
  n->parts = std::move(prefix);
  n->cycle = std::move(cycle);
  OTMR_SEAL(n);
  return Formula(n);
}

namespace {
void check_context(const Context& ctx) {
  if (ctx.empty()) throw Error("parse-error", "empty quantifier context");
  Context s = ctx;
  std::sort(s.begin(), s.end());
  if (std::adjacent_find(s.begin(), s.end()) != s.end())
    throw Error("parse-error", "repeated variable in context");
}
}  // namespace

Formula Formula::exists(Context ctx, Formula body) {
  check_context(ctx);
  auto n = fresh_node(FKind::Exists);
  n->ctx = std::move(ctx);
  n->parts = {std::move(body)};
  OTMR_SEAL(n);
  return Formula(n);
}

Formula Formula::forall(Context ctx, Formula body) {
  check_context(ctx);
  auto n = fresh_node(FKind::Forall);
  n->ctx = std::move(ctx);
  n->parts = {std::move(body)};
  OTMR_SEAL(n);
  return Formula(n);
}

#undef OTMR_SEAL

FKind Formula::kind() const { return n_->kind; }
size_t Formula::hash() const { return n_->hash; }

namespace {
[[noreturn]] void wrong_shape(const char* what) { throw Error("stuck-term", std::string("formula is not ") + what); }
}  // namespace

const Term& Formula::left() const {
  if (n_->kind != FKind::Mem && n_->kind != FKind::Eq) wrong_shape("atomic");
  return n_->a;
}
const Term& Formula::right() const {
  if (n_->kind != FKind::Mem && n_->kind != FKind::Eq) wrong_shape("atomic");
  return n_->b;
}
const Formula& Formula::ant() const {
  if (n_->kind != FKind::Implies) wrong_shape("an implication");
  return n_->parts[0];
}
const Formula& Formula::cons() const {
  if (n_->kind != FKind::Implies) wrong_shape("an implication");
  return n_->parts[1];
}

bool Formula::is_omega() const { return n_->omega; }

Ordinal Formula::length() const {
  if (n_->kind != FKind::Conj && n_->kind != FKind::Disj) wrong_shape("a connective");
  return n_->omega ? Ordinal::omega() : Ordinal(n_->parts.size());
}

const Formula& Formula::part(uint64_t i) const {
  if (n_->kind != FKind::Conj && n_->kind != FKind::Disj) wrong_shape("a connective");
  if (i < n_->parts.size()) return n_->parts[i];
  if (!n_->omega) throw Error("index-out-of-range", "connective part " + std::to_string(i));
  return n_->cycle[(i - n_->parts.size()) % n_->cycle.size()];
}

const std::vector<Formula>& Formula::prefix() const { return n_->parts; }
const std::vector<Formula>& Formula::cycle() const { return n_->cycle; }

std::vector<Formula> Formula::distinct_parts() const {
  std::vector<Formula> out = n_->parts;
  out.insert(out.end(), n_->cycle.begin(), n_->cycle.end());
  return out;
}

const Context& Formula::ctx() const {
  if (n_->kind != FKind::Exists && n_->kind != FKind::Forall) wrong_shape("a quantifier");
  return n_->ctx;
}
const Formula& Formula::body() const {
  if (n_->kind != FKind::Exists && n_->kind != FKind::Forall) wrong_shape("a quantifier");
  return n_->parts[0];
}

bool operator==(const Formula& x, const Formula& y) {
  if (x.n_ == y.n_) return true;
  const auto& a = *x.n_;
  const auto& b = *y.n_;
  return a.hash == b.hash && a.kind == b.kind && a.omega == b.omega && a.a == b.a && a.b == b.b &&
         a.ctx == b.ctx && a.parts == b.parts && a.cycle == b.cycle;
}

// ---------------------------------------------------------------------------
// Variables and substitution

namespace {

void collect_free(const Formula& f, std::multiset<uint32_t>& bound, std::set<uint32_t>& out) {
  auto term = [&](const Term& t) {
    if (t.is_var && !bound.count(t.var)) out.insert(t.var);
  };
  switch (f.kind()) {
    case FKind::Bottom:
      return;
    case FKind::Mem:
    case FKind::Eq:
      term(f.left());
      term(f.right());
      return;
    case FKind::Implies:
      collect_free(f.ant(), bound, out);
      collect_free(f.cons(), bound, out);
      return;
    case FKind::Conj:
    case FKind::Disj:
      for (const Formula& p : f.distinct_parts()) collect_free(p, bound, out);
      return;
    case FKind::Exists:
    case FKind::Forall: {
      for (uint32_t v : f.ctx()) bound.insert(v);
      collect_free(f.body(), bound, out);
      for (uint32_t v : f.ctx()) bound.erase(bound.find(v));
      return;
    }
  }
}

template <class Fn>
void visit(const Formula& f, const Fn& fn) {
  fn(f);
  switch (f.kind()) {
    case FKind::Implies:
      visit(f.ant(), fn);
      visit(f.cons(), fn);
      break;
    case FKind::Conj:
    case FKind::Disj:
      for (const Formula& p : f.distinct_parts()) visit(p, fn);
      break;
    case FKind::Exists:
    case FKind::Forall:
      visit(f.body(), fn);
      break;
    default:
      break;
  }
}

}  // namespace

std::set<uint32_t> free_vars(const Formula& f) {
  std::multiset<uint32_t> bound;
  std::set<uint32_t> out;
  collect_free(f, bound, out);
  return out;
}

uint32_t max_var_index(const Formula& f) {
  uint32_t m = 0;
  visit(f, [&](const Formula& g) {
    if (g.kind() == FKind::Mem || g.kind() == FKind::Eq) {
      if (g.left().is_var) m = std::max(m, g.left().var);
      if (g.right().is_var) m = std::max(m, g.right().var);
    } else if (g.kind() == FKind::Exists || g.kind() == FKind::Forall) {
      for (uint32_t v : g.ctx()) m = std::max(m, v);
    }
  });
  return m;
}

std::set<HFSet> constants(const Formula& f) {
  std::set<HFSet> out;
  visit(f, [&](const Formula& g) {
    if (g.kind() == FKind::Mem || g.kind() == FKind::Eq) {
      if (!g.left().is_var) out.insert(g.left().value);
      if (!g.right().is_var) out.insert(g.right().value);
    }
  });
  return out;
}

namespace {

Formula subst_rec(const Formula& f, const std::map<uint32_t, Term>& m) {
  if (m.empty()) return f;
  auto term = [&](const Term& t) {
    if (!t.is_var) return t;
    auto it = m.find(t.var);
    return it == m.end() ? t : it->second;
  };
  auto all = [&](const std::vector<Formula>& ps) {
    std::vector<Formula> out;
    out.reserve(ps.size());
    for (const Formula& p : ps) out.push_back(subst_rec(p, m));
    return out;
  };
  switch (f.kind()) {
    case FKind::Bottom:
      return f;
    case FKind::Mem:
      return Formula::mem(term(f.left()), term(f.right()));
    case FKind::Eq:
      return Formula::eq(term(f.left()), term(f.right()));
    case FKind::Implies:
      return Formula::implies(subst_rec(f.ant(), m), subst_rec(f.cons(), m));
    case FKind::Conj:
      return f.is_omega() ? Formula::conj_omega(all(f.prefix()), all(f.cycle())) : Formula::conj(all(f.prefix()));
    case FKind::Disj:
      return f.is_omega() ? Formula::disj_omega(all(f.prefix()), all(f.cycle())) : Formula::disj(all(f.prefix()));
    case FKind::Exists:
    case FKind::Forall: {
      std::map<uint32_t, Term> inner = m;
      for (uint32_t v : f.ctx()) inner.erase(v);
      Formula b = subst_rec(f.body(), inner);
      return f.kind() == FKind::Exists ? Formula::exists(f.ctx(), b) : Formula::forall(f.ctx(), b);
    }
  }
  return f;
}

}  // namespace

Formula substitute_terms(const Formula& f, const Context& ctx, const std::vector<Term>& values) {
  if (ctx.size() != values.size())
    throw Error("length-mismatch", std::to_string(ctx.size()) + " variables, " + std::to_string(values.size()) + " values");
  std::map<uint32_t, Term> m;
  for (size_t i = 0; i < ctx.size(); ++i) m[ctx[i]] = values[i];
  return subst_rec(f, m);
}

Formula substitute(const Formula& f, const Context& ctx, const std::vector<HFSet>& values) {
  std::vector<Term> ts;
  for (const HFSet& x : values) ts.push_back(Term::c(x));
  return substitute_terms(f, ctx, ts);
}

// ---------------------------------------------------------------------------
// Library formulas

namespace lib {

namespace {
Term V(uint32_t i) { return Term::v(i); }
Formula all_in(uint32_t x, Term y, Formula body) {
  return Formula::forall({x}, Formula::implies(Formula::mem(V(x), y), std::move(body)));
}
Formula ex_in(uint32_t x, Term y, Formula body) {
  return Formula::exists({x}, Formula::conj({Formula::mem(V(x), y), std::move(body)}));
}
}  // namespace

Formula singleton(Term u, Term a, uint32_t& fresh) {
  uint32_t t = fresh++;
  return Formula::conj({Formula::mem(a, u), all_in(t, u, Formula::eq(V(t), a))});
}

Formula doubleton(Term u, Term a, Term b, uint32_t& fresh) {
  uint32_t t = fresh++;
  return Formula::conj({Formula::mem(a, u), Formula::mem(b, u),
                        all_in(t, u, Formula::disj({Formula::eq(V(t), a), Formula::eq(V(t), b)}))});
}

Formula kpair(Term p, Term a, Term b, uint32_t& fresh) {
  uint32_t u1 = fresh++;
  Formula s1 = singleton(V(u1), a, fresh);
  Formula d1 = doubleton(V(u1), a, b, fresh);
  uint32_t u2 = fresh++;
  Formula s2 = singleton(V(u2), a, fresh);
  uint32_t u3 = fresh++;
  Formula d3 = doubleton(V(u3), a, b, fresh);
  return Formula::conj({all_in(u1, p, Formula::disj({s1, d1})), ex_in(u2, p, s2), ex_in(u3, p, d3)});
}

Formula ordinal(Term d, uint32_t& fresh) {
  uint32_t s = fresh++, t = fresh++, q = fresh++;
  uint32_t s2 = fresh++, t2 = fresh++;
  Formula transitive = all_in(s2, d, all_in(t2, V(s2), Formula::mem(V(t2), d)));
  Formula members_transitive = all_in(s, d, all_in(t, V(s), all_in(q, V(t), Formula::mem(V(q), V(s)))));
  return Formula::conj({transitive, members_transitive});
}

Formula fun_dom(Term f, Term d, uint32_t& fresh) {
  Formula ord = ordinal(d, fresh);

  // Every element of f is a pair <j, v> with j in d.
  uint32_t p = fresh++, u = fresh++, j = fresh++, u2 = fresh++, v = fresh++;
  Formula kp = kpair(V(p), V(j), V(v), fresh);
  Formula graph = all_in(p, f, ex_in(u, V(p), ex_in(j, V(u), ex_in(u2, V(p), ex_in(v, V(u2), Formula::conj({Formula::mem(V(j), d), kp}))))));

  // Every j in d has a value.
  uint32_t j3 = fresh++, p3 = fresh++, u3 = fresh++, v3 = fresh++;
  Formula kp3 = kpair(V(p3), V(j3), V(v3), fresh);
  Formula total = all_in(j3, d, ex_in(p3, f, ex_in(u3, V(p3), ex_in(v3, V(u3), kp3))));

  // Single-valued.
  uint32_t p4 = fresh++, q4 = fresh++, u4 = fresh++, j4 = fresh++, v4 = fresh++, u5 = fresh++, w5 = fresh++;
  Formula kpp = kpair(V(p4), V(j4), V(v4), fresh);
  Formula kpq = kpair(V(q4), V(j4), V(w5), fresh);
  Formula single =
      all_in(p4, f,
             all_in(q4, f,
                    all_in(u4, V(p4),
                           all_in(j4, V(u4),
                                  all_in(v4, V(u4),
                                         all_in(u5, V(q4),
                                                all_in(w5, V(u5),
                                                       Formula::implies(Formula::conj({kpp, kpq}),
                                                                        Formula::eq(V(v4), V(w5))))))))));
  return Formula::conj({ord, graph, total, single});
}

Formula app(Term f, Term z, Term x, uint32_t& fresh) {
  uint32_t p = fresh++;
  return ex_in(p, f, kpair(V(p), z, x, fresh));
}

Formula successor(Term s, Term y, uint32_t& fresh) {
  uint32_t t = fresh++, t2 = fresh++;
  return Formula::conj({Formula::mem(y, s), all_in(t, y, Formula::mem(V(t), s)),
                        all_in(t2, s, Formula::disj({Formula::mem(V(t2), y), Formula::eq(V(t2), y)}))});
}

}  // namespace lib

// ---------------------------------------------------------------------------
// Sequence membership and bounded quantifiers

Formula seq_membership(const std::vector<Term>& xs, const Term& y, uint32_t base) {
  const size_t mu = xs.size();
  if (mu == 0) throw Error("length-mismatch", "sequence membership needs a non-empty context");
  const uint32_t F = base, D = base + 1;
  auto Z = [&](size_t j) { return Term::v(base + 2 + static_cast<uint32_t>(j)); };
  const uint32_t X = base + 2 + static_cast<uint32_t>(mu);
  uint32_t fresh = X + 1;

  Formula fd = lib::fun_dom(Term::v(F), Term::v(D), fresh);
  std::vector<Formula> chain;
  for (size_t j = 1; j < mu; ++j)
    for (size_t jp = 0; jp < j; ++jp)
      chain.push_back(Formula::conj({Formula::mem(Z(jp), Z(j)), Formula::mem(Z(j), Term::v(D)),
                                     lib::app(Term::v(F), Z(j), xs[j], fresh)}));
  Formula fix = Formula::conj({Formula::mem(Z(0), Term::v(D)), lib::app(Term::v(F), Z(0), xs[0], fresh)});
  std::vector<Formula> cover_parts;
  for (size_t j = 0; j < mu; ++j) cover_parts.push_back(Formula::eq(Z(j), Term::v(X)));
  Formula cover =
      Formula::forall({X}, Formula::implies(Formula::mem(Term::v(X), Term::v(D)), Formula::disj(cover_parts)));
  Formula matrix = Formula::conj({fd, Formula::conj({Formula::conj(chain), fix, cover}), Formula::mem(Term::v(F), y)});
  Context zs;
  for (size_t j = 0; j < mu; ++j) zs.push_back(base + 2 + static_cast<uint32_t>(j));
  return Formula::exists({F}, Formula::exists({D}, Formula::exists(zs, matrix)));
}

namespace {
uint32_t default_base(const std::vector<Term>& xs, const Term& y) {
  uint32_t m = 0;
  bool any = false;
  for (const Term& t : xs)
    if (t.is_var) m = std::max(m, t.var), any = true;
  if (y.is_var) m = std::max(m, y.var), any = true;
  return any ? m + 1 : 0;
}
std::vector<Term> ctx_terms(const Context& ctx) {
  std::vector<Term> out;
  for (uint32_t v : ctx) out.push_back(Term::v(v));
  return out;
}
}  // namespace

Formula expand_seq_membership(const Context& ctx, const Term& y) {
  std::vector<Term> xs = ctx_terms(ctx);
  return seq_membership(xs, y, default_base(xs, y));
}

std::optional<SeqMembership> match_seq_membership(const Formula& f) {
  try {
    if (f.kind() != FKind::Exists || f.ctx().size() != 1) return std::nullopt;
    uint32_t base = f.ctx()[0];
    const Formula& l2 = f.body();
    if (l2.kind() != FKind::Exists) return std::nullopt;
    const Formula& l3 = l2.body();
    if (l3.kind() != FKind::Exists) return std::nullopt;
    size_t mu = l3.ctx().size();
    const Formula& matrix = l3.body();
    if (matrix.kind() != FKind::Conj || matrix.is_omega() || matrix.prefix().size() != 3) return std::nullopt;
    const Formula& last = matrix.part(2);
    if (last.kind() != FKind::Mem) return std::nullopt;
    Term y = last.right();
    const Formula& mid = matrix.part(1);
    // x_j sits at the second component of the doubleton inside f(z_j) = x_j.
    auto x_of = [](const Formula& app) -> Term {
      return app.body().part(1).part(2).body().part(1).part(1).left();
    };
    std::vector<Term> xs(mu);
    xs[0] = x_of(mid.part(1).part(1));
    for (size_t j = 1; j < mu; ++j) {
      // Pair (0, j) is the first of row j, which starts after j(j-1)/2 entries.
      xs[j] = x_of(mid.part(0).part(j * (j - 1) / 2).part(2));
    }
    if (!(seq_membership(xs, y, base) == f)) return std::nullopt;
    return SeqMembership{xs, y};
  } catch (const Error&) {
    return std::nullopt;
  }
}

Formula make_bounded_forall(const Context& ctx, const Term& y, Formula body) {
  if (ctx.size() == 1)
    return Formula::forall(ctx, Formula::implies(Formula::mem(Term::v(ctx[0]), y), std::move(body)));
  return Formula::forall(ctx, Formula::implies(expand_seq_membership(ctx, y), std::move(body)));
}

Formula make_bounded_exists(const Context& ctx, const Term& y, Formula body) {
  if (ctx.size() == 1) return Formula::exists(ctx, Formula::conj({Formula::mem(Term::v(ctx[0]), y), std::move(body)}));
  return Formula::exists(ctx, Formula::conj({expand_seq_membership(ctx, y), std::move(body)}));
}

namespace {

bool bound_ok(const Context& ctx, const Term& y) {
  return !y.is_var || std::find(ctx.begin(), ctx.end(), y.var) == ctx.end();
}

std::optional<Term> guard_bound(const Context& ctx, const Formula& g) {
  if (ctx.size() == 1) {
    if (g.kind() == FKind::Mem && g.left() == Term::v(ctx[0]) && bound_ok(ctx, g.right())) return g.right();
    return std::nullopt;
  }
  auto sm = match_seq_membership(g);
  if (!sm || sm->xs != ctx_terms(ctx) || !bound_ok(ctx, sm->y)) return std::nullopt;
  return sm->y;
}

}  // namespace

std::optional<Bounded> match_bounded(const Formula& f) {
  if (f.kind() == FKind::Forall) {
    const Formula& b = f.body();
    if (b.kind() != FKind::Implies) return std::nullopt;
    if (auto y = guard_bound(f.ctx(), b.ant())) return Bounded{true, f.ctx(), *y, b.cons()};
  } else if (f.kind() == FKind::Exists) {
    const Formula& b = f.body();
    if (b.kind() != FKind::Conj || b.is_omega() || b.prefix().size() != 2) return std::nullopt;
    if (auto y = guard_bound(f.ctx(), b.part(0))) return Bounded{false, f.ctx(), *y, b.part(1)};
  }
  return std::nullopt;
}

Formula underline_forall_fixture(uint32_t x, const Term& y, Formula body) {
  return Formula::forall({x}, Formula::conj({Formula::mem(Term::v(x), y), std::move(body)}));
}

// ---------------------------------------------------------------------------
// Classification

namespace {

// True when every quantifier is bounded; sets inf on w-connectives or
// contexts longer than one.
bool delta(const Formula& f, bool& inf) {
  switch (f.kind()) {
    case FKind::Bottom:
    case FKind::Mem:
    case FKind::Eq:
      return true;
    case FKind::Implies:
      return delta(f.ant(), inf) && delta(f.cons(), inf);
    case FKind::Conj:
    case FKind::Disj:
      if (f.is_omega()) inf = true;
      for (const Formula& p : f.distinct_parts())
        if (!delta(p, inf)) return false;
      return true;
    case FKind::Exists:
    case FKind::Forall: {
      auto b = match_bounded(f);
      if (!b) return false;
      if (b->ctx.size() > 1) inf = true;
      return delta(b->matrix, inf);
    }
  }
  return false;
}

}  // namespace

FClass classify(const Formula& f) {
  bool inf = false;
  if (delta(f, inf)) return inf ? FClass::Delta0Inf : FClass::Delta0Omega;
  inf = false;
  const Formula* g = &f;
  bool any = false;
  while (g->kind() == FKind::Exists) {
    bool dummy = false;
    if (delta(*g, dummy)) break;
    if (g->ctx().size() > 1) inf = true;
    any = true;
    g = &g->body();
  }
  if (any && delta(*g, inf)) return inf ? FClass::Sigma1Inf : FClass::Sigma1Omega;
  return FClass::General;
}

std::string class_name(FClass c) {
  switch (c) {
    case FClass::Delta0Omega: return "delta0-omega";
    case FClass::Sigma1Omega: return "sigma1-omega";
    case FClass::Delta0Inf: return "delta0-inf";
    case FClass::Sigma1Inf: return "sigma1-inf";
    case FClass::General: return "general";
  }
  return "general";
}

bool is_delta0(FClass c) { return c == FClass::Delta0Omega || c == FClass::Delta0Inf; }
bool is_sigma1(FClass c) { return c != FClass::General; }

// ---------------------------------------------------------------------------
// Text form

namespace {

std::string ctx_text(const Context& ctx) {
  std::string s = "(";
  for (size_t i = 0; i < ctx.size(); ++i) {
    if (i) s += ' ';
    s += "x" + std::to_string(ctx[i]);
  }
  return s + ")";
}

void print(const Formula& f, std::string& out);

void print_list(const std::vector<Formula>& ps, std::string& out) {
  out += '(';
  for (size_t i = 0; i < ps.size(); ++i) {
    if (i) out += ' ';
    print(ps[i], out);
  }
  out += ')';
}

// Trailing base annotation when the guard's fresh variables are not the
// default ones (after substitution of the bound, for instance).
std::string base_suffix(const std::vector<Term>& xs, const Term& y, const Formula& guard) {
  uint32_t base = guard.ctx()[0];
  return base == default_base(xs, y) ? "" : " " + std::to_string(base);
}

void print(const Formula& f, std::string& out) {
  switch (f.kind()) {
    case FKind::Bottom:
      out += "(bot)";
      return;
    case FKind::Mem:
    case FKind::Eq:
      out += f.kind() == FKind::Mem ? "(mem " : "(eq ";
      out += f.left().to_string() + " " + f.right().to_string() + ")";
      return;
    case FKind::Implies:
      if (f.cons().kind() == FKind::Bottom) {
        out += "(not ";
        print(f.ant(), out);
        out += ')';
      } else {
        out += "(imp ";
        print(f.ant(), out);
        out += ' ';
        print(f.cons(), out);
        out += ')';
      }
      return;
    case FKind::Conj:
    case FKind::Disj: {
      bool c = f.kind() == FKind::Conj;
      if (f.is_omega()) {
        out += c ? "(andw " : "(orw ";
        print_list(f.prefix(), out);
        out += ' ';
        print_list(f.cycle(), out);
        out += ')';
        return;
      }
      out += c ? "(and" : "(or";
      for (const Formula& p : f.prefix()) {
        out += ' ';
        print(p, out);
      }
      out += ')';
      return;
    }
    case FKind::Exists:
    case FKind::Forall: {
      bool ex = f.kind() == FKind::Exists;
      if (f.ctx().size() == 1) {
        if (auto sm = match_seq_membership(f)) {
          out += "(seqmem (";
          for (size_t i = 0; i < sm->xs.size(); ++i) {
            if (i) out += ' ';
            out += sm->xs[i].to_string();
          }
          out += ") " + sm->y.to_string() + base_suffix(sm->xs, sm->y, f) + ")";
          return;
        }
      }
      if (auto b = match_bounded(f)) {
        out += ex ? "(exin " : "(allin ";
        out += ctx_text(b->ctx) + " " + b->bound.to_string() + " ";
        print(b->matrix, out);
        if (b->ctx.size() > 1) {
          const Formula& guard = ex ? f.body().part(0) : f.body().ant();
          out += base_suffix(ctx_terms(b->ctx), b->bound, guard);
        }
        out += ')';
        return;
      }
      out += ex ? "(ex " : "(all ";
      out += ctx_text(f.ctx()) + " ";
      print(f.body(), out);
      out += ')';
      return;
    }
  }
}

[[noreturn]] void bad(const SExpr& e, const std::string& msg) {
  throw Error("parse-error", msg + " at offset " + std::to_string(e.offset));
}

uint32_t parse_var(const SExpr& e) {
  if (!e.is_atom || e.atom.size() < 2 || e.atom[0] != 'x') bad(e, "expected a variable");
  for (size_t i = 1; i < e.atom.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(e.atom[i]))) bad(e, "expected a variable");
  try {
    return static_cast<uint32_t>(std::stoul(e.atom.substr(1)));
  } catch (const std::exception&) {
    bad(e, "variable index out of range");
  }
}

Term parse_term(const SExpr& e) {
  if (!e.is_atom) bad(e, "expected a term");
  if (!e.atom.empty() && (e.atom[0] == '{' || e.atom[0] == '#')) {
    try {
      return Term::c(HFSet::parse(e.atom));
    } catch (const Error& err) {
      bad(e, err.what());
    }
  }
  return Term::v(parse_var(e));
}

Context parse_ctx(const SExpr& e) {
  if (!e.is_list() || e.items.empty()) bad(e, "expected a non-empty variable list");
  Context c;
  for (const SExpr& v : e.items) c.push_back(parse_var(v));
  return c;
}

uint32_t parse_base(const SExpr& e) {
  if (!e.is_atom || e.atom.empty() || !std::all_of(e.atom.begin(), e.atom.end(), ::isdigit)) bad(e, "expected a base index");
  return static_cast<uint32_t>(std::stoul(e.atom));
}

Formula parse_rec(const SExpr& e) {
  if (!e.is_list() || e.items.empty() || !e.items[0].is_atom) bad(e, "expected a formula");
  const std::string& h = e.items[0].atom;
  const size_t n = e.items.size();
  auto need = [&](size_t k) {
    if (n != k + 1) bad(e, "'" + h + "' takes " + std::to_string(k) + " arguments");
  };
  auto rest = [&](size_t from) {
    std::vector<Formula> ps;
    for (size_t i = from; i < n; ++i) ps.push_back(parse_rec(e.items[i]));
    return ps;
  };
  auto list = [&](const SExpr& l) {
    if (!l.is_list()) bad(l, "expected a formula list");
    std::vector<Formula> ps;
    for (const SExpr& x : l.items) ps.push_back(parse_rec(x));
    return ps;
  };
  try {
    if (h == "bot") return need(0), Formula::bottom();
    if (h == "mem") return need(2), Formula::mem(parse_term(e.items[1]), parse_term(e.items[2]));
    if (h == "eq") return need(2), Formula::eq(parse_term(e.items[1]), parse_term(e.items[2]));
    if (h == "imp") return need(2), Formula::implies(parse_rec(e.items[1]), parse_rec(e.items[2]));
    if (h == "not") return need(1), Formula::neg(parse_rec(e.items[1]));
    if (h == "and") return Formula::conj(rest(1));
    if (h == "or") return Formula::disj(rest(1));
    if (h == "andw") return need(2), Formula::conj_omega(list(e.items[1]), list(e.items[2]));
    if (h == "orw") return need(2), Formula::disj_omega(list(e.items[1]), list(e.items[2]));
    if (h == "ex") return need(2), Formula::exists(parse_ctx(e.items[1]), parse_rec(e.items[2]));
    if (h == "all") return need(2), Formula::forall(parse_ctx(e.items[1]), parse_rec(e.items[2]));
    if (h == "allin" || h == "exin") {
      if (n != 4 && n != 5) bad(e, "'" + h + "' takes 3 or 4 arguments");
      Context ctx = parse_ctx(e.items[1]);
      Term y = parse_term(e.items[2]);
      Formula body = parse_rec(e.items[3]);
      if (!bound_ok(ctx, y)) bad(e, "bound variable used as its own bound");
      if (n == 5 && ctx.size() == 1) bad(e, "base index only applies to longer contexts");
      if (ctx.size() == 1 || n == 4)
        return h == "allin" ? make_bounded_forall(ctx, y, body) : make_bounded_exists(ctx, y, body);
      Formula guard = seq_membership(ctx_terms(ctx), y, parse_base(e.items[4]));
      return h == "allin" ? Formula::forall(ctx, Formula::implies(guard, body))
                          : Formula::exists(ctx, Formula::conj({guard, body}));
    }
    if (h == "seqmem") {
      if (n != 3 && n != 4) bad(e, "'seqmem' takes 2 or 3 arguments");
      const SExpr& l = e.items[1];
      if (!l.is_list() || l.items.empty()) bad(l, "expected a non-empty term list");
      std::vector<Term> xs;
      for (const SExpr& t : l.items) xs.push_back(parse_term(t));
      Term y = parse_term(e.items[2]);
      uint32_t base = n == 4 ? parse_base(e.items[3]) : default_base(xs, y);
      return seq_membership(xs, y, base);
    }
  } catch (const Error& err) {
    if (err.kind() == "parse-error") throw;
    bad(e, err.what());
  }
  bad(e, "unknown connective '" + h + "'");
}

}  // namespace

std::string Formula::to_string() const {
  std::string out;
  print(*this, out);
  return out;
}

Formula Formula::from_sexpr(const SExpr& e) { return parse_rec(e); }

Formula Formula::parse(std::string_view text) { return parse_rec(parse_sexpr(text)); }

}  // namespace otmr

size_t std::hash<otmr::Formula>::operator()(const otmr::Formula& f) const { return f.hash(); }
