#include "otmr/realize.hpp"

#include <map>
#include <set>

#include "otmr/error.hpp"

namespace otmr {

// ---------------------------------------------------------------------------
// Code universes

CodeUniverse::CodeUniverse(std::vector<HFSet> sets, unsigned scrambles, uint64_t fuel)
    : sets_(std::move(sets)), scrambles_(scrambles), fuel_(fuel) {}

CodeUniverse CodeUniverse::level(unsigned rank, const std::vector<HFSet>& extra, unsigned scrambles, uint64_t fuel) {
  return CodeUniverse(make_universe(rank, extra), scrambles, fuel);
}

CodeUniverse CodeUniverse::for_formula(const Formula& f, unsigned rank, unsigned scrambles, uint64_t fuel) {
  auto cs = constants(f);
  return level(rank, {cs.begin(), cs.end()}, scrambles, fuel);
}

const std::vector<Code>& CodeUniverse::codes_for(const HFSet& x) const {
  auto it = codes_.find(x);
  if (it != codes_.end()) return it->second;
  std::vector<Code> cs{build_code(x)};
  for (unsigned s = 1; s <= scrambles_; ++s) {
    Code c = build_code_scrambled(x, s);
    bool dup = false;
    for (const Code& d : cs) dup = dup || d == c;
    if (!dup) cs.push_back(c);
  }
  return codes_.emplace(x, std::move(cs)).first->second;
}

std::vector<Code> CodeUniverse::codes_for_tuple(const std::vector<HFSet>& xs) const {
  if (xs.size() == 1) return codes_for(xs[0]);
  for (const HFSet& x : xs)
    if (x.is_infinite()) return {};
  std::vector<Code> out;
  for (unsigned k = 0; k <= scrambles_; ++k) {
    std::vector<Code> parts;
    for (const HFSet& x : xs) {
      const auto& cs = codes_for(x);
      parts.push_back(cs[std::min<size_t>(k, cs.size() - 1)]);
    }
    Code c = seq_code(parts);
    bool dup = false;
    for (const Code& d : out) dup = dup || d == c;
    if (!dup) out.push_back(c);
  }
  return out;
}

std::vector<HFSet> decode_context(const Code& c, size_t length) {
  if (length == 1) return {decode_set(c)};
  std::vector<Code> parts;
  try {
    parts = seq_parts(c);
  } catch (const Error& e) {
    throw Error("stuck-term", e.what());
  }
  if (parts.size() != length)
    throw Error("stuck-term", "expected a sequence of length " + std::to_string(length));
  std::vector<HFSet> out;
  for (const Code& p : parts) out.push_back(decode_set(p));
  return out;
}

Code context_code(const std::vector<Code>& parts) {
  if (parts.size() == 1) return parts[0];
  return seq_code(parts);
}

// ---------------------------------------------------------------------------
// Synthesis

namespace {

struct SynthState {
  unsigned rank = 3;
  std::unordered_map<Formula, bool> truth;
  std::unordered_map<Formula, Value> realizers;
};

SynthState& synth_state() {
  thread_local SynthState s;
  return s;
}

std::vector<HFSet> universe_of(const Formula& s) {
  auto cs = constants(s);
  return make_universe(synth_state().rank, {cs.begin(), cs.end()});
}

const Value& unit_realizer() {
  static const Value v = top_realizer("unit");
  return v;
}

// Indices of the parts worth inspecting: all of them when finite, one pass
// over prefix and cycle for w.
uint64_t inspect_count(const Formula& f) {
  if (f.is_omega()) return f.prefix().size() + f.cycle().size();
  return f.length().to_finite();
}

std::vector<std::vector<HFSet>> witnesses(const Formula& s, size_t cap) {
  std::vector<std::vector<HFSet>> out;
  const Context& ctx = s.ctx();
  auto accept = [&](const std::vector<HFSet>& w) {
    if (sentence_truth(substitute(s.body(), ctx, w))) out.push_back(w);
    return out.size() >= cap;
  };
  if (auto b = match_bounded(s); b && !b->universal && !b->bound.is_var) {
    const HFSet& bound = b->bound.value;
    if (bound.is_infinite()) {
      for (uint64_t k = 0; k < kInfiniteSearchCap && ctx.size() == 1; ++k)
        if (accept({HFSet::ordinal(Ordinal(k))})) break;
      return out;
    }
    for (const HFSet& e : bound.elements()) {
      if (ctx.size() == 1) {
        if (accept({e})) break;
        continue;
      }
      auto seq = as_seq(e);
      if (seq && seq->size() == ctx.size() && accept(*seq)) break;
    }
    return out;
  }
  Assignment a;
  search_block(ctx, s.body(), universe_of(s), a, [&] {
    std::vector<HFSet> w;
    for (uint32_t v : ctx) w.push_back(a.at(v));
    return accept(w);
  });
  return out;
}

Value code_value(const std::vector<HFSet>& w) {
  std::vector<Code> parts;
  for (const HFSet& x : w) parts.push_back(canonical_code(x));
  return Value::code(context_code(parts));
}

Value disjunct_realizer(const Formula& s, uint64_t g) {
  return Value::realizer(parse_rterm("P"), Value::pair(Value::ord(Ordinal(g)), synthesize(s.part(g))));
}

Value witness_realizer(const Formula& s, const std::vector<HFSet>& w) {
  return Value::realizer(parse_rterm("P"), Value::pair(code_value(w), synthesize(substitute(s.body(), s.ctx(), w))));
}

Value build(const Formula& s) {
  switch (s.kind()) {
    case FKind::Bottom: throw Error("stuck-term", "bottom has no realiser");
    case FKind::Eq: return eq_realizer();
    case FKind::Mem: return mem_realizer();
    case FKind::Implies: {
      bool ant = true;
      try {
        ant = sentence_truth(s.ant());
      } catch (const Error& e) {
        if (e.kind() != "not-decidable") throw;
      }
      if (!ant) return unit_realizer();
      return top_realizer("(prim phi P)", Value::formula(s.cons()));
    }
    case FKind::Conj: return top_realizer("(prim phi (prim part P x))", Value::formula(s));
    case FKind::Forall: return top_realizer("(prim phi (prim inst P x))", Value::formula(s));
    case FKind::Disj: {
      uint64_t n = inspect_count(s);
      for (uint64_t g = 0; g < n; ++g)
        if (sentence_truth(s.part(g))) return disjunct_realizer(s, g);
      throw Error("stuck-term", "no true disjunct in " + s.to_string());
    }
    case FKind::Exists: {
      auto w = witnesses(s, 1);
      if (w.empty()) throw Error("stuck-term", "no witness for " + s.to_string());
      return witness_realizer(s, w[0]);
    }
  }
  throw Error("stuck-term", "unknown formula");
}

}  // namespace

unsigned synthesis_rank() { return synth_state().rank; }

void set_synthesis_rank(unsigned rank) {
  SynthState& s = synth_state();
  if (s.rank == rank) return;
  s.rank = rank;
  s.truth.clear();
  s.realizers.clear();
}

bool sentence_truth(const Formula& s) {
  auto& memo = synth_state().truth;
  if (auto it = memo.find(s); it != memo.end()) return it->second;
  // Connectives are evaluated part by part, so that each quantified part is
  // searched over the same universe that synthesis uses for it.
  bool t = false;
  if (is_delta0(classify(s))) {
    t = eval_delta0(s);
  } else if (s.kind() == FKind::Conj || s.kind() == FKind::Disj) {
    bool conj = s.kind() == FKind::Conj;
    t = conj;
    for (const Formula& p : s.distinct_parts())
      if (sentence_truth(p) != conj) {
        t = !conj;
        break;
      }
  } else if (s.kind() == FKind::Implies) {
    t = !sentence_truth(s.ant()) || sentence_truth(s.cons());
  } else {
    t = eval_bruteforce(s, universe_of(s));
  }
  memo.emplace(s, t);
  return t;
}

Value synthesize(const Formula& s) {
  auto& memo = synth_state().realizers;
  if (auto it = memo.find(s); it != memo.end()) return it->second;
  Value v = build(s);
  memo.emplace(s, v);
  return v;
}

std::vector<Value> synthesize_alternatives(const Formula& s, size_t cap) {
  std::vector<Value> out;
  if (s.kind() == FKind::Disj) {
    uint64_t n = inspect_count(s);
    for (uint64_t g = 0; g < n && out.size() < cap; ++g)
      if (sentence_truth(s.part(g))) out.push_back(disjunct_realizer(s, g));
    return out;
  }
  if (s.kind() == FKind::Exists) {
    for (const auto& w : witnesses(s, cap)) out.push_back(witness_realizer(s, w));
    return out;
  }
  out.push_back(synthesize(s));
  return out;
}

std::optional<Value> phi_universal(const Formula& f, const Assignment& a) {
  Context ctx;
  std::vector<HFSet> vals;
  for (const auto& [v, x] : a) {
    ctx.push_back(v);
    vals.push_back(x);
  }
  Formula s = substitute(f, ctx, vals);
  if (auto fv = free_vars(s); !fv.empty()) throw Error("unbound-variable", "x" + std::to_string(*fv.begin()));
  if (!is_sigma1(classify(s))) throw Error("not-in-fragment", s.to_string());
  if (!sentence_truth(s)) return std::nullopt;
  return synthesize(s);
}

const Value& eq_realizer() {
  static const Value v = top_realizer("(prim iso (fst x) (snd x))");
  return v;
}

const Value& mem_realizer() {
  static const Value v = top_realizer("(pair (prim match (fst x) (snd x)) P)", eq_realizer());
  return v;
}

std::optional<Value> realize_eq(const HFSet& x, const HFSet& y) {
  if (x != y) return std::nullopt;
  return eq_realizer();
}

std::optional<Value> realize_mem(const HFSet& x, const HFSet& y) {
  if (y.is_infinite() ? !(x.as_ordinal() && *x.as_ordinal() < *y.as_ordinal()) : !y.contains(x)) return std::nullopt;
  return mem_realizer();
}

// ---------------------------------------------------------------------------
// Candidate pools

std::vector<Value> candidate_pool(const Formula& a) {
  static const std::vector<Value> library = {
      top_realizer("x"),
      top_realizer("unit"),
      top_realizer("(lam s s)"),
      top_realizer("(pair 0 unit)"),
      top_realizer("(pair 1 unit)"),
      top_realizer("(pair (prim ordcode 0) unit)"),
  };
  std::vector<Value> out;
  try {
    out = synthesize_alternatives(a);
  } catch (const Error& e) {
    if (e.kind() != "stuck-term" && e.kind() != "not-decidable") throw;
  }
  out.insert(out.end(), library.begin(), library.end());
  return out;
}

// ---------------------------------------------------------------------------
// Verification

namespace {

struct MemoKey {
  const void* r;
  Formula f;
  friend bool operator==(const MemoKey& a, const MemoKey& b) { return a.r == b.r && a.f == b.f; }
};
struct MemoHash {
  size_t operator()(const MemoKey& k) const { return std::hash<const void*>()(k.r) * 31 + k.f.hash(); }
};

Verdict both(Verdict a, Verdict b) {
  if (a == Verdict::No || b == Verdict::No) return Verdict::No;
  if (a == Verdict::Unknown || b == Verdict::Unknown) return Verdict::Unknown;
  return Verdict::Yes;
}

class Verifier {
 public:
  Verifier(const CodeUniverse& u, bool uniform, const ProvesFn* proves, Verifier* plain)
      : u_(u), uniform_(uniform), proves_(proves), plain_(plain ? plain : this) {}

  Verdict check(const Value& r, const Formula& f, std::string& trace) {
    MemoKey key{r.id(), f};
    if (auto it = memo_.find(key); it != memo_.end()) {
      trace += it->second.second;
      return it->second.first;
    }
    std::string t;
    Verdict v;
    try {
      v = clause(r, f, t);
    } catch (const Error& e) {
      if (e.kind() != "stuck-term") throw;
      v = Verdict::No;
    }
    keep_.push_back(r);
    memo_.emplace(key, std::make_pair(v, t));
    trace += t;
    return v;
  }

  const std::vector<Value>& pool(const Formula& a) {
    if (auto it = plain_->pools_.find(a); it != plain_->pools_.end()) return it->second;
    std::vector<Value> ok;
    for (const Value& s : candidate_pool(a)) {
      std::string ignored;
      if (plain_->check(s, a, ignored) == Verdict::Yes) ok.push_back(s);
    }
    return plain_->pools_.emplace(a, std::move(ok)).first->second;
  }

 private:
  Value run(const Value& r, const Value& arg) { return interpret(r, arg, u_.fuel()); }

  Verdict clause(const Value& r, const Formula& f, std::string& trace) {
    switch (f.kind()) {
      case FKind::Bottom: return Verdict::No;
      case FKind::Eq: {
        const HFSet& x = constant_of(f.left());
        const HFSet& y = constant_of(f.right());
        for (const Code& a : u_.codes_for(x))
          for (const Code& b : u_.codes_for(y)) {
            Value v = run(r, Value::pair(Value::code(a), Value::code(b)));
            if (!v.is(VKind::Iso) || !is_code_iso(a, b, v.as_iso())) return Verdict::No;
          }
        return Verdict::Yes;
      }
      case FKind::Mem: {
        const HFSet& x = constant_of(f.left());
        const HFSet& y = constant_of(f.right());
        Verdict out = Verdict::Yes;
        for (const Code& a : u_.codes_for(x))
          for (const Code& b : u_.codes_for(y)) {
            Value v = run(r, Value::pair(Value::code(a), Value::code(b)));
            const Ordinal& alpha = v.fst().as_ord();
            if (!b.pre->contains_node(alpha) || !b.pre->has_edge(alpha, b.rho)) return Verdict::No;
            std::string ignored;
            Formula eq = Formula::eq(Term::c(x), Term::c(decode_set(b.at(alpha))));
            out = both(out, check(v.snd(), eq, ignored));
            if (out == Verdict::No) return out;
          }
        return out;
      }
      case FKind::Implies: {
        Verdict out = proves_ ? (*proves_)(f) : Verdict::Yes;
        if (out == Verdict::No) return out;
        for (const Value& s : pool(f.ant())) {
          std::string t;
          out = both(out, check(run(r, s), f.cons(), t));
          if (out == Verdict::No) return out;
          if (uniform_) trace += "I(" + t + ")";
        }
        return out;
      }
      case FKind::Disj: {
        Value v = run(r, Value::ord(Ordinal(0)));
        const Ordinal& g = v.fst().as_ord();
        if (!(g < f.length())) return Verdict::No;
        if (uniform_) trace += "D" + g.to_string();
        return check(v.snd(), f.part(g.to_finite()), trace);
      }
      case FKind::Conj: {
        uint64_t n = f.is_omega() ? f.prefix().size() + 2 * f.cycle().size() : f.length().to_finite();
        Verdict out = Verdict::Yes;
        for (uint64_t i = 0; i < n; ++i) {
          if (uniform_) trace += "C";
          out = both(out, check(run(r, Value::ord(Ordinal(i))), f.part(i), trace));
          if (out == Verdict::No) return out;
        }
        return out;
      }
      case FKind::Exists: {
        Value v = run(r, Value::ord(Ordinal(0)));
        const Code& a = v.fst().as_code();
        std::vector<HFSet> xs = decode_context(a, f.ctx().size());
        if (uniform_) {
          trace += "E";
          for (const HFSet& x : xs) trace += x.to_string();
        }
        return check(v.snd(), substitute(f.body(), f.ctx(), xs), trace);
      }
      case FKind::Forall: {
        Verdict out = proves_ ? (*proves_)(f) : Verdict::Yes;
        if (out == Verdict::No) return out;
        const Context& ctx = f.ctx();
        std::vector<size_t> idx(ctx.size(), 0);
        const auto& sets = u_.sets();
        if (sets.empty()) return out;
        while (true) {
          std::vector<HFSet> xs;
          for (size_t i : idx) xs.push_back(sets[i]);
          Formula inst = substitute(f.body(), ctx, xs);
          std::optional<std::string> first;
          for (const Code& a : u_.codes_for_tuple(xs)) {
            std::string t;
            out = both(out, check(run(r, Value::code(a)), inst, t));
            if (out == Verdict::No) return out;
            if (!uniform_) continue;
            if (!first)
              first = t;
            else if (*first != t)
              return Verdict::No;
          }
          if (uniform_ && first) trace += "A(" + *first + ")";
          size_t k = 0;
          while (k < idx.size() && ++idx[k] == sets.size()) idx[k++] = 0;
          if (k == idx.size()) break;
        }
        return out;
      }
    }
    return Verdict::No;
  }

  static const HFSet& constant_of(const Term& t) {
    if (t.is_var) throw Error("unbound-variable", t.to_string());
    return t.value;
  }

  const CodeUniverse& u_;
  bool uniform_;
  const ProvesFn* proves_;
  Verifier* plain_;
  std::unordered_map<MemoKey, std::pair<Verdict, std::string>, MemoHash> memo_;
  std::unordered_map<Formula, std::vector<Value>> pools_;
  std::vector<Value> keep_;  // keeps memo keys alive
};

}  // namespace

Verdict verify_with(const Value& r, const Formula& phi, const CodeUniverse& U, bool uniform, const ProvesFn* proves) {
  if (auto fv = free_vars(phi); !fv.empty())
    throw Error("unbound-variable", "verify needs a sentence; x" + std::to_string(*fv.begin()) + " is free");
  std::string trace;
  if (!uniform && !proves) return Verifier(U, false, nullptr, nullptr).check(r, phi, trace);
  Verifier plain(U, false, nullptr, nullptr);
  return Verifier(U, uniform, proves, &plain).check(r, phi, trace);
}

bool verify(const Value& r, const Formula& phi, const CodeUniverse& U) {
  return verify_with(r, phi, U, false) == Verdict::Yes;
}

bool verify_uniform(const Value& r, const Formula& phi, const CodeUniverse& U) {
  return verify_with(r, phi, U, true) == Verdict::Yes;
}

// ---------------------------------------------------------------------------
// Extraction

Extracted extract_disjunct(const Value& r, const Formula& disj, uint64_t fuel) {
  if (disj.kind() != FKind::Disj) throw Error("stuck-term", "not a disjunction: " + disj.to_string());
  Value v = interpret(r, Value::ord(Ordinal(0)), fuel);
  const Ordinal& g = v.fst().as_ord();
  if (!(g < disj.length())) throw Error("stuck-term", "disjunct index " + g.to_string() + " out of range");
  return {g.to_finite(), v.snd(), disj.part(g.to_finite())};
}

Witness extract_witness(const Value& r, const Formula& exists, uint64_t fuel) {
  if (exists.kind() != FKind::Exists) throw Error("stuck-term", "not an existential: " + exists.to_string());
  Value v = interpret(r, Value::ord(Ordinal(0)), fuel);
  Code c = v.fst().as_code();
  std::vector<HFSet> xs = decode_context(c, exists.ctx().size());
  return {c, xs, v.snd(), substitute(exists.body(), exists.ctx(), xs)};
}

}  // namespace otmr
