#include <algorithm>
#include <map>

#include "otmr/calculus.hpp"
#include "otmr/error.hpp"
#include "otmr/interp.hpp"
#include "otmr/realize.hpp"
#include "otmr/truth.hpp"

namespace otmr {

namespace {

using Args = std::vector<Value>;

std::vector<Code> context_parts(const Value& v, uint64_t length) {
  if (length == 0) return {};
  if (length == 1) return {v.as_code()};
  std::vector<Code> parts = seq_parts(v.as_code());
  if (parts.size() != length) throw Error("stuck-term", "expected a sequence of length " + std::to_string(length));
  return parts;
}

Value context_value(const std::vector<Code>& parts) {
  if (parts.empty()) return Value();
  return Value::code(context_code(parts));
}

uint64_t fin(const Value& v) { return v.as_ord().to_finite(); }

std::vector<Value> code_list(const std::vector<Ordinal>& nodes, const Code& c) {
  std::vector<Value> out;
  for (const Ordinal& n : nodes) out.push_back(Value::code(c.at(n)));
  return out;
}

Value decode_eq(const Code& a, const Code& b) { return Value::boolean(decode_set(a) == decode_set(b)); }

// Realisers for every node of b's essential domain, lowest first; each node
// is handed a lookup table holding the realisers already built.
Value induct(Interp& in, const Value& r, const Code& b) {
  std::vector<Ordinal> nodes = essdom(b);
  std::stable_sort(nodes.begin(), nodes.end(),
                   [&](const Ordinal& x, const Ordinal& y) { return b.pre->height(x) < b.pre->height(y); });
  static const RTerm lookup = parse_rterm("(lam s (prim lookup P x))");
  std::vector<Value> table;
  Value last;
  for (const Ordinal& n : nodes) {
    in.tick();
    Value c = Value::code(b.at(n));
    Value below = Value::realizer(lookup, Value::list(table));
    last = in.apply(in.apply(r, c), below);
    table.push_back(Value::pair(c, last));
  }
  return last;
}

Value first_member_choice(const Code& c) {
  std::vector<HFSet> pairs;
  for (const Ordinal& e : element_nodes(c)) {
    auto ms = c.pre->members(e);
    if (ms.empty()) continue;
    pairs.push_back(kpair(c.pre->value(e), c.pre->value(ms.front())));
  }
  return Value::code(build_code(HFSet::make(pairs)));
}

Value least_member_choice(const Code& c) {
  std::vector<HFSet> pairs;
  for (const HFSet& y : decode_set(c).elements())
    if (!y.is_empty()) pairs.push_back(kpair(y, y.elements().front()));
  return Value::code(canonical_code(HFSet::make(pairs)));
}

Value first_minimal(const Code& c) {
  HFSet x = decode_set(c);
  for (const Ordinal& e : element_nodes(c)) {
    bool minimal = true;
    for (const HFSet& z : c.pre->value(e).elements()) minimal = minimal && !x.contains(z);
    if (minimal) return Value::code(c.at(e));
  }
  throw Error("stuck-term", "no element of an empty set is minimal");
}

Value enumerate(const Code& c) {
  std::vector<HFSet> xs;
  for (const Ordinal& e : element_nodes(c)) xs.push_back(c.pre->value(e));
  return Value::code(build_code(make_seq(xs)));
}

Formula subst(const Formula& f, const Value& vars, const Value& code) {
  if (vars.is(VKind::Ord)) return substitute(f, {static_cast<uint32_t>(fin(vars))}, {decode_set(code.as_code())});
  Context ctx;
  for (const Value& v : vars.items()) ctx.push_back(static_cast<uint32_t>(fin(v)));
  if (ctx.empty()) return f;
  return substitute(f, ctx, decode_context(code.as_code(), ctx.size()));
}

const std::map<std::string, PrimInfo>& table() {
  static const std::map<std::string, PrimInfo> t = {
      // Codes.
      {"iso",
       {2, [](Interp&, const Args& a) {
          auto f = build_iso(a[0].as_code(), a[1].as_code());
          if (!f) throw Error("stuck-term", "codes of different sets");
          return Value::iso(*f);
        }}},
      {"match",
       {2, [](Interp&, const Args& a) {
          const Code& x = a[0].as_code();
          const Code& y = a[1].as_code();
          auto n = decode_match(x, y, x.rho);
          if (!n || !y.pre->has_edge(*n, y.rho)) throw Error("stuck-term", "not an element");
          return Value::ord(*n);
        }}},
      {"root", {1, [](Interp&, const Args& a) { return Value::ord(a[0].as_code().rho); }}},
      {"at", {2, [](Interp&, const Args& a) { return Value::code(a[0].as_code().at(a[1].as_ord())); }}},
      {"essdom",
       {1, [](Interp&, const Args& a) {
          std::vector<Value> out;
          for (const Ordinal& n : essdom(a[0].as_code())) out.push_back(Value::ord(n));
          return Value::list(out);
        }}},
      {"elements",
       {1, [](Interp&, const Args& a) {
          const Code& c = a[0].as_code();
          return Value::list(code_list(element_nodes(c), c));
        }}},
      {"decode-eq", {2, [](Interp&, const Args& a) { return decode_eq(a[0].as_code(), a[1].as_code()); }}},
      {"member",
       {2, [](Interp&, const Args& a) {
          return Value::boolean(decode_set(a[1].as_code()).contains(decode_set(a[0].as_code())));
        }}},
      {"seq",
       {1, [](Interp&, const Args& a) {
          std::vector<Code> parts;
          for (const Value& v : a[0].items()) parts.push_back(v.as_code());
          return Value::code(seq_code(parts));
        }}},
      {"parts",
       {1, [](Interp&, const Args& a) {
          std::vector<Value> out;
          for (const Code& c : seq_parts(a[0].as_code())) out.push_back(Value::code(c));
          return Value::list(out);
        }}},
      {"merge",
       {1, [](Interp& in, const Args& a) {
          std::vector<Code> cs;
          for (const Value& v : a[0].items()) cs.push_back(v.as_code());
          in.tick(cs.size());
          return Value::code(merge_codes(cs));
        }}},
      {"union",
       {1, [](Interp&, const Args& a) {
          const Code& c = a[0].as_code();
          std::vector<Code> cs;
          for (const Ordinal& e : element_nodes(c))
            for (const Ordinal& m : c.pre->members(e)) cs.push_back(c.at(m));
          return Value::code(merge_codes(cs));
        }}},
      {"sep",
       {3, [](Interp&, const Args& a) {
          const Formula& f = a[1].as_formula();
          uint32_t v = static_cast<uint32_t>(fin(a[2]));
          return Value::code(separate(a[0].as_code(), [&](const Code& e) {
            return eval_delta0(substitute(f, {v}, {decode_set(e)}));
          }));
        }}},
      {"canon", {1, [](Interp&, const Args& a) { return Value::code(canonical_code(decode_set(a[0].as_code()))); }}},
      {"ordcode", {1, [](Interp&, const Args& a) { return Value::code(canonical_code(HFSet::ordinal(a[0].as_ord()))); }}},
      {"card",
       {1, [](Interp&, const Args& a) { return Value::ord(Ordinal(element_nodes(a[0].as_code()).size())); }}},

      // Formulas and truth.
      {"phi", {1, [](Interp&, const Args& a) { return synthesize(a[0].as_formula()); }}},
      {"eval", {1, [](Interp&, const Args& a) { return Value::boolean(sentence_truth(a[0].as_formula())); }}},
      {"part", {2, [](Interp&, const Args& a) { return Value::formula(a[0].as_formula().part(fin(a[1]))); }}},
      {"inst",
       {2, [](Interp&, const Args& a) {
          const Formula& f = a[0].as_formula();
          if (f.kind() != FKind::Forall && f.kind() != FKind::Exists) throw Error("stuck-term", "not a quantifier");
          return Value::formula(substitute(f.body(), f.ctx(), decode_context(a[1].as_code(), f.ctx().size())));
        }}},
      {"subst", {3, [](Interp&, const Args& a) { return Value::formula(subst(a[0].as_formula(), a[1], a[2])); }}},

      // Lists and ordinals.
      {"nth",
       {2, [](Interp&, const Args& a) {
          const auto& xs = a[0].items();
          uint64_t i = fin(a[1]);
          if (i >= xs.size()) throw Error("stuck-term", "index " + std::to_string(i) + " out of range");
          return xs[i];
        }}},
      {"len", {1, [](Interp&, const Args& a) { return Value::ord(Ordinal(a[0].items().size())); }}},
      {"range",
       {1, [](Interp& in, const Args& a) {
          uint64_t n = fin(a[0]);
          in.tick(n);
          std::vector<Value> out;
          for (uint64_t i = 0; i < n; ++i) out.push_back(Value::ord(Ordinal(i)));
          return Value::list(out);
        }}},
      {"is-zero", {1, [](Interp&, const Args& a) { return Value::boolean(a[0].as_ord().is_zero()); }}},
      {"eq-ord", {2, [](Interp&, const Args& a) { return Value::boolean(a[0].as_ord() == a[1].as_ord()); }}},

      // Context codes.
      {"join",
       {4, [](Interp&, const Args& a) {
          auto xs = context_parts(a[0], fin(a[1]));
          auto ys = context_parts(a[2], fin(a[3]));
          xs.insert(xs.end(), ys.begin(), ys.end());
          return context_value(xs);
        }}},
      {"split",
       {4, [](Interp&, const Args& a) {
          uint64_t la = fin(a[1]), lb = fin(a[2]);
          auto xs = context_parts(a[0], la + lb);
          if (fin(a[3]) == 0) return context_value({xs.begin(), xs.begin() + la});
          return context_value({xs.begin() + la, xs.end()});
        }}},
      {"reorder",
       {3, [](Interp&, const Args& a) {
          auto ys = context_parts(a[0], fin(a[1]));
          std::vector<Code> out;
          for (const Value& item : a[2].items()) {
            if (fin(item.fst()) == 0) {
              uint64_t j = fin(item.snd());
              if (j >= ys.size()) throw Error("stuck-term", "context index out of range");
              out.push_back(ys[j]);
            } else {
              out.push_back(item.snd().as_code());
            }
          }
          return context_value(out);
        }}},
      {"lookup",
       {2, [](Interp& in, const Args& a) {
          HFSet want = decode_set(a[1].as_code());
          for (const Value& e : a[0].items()) {
            in.tick();
            if (decode_set(e.fst().as_code()) == want) return e.snd();
          }
          throw Error("stuck-term", "no entry for " + want.to_string());
        }}},

      // Axiom helpers.
      {"induct", {2, [](Interp& in, const Args& a) { return induct(in, a[0], a[1].as_code()); }}},
      {"wchoice", {1, [](Interp&, const Args& a) { return least_member_choice(a[0].as_code()); }}},
      {"fchoice", {1, [](Interp&, const Args& a) { return first_member_choice(a[0].as_code()); }}},
      {"minimal", {1, [](Interp&, const Args& a) { return first_minimal(a[0].as_code()); }}},
      {"enumerate", {1, [](Interp&, const Args& a) { return enumerate(a[0].as_code()); }}},

      // Tree rules.
      {"walk", {2, walk_prim}},
      {"transit", {2, transit_prim}},
  };
  return t;
}

}  // namespace

const PrimInfo* find_prim(const std::string& name) {
  const auto& t = table();
  auto it = t.find(name);
  return it == t.end() ? nullptr : &it->second;
}

}  // namespace otmr
