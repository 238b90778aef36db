#include "otmr/interp.hpp"

#include <cctype>
#include <optional>

#include "otmr/error.hpp"

namespace otmr {

struct Value::Node {
  VKind kind = VKind::Unit;
  Ordinal ord;
  std::optional<Code> code;
  std::vector<Value> items;
  Formula formula;
  CodeIso iso;
  RTerm program;
  std::string var;
  Env env;
  bool closure = false;
};

struct EnvNode {
  std::string name;
  Value value;
  Env next;
};

enum class TK { Const, Var, Lam, App, Pair, Fst, Snd, List, Let, If, Case, Map, Filter, First, Real, Prim };

struct RTermNode {
  TK k;
  Value value;
  std::string name;
  std::vector<std::string> names;  // case binders
  std::vector<RTerm> kids;
  const PrimInfo* prim = nullptr;
};

namespace {

[[noreturn]] void stuck(const std::string& what) { throw Error("stuck-term", what); }

const char* kind_name(VKind k) {
  switch (k) {
    case VKind::Unit: return "unit";
    case VKind::Ord: return "ordinal";
    case VKind::Code: return "code";
    case VKind::Pair: return "pair";
    case VKind::List: return "list";
    case VKind::Realizer: return "realiser";
    case VKind::Iso: return "iso";
    case VKind::Formula: return "formula";
  }
  return "?";
}

Env push(const Env& e, std::string name, Value v) {
  return std::make_shared<const EnvNode>(EnvNode{std::move(name), std::move(v), e});
}

const Value* lookup(const Env& e, const std::string& name) {
  for (const EnvNode* n = e.get(); n; n = n->next.get())
    if (n->name == name) return &n->value;
  return nullptr;
}

std::shared_ptr<Value::Node> fresh(VKind k) {
  auto n = std::make_shared<Value::Node>();
  n->kind = k;
  return n;
}

}  // namespace

Value::Value() {
  static const auto unit = std::make_shared<const Node>();
  n_ = unit;
}

Value Value::ord(const Ordinal& a) {
  auto n = fresh(VKind::Ord);
  n->ord = a;
  return Value(n);
}

Value Value::code(const Code& c) {
  auto n = fresh(VKind::Code);
  n->code = c;
  return Value(n);
}

Value Value::pair(Value a, Value b) {
  auto n = fresh(VKind::Pair);
  n->items = {std::move(a), std::move(b)};
  return Value(n);
}

Value Value::list(std::vector<Value> xs) {
  auto n = fresh(VKind::List);
  n->items = std::move(xs);
  return Value(n);
}

Value Value::formula(const Formula& f) {
  auto n = fresh(VKind::Formula);
  n->formula = f;
  return Value(n);
}

Value Value::iso(const CodeIso& f) {
  auto n = fresh(VKind::Iso);
  n->iso = f;
  return Value(n);
}

Value Value::realizer(RTerm program, Value param) {
  auto n = fresh(VKind::Realizer);
  n->program = std::move(program);
  n->items = {std::move(param)};
  n->var = "x";
  return Value(n);
}

Value Value::closure(std::string var, RTerm body, Env env) {
  auto n = fresh(VKind::Realizer);
  n->program = std::move(body);
  n->var = std::move(var);
  n->env = std::move(env);
  n->closure = true;
  return Value(n);
}

VKind Value::kind() const { return n_->kind; }

namespace {
void expect(const Value& v, VKind k) {
  if (!v.is(k)) stuck(std::string("expected ") + kind_name(k) + ", found " + kind_name(v.kind()));
}
}  // namespace

const Ordinal& Value::as_ord() const {
  expect(*this, VKind::Ord);
  return n_->ord;
}
const Code& Value::as_code() const {
  expect(*this, VKind::Code);
  return *n_->code;
}
const Value& Value::fst() const {
  expect(*this, VKind::Pair);
  return n_->items[0];
}
const Value& Value::snd() const {
  expect(*this, VKind::Pair);
  return n_->items[1];
}
const std::vector<Value>& Value::items() const {
  expect(*this, VKind::List);
  return n_->items;
}
const Formula& Value::as_formula() const {
  expect(*this, VKind::Formula);
  return n_->formula;
}
const CodeIso& Value::as_iso() const {
  expect(*this, VKind::Iso);
  return n_->iso;
}
bool Value::truthy() const { return !as_ord().is_zero(); }

bool Value::is_closure() const { return n_->closure; }
const RTerm& Value::program() const {
  expect(*this, VKind::Realizer);
  return n_->program;
}
const Value& Value::param() const {
  expect(*this, VKind::Realizer);
  if (n_->closure) stuck("closures carry an environment, not a parameter");
  return n_->items[0];
}
const std::string& Value::var() const { return n_->var; }
const Env& Value::env() const { return n_->env; }

std::string Value::to_string() const {
  const Node& n = *n_;
  switch (n.kind) {
    case VKind::Unit: return "unit";
    case VKind::Ord: return "(ord " + n.ord.to_string() + ")";
    case VKind::Code: return "(code \"" + n.code->to_string() + "\")";
    case VKind::Pair: return "(pair " + n.items[0].to_string() + " " + n.items[1].to_string() + ")";
    case VKind::List: {
      std::string s = "(list";
      for (const Value& v : n.items) s += " " + v.to_string();
      return s + ")";
    }
    case VKind::Formula: return "(formula " + n.formula.to_string() + ")";
    case VKind::Iso: return "(iso \"" + n.iso.to_string() + "\")";
    case VKind::Realizer: {
      if (!n.closure) return "(real " + rterm_to_string(n.program) + " " + n.items[0].to_string() + ")";
      std::vector<const EnvNode*> frames;
      for (const EnvNode* e = n.env.get(); e; e = e->next.get()) frames.push_back(e);
      std::string s = "(closure " + n.var + " " + rterm_to_string(n.program) + " (";
      for (size_t i = frames.size(); i > 0; --i) {
        s += "(" + frames[i - 1]->name + " " + frames[i - 1]->value.to_string() + ")";
        if (i > 1) s += " ";
      }
      return s + "))";
    }
  }
  return "?";
}

bool operator==(const Value& a, const Value& b) {
  if (a.n_ == b.n_) return true;
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case VKind::Unit: return true;
    case VKind::Ord: return a.n_->ord == b.n_->ord;
    case VKind::Code: return *a.n_->code == *b.n_->code;
    case VKind::Pair:
    case VKind::List: return a.n_->items == b.n_->items;
    case VKind::Formula: return a.n_->formula == b.n_->formula;
    case VKind::Iso: return a.n_->iso == b.n_->iso;
    case VKind::Realizer: return a.to_string() == b.to_string();
  }
  return false;
}

Value Value::parse(std::string_view text) {
  Interp in(kDefaultFuel);
  return in.eval(parse_rterm(text), nullptr);
}

// ---------------------------------------------------------------------------
// Terms

namespace {

RTerm node(TK k, std::vector<RTerm> kids = {}, std::string name = {}) {
  auto n = std::make_shared<RTermNode>();
  n->k = k;
  n->kids = std::move(kids);
  n->name = std::move(name);
  return n;
}

RTerm constant(Value v) {
  auto n = std::make_shared<RTermNode>();
  n->k = TK::Const;
  n->value = std::move(v);
  return n;
}

[[noreturn]] void bad(const SExpr& e, const std::string& what) {
  throw Error("parse-error", "at offset " + std::to_string(e.offset) + ": " + what);
}

const std::string& name_of(const SExpr& e) {
  if (!e.is_atom) bad(e, "expected a name");
  return e.atom;
}

bool all_digits(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

}  // namespace

RTerm rterm_from_sexpr(const SExpr& e) {
  if (e.is_atom) {
    if (e.atom == "unit") return constant(Value());
    if (all_digits(e.atom)) return constant(Value::ord(Ordinal(std::stoull(e.atom))));
    return node(TK::Var, {}, e.atom);
  }
  if (e.items.empty() || !e.items[0].is_atom) bad(e, "expected a head symbol");
  const std::string& h = e.items[0].atom;
  const auto& it = e.items;
  auto need = [&](size_t n) {
    if (it.size() != n + 1) bad(e, "'" + h + "' takes " + std::to_string(n) + " operands");
  };
  auto sub = [&](size_t i) { return rterm_from_sexpr(it[i]); };
  auto rest = [&](size_t from) {
    std::vector<RTerm> ks;
    for (size_t i = from; i < it.size(); ++i) ks.push_back(rterm_from_sexpr(it[i]));
    return ks;
  };
  try {
    if (h == "ord") {
      need(1);
      return constant(Value::ord(Ordinal::parse(name_of(it[1]))));
    }
    if (h == "code") {
      need(1);
      return constant(Value::code(Code::parse(name_of(it[1]))));
    }
    if (h == "formula") {
      need(1);
      return constant(Value::formula(Formula::from_sexpr(it[1])));
    }
  } catch (const Error& err) {
    if (err.kind() == "parse-error") throw;
    bad(e, err.what());
  }
  if (h == "lam") {
    need(2);
    return node(TK::Lam, {sub(2)}, name_of(it[1]));
  }
  if (h == "app") {
    if (it.size() < 3) bad(e, "'app' takes a function and at least one argument");
    return node(TK::App, rest(1));
  }
  if (h == "pair") {
    need(2);
    return node(TK::Pair, rest(1));
  }
  if (h == "fst" || h == "snd") {
    need(1);
    return node(h == "fst" ? TK::Fst : TK::Snd, rest(1));
  }
  if (h == "list") return node(TK::List, rest(1));
  if (h == "let") {
    need(3);
    return node(TK::Let, {sub(2), sub(3)}, name_of(it[1]));
  }
  if (h == "if") {
    need(3);
    return node(TK::If, rest(1));
  }
  if (h == "case") {
    if (it.size() < 3) bad(e, "'case' needs a scrutinee and a branch");
    auto n = std::make_shared<RTermNode>();
    n->k = TK::Case;
    n->kids.push_back(sub(1));
    for (size_t i = 2; i < it.size(); ++i) {
      const SExpr& br = it[i];
      if (!br.is_list() || br.items.size() != 2) bad(br, "a case branch is (name body)");
      n->names.push_back(name_of(br.items[0]));
      n->kids.push_back(rterm_from_sexpr(br.items[1]));
    }
    return n;
  }
  if (h == "map" || h == "filter") {
    need(3);
    return node(h == "map" ? TK::Map : TK::Filter, {sub(2), sub(3)}, name_of(it[1]));
  }
  if (h == "first") {
    need(5);
    return node(TK::First, {sub(2), sub(3), sub(4), sub(5)}, name_of(it[1]));
  }
  if (h == "real") {
    need(2);
    return node(TK::Real, {sub(1), sub(2)});
  }
  if (h == "closure") {
    need(3);
    const SExpr& frames = it[3];
    if (!frames.is_list()) bad(frames, "closure environment must be a list");
    Env env;
    Interp in(kDefaultFuel);
    for (const SExpr& f : frames.items) {
      if (!f.is_list() || f.items.size() != 2) bad(f, "an environment frame is (name value)");
      env = push(env, name_of(f.items[0]), in.eval(rterm_from_sexpr(f.items[1]), nullptr));
    }
    return constant(Value::closure(name_of(it[1]), sub(2), env));
  }
  if (h == "prim") {
    if (it.size() < 2) bad(e, "'prim' needs a name");
    const std::string& p = name_of(it[1]);
    const PrimInfo* info = find_prim(p);
    if (!info) bad(e, "unknown primitive '" + p + "'");
    if (it.size() - 2 != info->arity)
      bad(e, "primitive '" + p + "' takes " + std::to_string(info->arity) + " arguments");
    auto n = std::make_shared<RTermNode>();
    n->k = TK::Prim;
    n->name = p;
    n->prim = info;
    n->kids = rest(2);
    return n;
  }
  bad(e, "unknown form '" + h + "'");
}

RTerm parse_rterm(std::string_view text) { return rterm_from_sexpr(parse_sexpr(text)); }

std::string rterm_to_string(const RTerm& t) {
  auto kids = [&](size_t from) {
    std::string s;
    for (size_t i = from; i < t->kids.size(); ++i) s += " " + rterm_to_string(t->kids[i]);
    return s;
  };
  switch (t->k) {
    case TK::Const: {
      if (t->value.is(VKind::Ord) && t->value.as_ord().is_finite()) return t->value.as_ord().to_string();
      return t->value.to_string();
    }
    case TK::Var: return t->name;
    case TK::Lam: return "(lam " + t->name + kids(0) + ")";
    case TK::App: return "(app" + kids(0) + ")";
    case TK::Pair: return "(pair" + kids(0) + ")";
    case TK::Fst: return "(fst" + kids(0) + ")";
    case TK::Snd: return "(snd" + kids(0) + ")";
    case TK::List: return "(list" + kids(0) + ")";
    case TK::Let: return "(let " + t->name + kids(0) + ")";
    case TK::If: return "(if" + kids(0) + ")";
    case TK::Case: {
      std::string s = "(case " + rterm_to_string(t->kids[0]);
      for (size_t i = 0; i < t->names.size(); ++i) s += " (" + t->names[i] + " " + rterm_to_string(t->kids[i + 1]) + ")";
      return s + ")";
    }
    case TK::Map: return "(map " + t->name + kids(0) + ")";
    case TK::Filter: return "(filter " + t->name + kids(0) + ")";
    case TK::First: return "(first " + t->name + kids(0) + ")";
    case TK::Real: return "(real" + kids(0) + ")";
    case TK::Prim: return "(prim " + t->name + kids(0) + ")";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Evaluation

void Interp::tick(uint64_t n) {
  if (fuel_ < n) {
    fuel_ = 0;
    throw Error("out-of-fuel", "interpreter budget exhausted");
  }
  fuel_ -= n;
}

Value Interp::apply(const Value& f, const Value& arg) {
  tick();
  if (!f.is(VKind::Realizer)) stuck(std::string("applying a ") + kind_name(f.kind()));
  if (f.is_closure()) return eval(f.program(), push(f.env(), f.var(), arg));
  return eval(f.program(), push(push(nullptr, "P", f.param()), "x", arg));
}

Value Interp::eval(const RTerm& t, const Env& env) {
  tick();
  const auto& k = t->kids;
  switch (t->k) {
    case TK::Const: return t->value;
    case TK::Var: {
      const Value* v = lookup(env, t->name);
      if (!v) stuck("unbound name '" + t->name + "'");
      return *v;
    }
    case TK::Lam: return Value::closure(t->name, k[0], env);
    case TK::App: {
      Value f = eval(k[0], env);
      for (size_t i = 1; i < k.size(); ++i) f = apply(f, eval(k[i], env));
      return f;
    }
    case TK::Pair: return Value::pair(eval(k[0], env), eval(k[1], env));
    case TK::Fst: return eval(k[0], env).fst();
    case TK::Snd: return eval(k[0], env).snd();
    case TK::List: {
      std::vector<Value> xs;
      for (const RTerm& e : k) xs.push_back(eval(e, env));
      return Value::list(std::move(xs));
    }
    case TK::Let: return eval(k[1], push(env, t->name, eval(k[0], env)));
    case TK::If: return eval(eval(k[0], env).truthy() ? k[1] : k[2], env);
    case TK::Case: {
      Value v = eval(k[0], env);
      const Ordinal& tag = v.fst().as_ord();
      if (!tag.is_finite() || tag.to_finite() >= t->names.size()) stuck("case tag " + tag.to_string() + " out of range");
      size_t i = tag.to_finite();
      return eval(k[i + 1], push(env, t->names[i], v.snd()));
    }
    case TK::Map:
    case TK::Filter: {
      Value xs = eval(k[0], env);
      std::vector<Value> out;
      for (const Value& x : xs.items()) {
        Value r = eval(k[1], push(env, t->name, x));
        if (t->k == TK::Map)
          out.push_back(r);
        else if (r.truthy())
          out.push_back(x);
      }
      return Value::list(std::move(out));
    }
    case TK::First: {
      Value xs = eval(k[0], env);
      for (const Value& x : xs.items()) {
        Env inner = push(env, t->name, x);
        if (eval(k[1], inner).truthy()) return eval(k[2], inner);
      }
      return eval(k[3], env);
    }
    case TK::Real: return Value::realizer(k[0], eval(k[1], env));
    case TK::Prim: {
      std::vector<Value> args;
      for (const RTerm& e : k) args.push_back(eval(e, env));
      try {
        return t->prim->fn(*this, args);
      } catch (const Error& e) {
        if (e.kind() == "out-of-fuel" || e.kind() == "stuck-term") throw;
        stuck("prim " + t->name + ": " + e.what());
      }
    }
  }
  stuck("unknown term");
}

Value interpret(const Value& r, const Value& arg, uint64_t fuel) {
  Interp in(fuel);
  return in.apply(r, arg);
}

Value top_realizer(std::string_view program, Value param) {
  return Value::realizer(parse_rterm(program), std::move(param));
}

}  // namespace otmr
