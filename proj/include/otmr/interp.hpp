#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "otmr/formula.hpp"
#include "otmr/ordinal.hpp"
#include "otmr/setcode.hpp"
#include "otmr/sexpr.hpp"

namespace otmr {

struct RTermNode;
// A closed program term. Inside a realiser's program the names P (the
// parameter) and x (the argument) are bound.
using RTerm = std::shared_ptr<const RTermNode>;

struct EnvNode;
using Env = std::shared_ptr<const EnvNode>;

enum class VKind { Unit, Ord, Code, Pair, List, Realizer, Iso, Formula };

// Runtime values. Realisers are either top-level (program, parameter) pairs
// or closures produced by evaluating (lam v body); both are applied the
// same way.
//
// Text form, which is also a term evaluating to the value itself:
//   unit  (ord w+1)  (code "code(0; 1; 2)")  (pair A B)  (list A ...)
//   (formula F)  (real BODY PARAM)  (closure v BODY ((name VALUE) ...))
class Value {
 public:
  Value();  // unit

  static Value ord(const Ordinal& a);
  static Value code(const Code& c);
  static Value pair(Value a, Value b);
  static Value list(std::vector<Value> xs);
  static Value formula(const Formula& f);
  static Value iso(const CodeIso& f);
  static Value realizer(RTerm program, Value param);
  static Value closure(std::string var, RTerm body, Env env);
  static Value boolean(bool b) { return ord(Ordinal(b ? 1 : 0)); }

  VKind kind() const;
  bool is(VKind k) const { return kind() == k; }
  // Accessors raise stuck-term on the wrong kind.
  const Ordinal& as_ord() const;
  const Code& as_code() const;
  const Value& fst() const;
  const Value& snd() const;
  const std::vector<Value>& items() const;
  const Formula& as_formula() const;
  const CodeIso& as_iso() const;
  bool truthy() const;  // a nonzero ordinal

  bool is_closure() const;
  const RTerm& program() const;
  const Value& param() const;  // top-level realisers
  const std::string& var() const;
  const Env& env() const;

  const void* id() const { return n_.get(); }
  std::string to_string() const;
  static Value parse(std::string_view text);

  // Structural; realisers compare by their printed form.
  friend bool operator==(const Value& a, const Value& b);

  struct Node;

 private:
  explicit Value(std::shared_ptr<const Node> n) : n_(std::move(n)) {}
  std::shared_ptr<const Node> n_;
};

using Realizer = Value;

// Term syntax:
//   name | unit | digits | (ord a) | (code "..") | (formula F)
//   (lam v body) | (app f a ...) | (pair a b) | (fst e) | (snd e) | (list e ...)
//   (let v e body) | (if c then else)          c is tested for a nonzero ordinal
//   (case e (v0 body0) (v1 body1) ...)         e = (pair (ord i) payload)
//   (map v list body) | (filter v list body)
//   (first v list cond found else)
//   (real BODY PARAM) | (closure v BODY ((name VALUE) ...))
//   (prim name args ...)                      arity checked when parsed
RTerm parse_rterm(std::string_view text);
RTerm rterm_from_sexpr(const SExpr& e);
std::string rterm_to_string(const RTerm& t);

class Interp {
 public:
  explicit Interp(uint64_t fuel) : fuel_(fuel) {}

  Value eval(const RTerm& t, const Env& env);
  // Raises stuck-term unless f is a realiser.
  Value apply(const Value& f, const Value& arg);
  void tick(uint64_t n = 1);
  uint64_t fuel_left() const { return fuel_; }

 private:
  uint64_t fuel_;
};

// Big-step application of a realiser with a fresh fuel budget. Raises
// out-of-fuel or stuck-term.
Value interpret(const Value& r, const Value& arg, uint64_t fuel);

inline constexpr uint64_t kDefaultFuel = 200000;

// Primitive operations callable from terms; see prims.cpp for the table.
using PrimFn = std::function<Value(Interp&, const std::vector<Value>&)>;
struct PrimInfo {
  size_t arity;
  PrimFn fn;
};
const PrimInfo* find_prim(const std::string& name);

// Handy constructors for building programs in host code.
Value top_realizer(std::string_view program, Value param = Value());

}  // namespace otmr
