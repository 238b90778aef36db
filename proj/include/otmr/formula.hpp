#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "otmr/hfset.hpp"
#include "otmr/ordinal.hpp"
#include "otmr/sexpr.hpp"

namespace otmr {

struct Term {
  bool is_var = true;
  uint32_t var = 0;
  HFSet value;

  static Term v(uint32_t i) { return Term{true, i, HFSet()}; }
  static Term c(const HFSet& x) { return Term{false, 0, x}; }
  std::string to_string() const;
  friend bool operator==(const Term&, const Term&) = default;
};

using Context = std::vector<uint32_t>;

enum class FKind { Bottom, Mem, Eq, Implies, Conj, Disj, Exists, Forall };

class Formula;

// Immutable, shared formula tree. Conjunctions and disjunctions have either
// finitely many parts or length w, in which case part n is prefix[n] for
// n < |prefix| and cycle[(n - |prefix|) mod |cycle|] afterwards.
class Formula {
 public:
  Formula();  // bottom

  static Formula bottom();
  static Formula mem(Term a, Term b);
  static Formula eq(Term a, Term b);
  static Formula implies(Formula a, Formula b);
  static Formula conj(std::vector<Formula> parts);
  static Formula disj(std::vector<Formula> parts);
  static Formula conj_omega(std::vector<Formula> prefix, std::vector<Formula> cycle);
  static Formula disj_omega(std::vector<Formula> prefix, std::vector<Formula> cycle);
  static Formula exists(Context ctx, Formula body);
  static Formula forall(Context ctx, Formula body);
  static Formula neg(Formula a) { return implies(std::move(a), bottom()); }
  static Formula top() { return conj({}); }

  FKind kind() const;
  const Term& left() const;
  const Term& right() const;
  const Formula& ant() const;
  const Formula& cons() const;

  // Connectives.
  bool is_omega() const;
  Ordinal length() const;
  const Formula& part(uint64_t i) const;
  // The parts that occur at all: every part when finite, prefix + cycle for w.
  const std::vector<Formula>& prefix() const;
  const std::vector<Formula>& cycle() const;
  std::vector<Formula> distinct_parts() const;

  // Quantifiers.
  const Context& ctx() const;
  const Formula& body() const;

  size_t hash() const;
  std::string to_string() const;
  static Formula parse(std::string_view text);
  static Formula from_sexpr(const SExpr& e);

  friend bool operator==(const Formula& a, const Formula& b);

  struct Node;

 private:
  explicit Formula(std::shared_ptr<const Node> n) : n_(std::move(n)) {}
  std::shared_ptr<const Node> n_;
};

std::set<uint32_t> free_vars(const Formula& f);
uint32_t max_var_index(const Formula& f);  // 0 when there are no variables
std::set<HFSet> constants(const Formula& f);

// Replaces free occurrences of ctx[i] by values[i]; raises length-mismatch.
Formula substitute(const Formula& f, const Context& ctx, const std::vector<HFSet>& values);
Formula substitute_terms(const Formula& f, const Context& ctx, const std::vector<Term>& values);

// Library formulas over Kuratowski pairs. Bound variables are taken from
// `fresh` upward and the counter is advanced past them.
namespace lib {
Formula singleton(Term u, Term a, uint32_t& fresh);     // u = {a}
Formula doubleton(Term u, Term a, Term b, uint32_t& fresh);  // u = {a, b}
Formula kpair(Term p, Term a, Term b, uint32_t& fresh);  // p = <a, b>
Formula ordinal(Term d, uint32_t& fresh);                // d is a von Neumann ordinal
// f is a function with domain d, as a set of pairs.
Formula fun_dom(Term f, Term d, uint32_t& fresh);
// f(z) = x, as "some p in f is <z, x>".
Formula app(Term f, Term z, Term x, uint32_t& fresh);
Formula successor(Term s, Term y, uint32_t& fresh);  // s = y ∪ {y}
}  // namespace lib

// "x̄ ∈ y" expanded: y has an element z that is a function on an ordinal
// with z(i) = x_i for each i, including i = 0. Fresh variables start above
// every index in xs and y.
Formula expand_seq_membership(const Context& ctx, const Term& y);
Formula seq_membership(const std::vector<Term>& xs, const Term& y, uint32_t base);
// Recognizes an expansion (possibly after substitution of its free terms).
struct SeqMembership {
  std::vector<Term> xs;
  Term y;
};
std::optional<SeqMembership> match_seq_membership(const Formula& f);

Formula make_bounded_forall(const Context& ctx, const Term& y, Formula body);
Formula make_bounded_exists(const Context& ctx, const Term& y, Formula body);

// A quantifier recognized as bounded: the guard is ctx ∈ bound.
struct Bounded {
  bool universal;
  Context ctx;
  Term bound;
  Formula matrix;
};
std::optional<Bounded> match_bounded(const Formula& f);

enum class FClass { Delta0Omega, Sigma1Omega, Delta0Inf, Sigma1Inf, General };
FClass classify(const Formula& f);
std::string class_name(FClass c);
bool is_delta0(FClass c);
bool is_sigma1(FClass c);  // includes the Delta0 classes

// The rejected alternative bounded quantifier (a universal whose guard is a
// conjunction "x ∈ y ∧ φ" instead of an implication). Not a connective;
// kept only so tests can show it is not recognized as bounded.
Formula underline_forall_fixture(uint32_t x, const Term& y, Formula body);

}  // namespace otmr

template <>
struct std::hash<otmr::Formula> {
  size_t operator()(const otmr::Formula& f) const;
};
