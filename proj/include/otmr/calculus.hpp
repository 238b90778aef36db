#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "otmr/formula.hpp"
#include "otmr/interp.hpp"

namespace otmr {

// φ ⊢_ctx ψ is the sentence ∀ctx (φ → ψ); with an empty context it is φ → ψ.
// A realiser of it takes a context code, then a realiser of φ; with an empty
// context it takes the realiser of φ directly.
Formula sequent(const Context& ctx, const Formula& phi, const Formula& psi);

// Side data for sequent_combinator. `ctx` is always x̄ below.
//   identity                0 premises  φ ⊢x̄ φ
//   substitution            1  φ ⊢from ψ   gives φ[t̄/from] ⊢x̄ ψ[t̄/from];
//                              each term is a variable of x̄ or a constant
//   cut                     2  φ ⊢x̄ ψ, ψ ⊢x̄ θ   gives φ ⊢x̄ θ
//   equality-refl           0  ⊤ ⊢x̄ x = x
//   equality-subst          0  x = y ∧ φ[x/z] ⊢x̄ φ[y/z]
//   conj-elim               0  ⋀φ ⊢x̄ φ_index
//   conj-intro              n  θ ⊢x̄ φ_i for i < n   gives θ ⊢x̄ ⋀φ
//   disj-intro              0  φ_index ⊢x̄ ⋁φ
//   disj-elim               n  φ_i ⊢x̄ θ for i < n   gives ⋁φ ⊢x̄ θ
//   imp-intro               1  φ ∧ ψ ⊢x̄ θ   gives φ ⊢x̄ ψ → θ
//   imp-elim                1  φ ⊢x̄ ψ → θ   gives φ ∧ ψ ⊢x̄ θ
//   exists-left             1  φ ⊢x̄ȳ ψ      gives ∃ȳφ ⊢x̄ ψ
//   exists-left-inverse     1  ∃ȳφ ⊢x̄ ψ     gives φ ⊢x̄ȳ ψ
//   forall-right            1  φ ⊢x̄ȳ ψ      gives φ ⊢x̄ ∀ȳψ
//   forall-right-inverse    1  φ ⊢x̄ ∀ȳψ     gives φ ⊢x̄ȳ ψ
//   small-distributivity    0  ⋀_{i<count}(φ ∨ ψ_i) ⊢x̄ φ ∨ ⋀ψ_i
//                           1  a realiser of the closed conjunction gives one
//                              of the disjunction
// Raises unknown-rule and arity-mismatch.
struct RuleData {
  Context ctx;
  Context inner;            // ȳ
  uint64_t index = 0;
  uint64_t count = 0;       // conj-intro, disj-elim, small-distributivity
  Context from;             // substitution: the premise context
  std::vector<Term> terms;  // substitution: one term per variable of `from`
};

Value sequent_combinator(const std::string& rule, const std::vector<Value>& premises, const RuleData& d);
const std::vector<std::string>& rule_ids();

// Finite trees of sequences over γ = {0..gamma-1} of length at most depth.
using TreeNode = std::vector<uint32_t>;
struct TreeSpec {
  uint32_t gamma = 2;
  uint32_t depth = 1;
  std::vector<TreeNode> bar;  // minimal elements of the bar
};
// Raises bar-not-covering unless every node of length depth extends a bar
// node.
void check_bar(const TreeSpec& t);
// Nodes that are proper prefixes of bar nodes, in breadth-first order.
std::vector<TreeNode> inner_nodes(const TreeSpec& t);

// ⋀_{f ∈ B} ⋁_{β < |f|} φ_{f|β+1}, for sentences φ_f.
Formula bar_conjunction(const TreeSpec& t, const std::map<TreeNode, Formula>& phi);
// ⋀_{g child of f} φ_g → φ_f, the successor premise at an inner node.
Formula walking_premise(const TreeSpec& t, const std::map<TreeNode, Formula>& phi, const TreeNode& f);

// Realiser of bar_conjunction → φ_∅ from successor premises at every inner
// node. Runs the back-and-forth walk: pull one realiser per bar node out of
// the input, then climb whenever the current node is realised, combine
// children when they all are, and otherwise descend into the first
// unrealised child.
Value walking(const TreeSpec& t, const std::map<TreeNode, Value>& successor_premises);

// The limit step: r2 realises φ_f → ⋁_{α<β} φ_{f|α}; returns (α, realiser of
// φ_{f|α}).
std::pair<uint64_t, Value> retract_limit(const Value& r2, const Value& rf, const Formula& disjunction,
                                         uint64_t fuel = kDefaultFuel);

// Transfinite transitivity over a finite tree where each non-root node g
// binds one variable vars[g]; the context of φ_f lists the variables along f.
std::vector<uint32_t> path_vars(const std::map<TreeNode, uint32_t>& vars, const TreeNode& f);
// φ_f ⊢_{path vars} ⋁_{g child of f} ∃x_g φ_g.
Formula transit_premise(const TreeSpec& t, const std::map<TreeNode, Formula>& phi,
                        const std::map<TreeNode, uint32_t>& vars, const TreeNode& f);
// ⋁_{f ∈ B} ∃(path vars of f) ⋀_{β<|f|} φ_{f|β+1}; when the root is the bar
// the only disjunct is φ_∅.
Formula transit_conclusion(const TreeSpec& t, const std::map<TreeNode, Formula>& phi,
                           const std::map<TreeNode, uint32_t>& vars);
// Realiser of φ_∅ → transit_conclusion, walking forward from the root and
// collecting witnesses until a bar node is reached.
Value transfinite_transitivity(const TreeSpec& t, const std::map<TreeNode, Value>& premises);

// Primitive bodies used by the realisers above.
Value walk_prim(Interp& in, const std::vector<Value>& args);
Value transit_prim(Interp& in, const std::vector<Value>& args);

}  // namespace otmr
