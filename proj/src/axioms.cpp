#include "otmr/axioms.hpp"

#include <algorithm>

#include "otmr/error.hpp"
#include "otmr/realize.hpp"

namespace otmr {

namespace {

Term V(uint32_t i) { return Term::v(i); }
Formula mem(uint32_t a, uint32_t b) { return Formula::mem(V(a), V(b)); }
Formula eq(uint32_t a, uint32_t b) { return Formula::eq(V(a), V(b)); }
Formula all_in(uint32_t v, uint32_t bound, Formula body) { return make_bounded_forall({v}, V(bound), std::move(body)); }
Formula ex_in(uint32_t v, uint32_t bound, Formula body) { return make_bounded_exists({v}, V(bound), std::move(body)); }
Formula iff(const Formula& a, const Formula& b) {
  return Formula::conj({Formula::implies(a, b), Formula::implies(b, a)});
}
Formula all(uint32_t v, Formula body) { return Formula::forall({v}, std::move(body)); }
Formula ex(uint32_t v, Formula body) { return Formula::exists({v}, std::move(body)); }

// Realiser programs bind P to a list of formulas (open in the instance's
// parameters) that the program specialises with `(prim subst ..)` before
// handing them to the universal construction.
struct Built {
  Formula main;                // without the parameter prefix
  std::vector<Formula> aux;
  std::string core;            // program realising `main`
};

std::string ctx_list(const Context& c) {
  std::string s = "(list";
  for (uint32_t v : c) s += " " + std::to_string(v);
  return s + ")";
}

// "(prim phi (prim subst (prim nth P i) (list vars) (prim seq (list codes))))"
std::string phi_of(size_t aux, const Context& vars, const std::string& codes) {
  std::string target = "(prim nth P " + std::to_string(aux) + ")";
  if (vars.size() == 1) return "(prim phi (prim subst " + target + " " + std::to_string(vars[0]) + " " + codes + "))";
  return "(prim phi (prim subst " + target + " " + ctx_list(vars) + " (prim seq (list " + codes + "))))";
}

const std::string kMemRealizer = "(real (pair (prim match (fst x) (snd x)) P) (real (prim iso (fst x) (snd x)) unit))";

Built extensionality() {
  Formula same = all(2, iff(mem(2, 0), mem(2, 1)));
  return {all(0, all(1, Formula::implies(same, eq(0, 1)))), {},
          "(lam b (lam u (real (prim iso (fst x) (snd x)) unit)))"};
}

Built empty_set() {
  Formula body = all_in(1, 0, Formula::bottom());
  return {ex(0, body), {body}, "(let c (prim ordcode 0) (pair c " + phi_of(0, {0}, "c") + "))"};
}

Built pairing() {
  Formula body = all(3, iff(mem(3, 2), Formula::disj({eq(3, 0), eq(3, 1)})));
  return {all(0, all(1, ex(2, body))), {body},
          "(lam b (lam z (let c (prim merge (list x b)) (pair c " + phi_of(0, {0, 1, 2}, "x b c") + "))))"};
}

Built union_axiom() {
  Formula body = all(2, iff(mem(2, 1), ex_in(3, 0, mem(2, 3))));
  return {all(0, ex(1, body)), {body},
          "(lam z (let c (prim union x) (pair c " + phi_of(0, {0, 1}, "x c") + ")))"};
}

Built infinity() {
  uint32_t fresh = 3;
  Formula closed_up = all_in(1, 0, ex_in(2, 0, lib::successor(V(2), V(1), fresh)));
  Formula made_of = all_in(1, 0, Formula::disj({Formula::eq(V(1), Term::c(HFSet())), ex_in(2, 1, lib::successor(V(1), V(2), fresh))}));
  Formula body = Formula::conj({Formula::mem(Term::c(HFSet()), V(0)), closed_up, made_of});
  return {ex(0, body), {body}, "(let c (prim ordcode (ord w)) (pair c " + phi_of(0, {0}, "c") + "))"};
}

Built weak_choice() {
  uint32_t fresh = 5;
  Formula picks = all_in(2, 0, Formula::implies(ex(3, mem(3, 2)), ex_in(4, 2, lib::app(V(1), V(2), V(4), fresh))));
  return {all(0, ex(1, picks)), {picks},
          "(lam z (let c (prim wchoice x) (pair c " + phi_of(0, {0, 1}, "x c") + ")))"};
}

Built choice() {
  uint32_t fresh = 5;
  Formula inhabited = all_in(2, 0, ex(3, mem(3, 2)));
  Formula picks = all_in(2, 0, ex_in(4, 2, lib::app(V(1), V(2), V(4), fresh)));
  return {all(0, Formula::implies(inhabited, ex(1, picks))), {picks},
          "(lam s (lam z (let c (prim fchoice x) (pair c " + phi_of(0, {0, 1}, "x c") + "))))"};
}

Built regularity() {
  Formula minimal = Formula::conj({mem(1, 0), all_in(2, 1, Formula::neg(mem(2, 0)))});
  return {all(0, Formula::implies(ex(1, mem(1, 0)), ex(1, minimal))), {minimal},
          "(lam s (lam z (let c (prim minimal x) (pair c " + phi_of(0, {0, 1}, "x c") + "))))"};
}

// x1 is a bijection from the ordinal x2 onto x0.
Built well_ordering() {
  uint32_t fresh = 6;
  auto app = [&](uint32_t z, uint32_t v) { return lib::app(V(1), V(z), V(v), fresh); };
  Formula onto = all_in(3, 0, ex_in(4, 2, app(4, 3)));
  Formula into = all_in(4, 2, ex_in(3, 0, app(4, 3)));
  Formula injective =
      all_in(4, 2, all_in(5, 2, all_in(3, 0, Formula::implies(Formula::conj({app(4, 3), app(5, 3)}), eq(4, 5)))));
  Formula w = Formula::conj({lib::ordinal(V(2), fresh), lib::fun_dom(V(1), V(2), fresh), onto, into, injective});
  return {all(0, ex(1, ex(2, w))), {w},
          "(lam z (let f (prim enumerate x) (pair f (lam z (let d (prim ordcode (prim card x)) (pair d " +
              phi_of(0, {0, 1, 2}, "x f d") + "))))))"};
}

// Induction along the elements of b, built bottom-up by the induct primitive.
Built induction(const Formula& phi) {
  uint32_t z = max_var_index(phi) + 1;
  Formula below = all_in(z, 0, substitute_terms(phi, {0}, {V(z)}));
  Formula step = all(0, Formula::implies(below, phi));
  return {Formula::implies(step, all(0, phi)), {}, "(lam b (prim induct x b))"};
}

Built separation(const Formula& phi) {
  uint32_t a = max_var_index(phi) + 1, b = a + 1, c = a + 2;
  Formula in_sep = Formula::conj({mem(c, a), substitute_terms(phi, {0}, {V(c)})});
  Formula body = all(c, iff(mem(c, b), in_sep));
  return {all(a, ex(b, body)), {phi, body},
          "(lam z (let c (prim sep x (prim nth P 0) 0) (pair c " + phi_of(1, {a, b}, "x c") + ")))"};
}

Built collection(const Formula& phi) {
  uint32_t a = std::max<uint32_t>(max_var_index(phi), 1) + 1, b = a + 1;
  Formula hyp = all_in(0, a, ex(1, phi));
  Formula bounded = all_in(0, a, ex_in(1, b, phi));
  std::string witness = "(fst (app r e " + kMemRealizer + " 0))";
  return {all(a, Formula::implies(hyp, ex(b, bounded))), {bounded},
          "(lam r (lam z (let c (prim merge (map e (prim elements x) " + witness + ")) (pair c " +
              phi_of(0, {a, b}, "x c") + "))))"};
}

Built build(const std::string& name, const std::optional<Formula>& phi) {
  if (is_schema(name) != phi.has_value())
    throw Error("bad-instance", name + (phi ? " takes no formula" : " needs a formula"));
  if (name == "extensionality") return extensionality();
  if (name == "empty-set") return empty_set();
  if (name == "pairing") return pairing();
  if (name == "union") return union_axiom();
  if (name == "infinity") return infinity();
  if (name == "weak-choice") return weak_choice();
  if (name == "choice") return choice();
  if (name == "regularity") return regularity();
  if (name == "well-ordering") return well_ordering();
  if (name == "induction") return induction(*phi);
  if (name != "delta0-separation" && name != "delta0-collection") throw Error("unknown-axiom", name);
  if (!is_delta0(classify(*phi))) throw Error("not-delta0", phi->to_string());
  return name == "delta0-separation" ? separation(*phi) : collection(*phi);
}

Context params_of(const std::string& name, const std::optional<Formula>& phi) {
  if (!phi) return {};
  uint32_t own = name == "delta0-collection" ? 2 : 1;
  Context out;
  for (uint32_t v : free_vars(*phi))
    if (v >= own) out.push_back(v);
  return out;
}

}  // namespace

const std::vector<std::string>& axiom_ids() {
  static const std::vector<std::string> ids = {
      "extensionality", "empty-set",   "pairing", "union",      "induction", "delta0-separation",
      "delta0-collection", "infinity", "weak-choice", "regularity", "choice", "well-ordering"};
  return ids;
}

bool is_schema(const std::string& name) {
  return name == "induction" || name == "delta0-separation" || name == "delta0-collection";
}

bool realised_uniformly(const std::string& name) {
  return name != "regularity" && name != "choice" && name != "well-ordering";
}

Formula axiom_formula(const std::string& name, const std::optional<Formula>& phi) {
  return realize_axiom(name, phi).formula;
}

AxiomRealizer realize_axiom(const std::string& name, const std::optional<Formula>& phi) {
  if (std::find(axiom_ids().begin(), axiom_ids().end(), name) == axiom_ids().end()) throw Error("unknown-axiom", name);
  Built b = build(name, phi);
  Context params = params_of(name, phi);
  std::vector<Value> aux;
  for (const Formula& f : b.aux) aux.push_back(Value::formula(f));
  if (params.empty())
    return {name, b.main, Value::realizer(parse_rterm(b.core), Value::list(aux)), {}};
  std::string program =
      "(let P (map f P (prim subst f " + ctx_list(params) + " x)) (lam x " + b.core + "))";
  return {name, Formula::forall(params, b.main), Value::realizer(parse_rterm(program), Value::list(aux)), params};
}

}  // namespace otmr
