#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "otmr/formula.hpp"
#include "otmr/interp.hpp"
#include "otmr/truth.hpp"

namespace otmr {

// The finite quantification domain for verification: every set in `sets`
// is presented by its canonical code and `scrambles` scrambled ones. The set
// list is closed under elements; codes for sets outside it (witnesses that
// realisers emit) are produced on demand.
class CodeUniverse {
 public:
  explicit CodeUniverse(std::vector<HFSet> sets, unsigned scrambles = 2, uint64_t fuel = kDefaultFuel);
  // V_rank plus the closure of `extra`.
  static CodeUniverse level(unsigned rank, const std::vector<HFSet>& extra = {}, unsigned scrambles = 2,
                            uint64_t fuel = kDefaultFuel);
  // V_rank plus the closure of the constants of f.
  static CodeUniverse for_formula(const Formula& f, unsigned rank, unsigned scrambles = 2,
                                  uint64_t fuel = kDefaultFuel);

  const std::vector<HFSet>& sets() const { return sets_; }
  unsigned scrambles() const { return scrambles_; }
  uint64_t fuel() const { return fuel_; }

  // Canonical code first, distinct codes only.
  const std::vector<Code>& codes_for(const HFSet& x) const;
  // Codes for a context value: set codes when xs has one entry, sequence
  // codes otherwise. Empty when a sequence code cannot be built (infinite
  // entries).
  std::vector<Code> codes_for_tuple(const std::vector<HFSet>& xs) const;

 private:
  std::vector<HFSet> sets_;
  unsigned scrambles_;
  uint64_t fuel_;
  mutable std::unordered_map<HFSet, std::vector<Code>> codes_;
};

enum class Verdict { No, Yes, Unknown };
using ProvesFn = std::function<Verdict(const Formula&)>;

// Clause-by-clause check of r ⊩ φ for a sentence φ over U. The implication
// clause ranges over candidate_pool(antecedent) filtered by verify. A stuck
// application counts as failure; out-of-fuel propagates.
bool verify(const Value& r, const Formula& phi, const CodeUniverse& U);
// verify plus single-valuedness: at each universal clause, every code of the
// same tuple must lead to the same decoded outputs (disjunct indices and
// decoded witnesses) throughout the nested verification.
bool verify_uniform(const Value& r, const Formula& phi, const CodeUniverse& U);
// The general form: `proves`, when given, adds the provability conjunct to
// the implication and universal clauses (the glued relation).
Verdict verify_with(const Value& r, const Formula& phi, const CodeUniverse& U, bool uniform,
                    const ProvesFn* proves = nullptr);

// Candidates for "every s realising A": synthesized realisers (every true
// disjunct, several witnesses) plus a fixed library of generic realisers.
// Unfiltered; verify keeps only the ones that realise A.
std::vector<Value> candidate_pool(const Formula& a);

// Truth and witness searches during synthesis quantify over V_rank plus the
// closure of the sentence's constants.
unsigned synthesis_rank();
void set_synthesis_rank(unsigned rank);

// Truth of a sentence: eval_delta0 inside the fragment, part by part for
// connectives, brute force over the synthesis universe for quantifiers.
bool sentence_truth(const Formula& s);

// The universal realiser construction for a sentence assumed true. Cheap
// and lazy: conjunctions and universal clauses defer to `(prim phi ..)` on
// demand, disjunctions and existentials pick the first true option in
// canonical order and emit canonical codes. Raises stuck-term when a choice
// has no true option.
Value synthesize(const Formula& s);
// Several realisers of a true sentence: one per true disjunct or witness, up
// to `cap`.
std::vector<Value> synthesize_alternatives(const Formula& s, size_t cap = 3);

// Entry point for open formulas: substitutes the assignment, raises
// not-in-fragment outside Delta0/Sigma1, refuses (nullopt) when false.
std::optional<Value> phi_universal(const Formula& f, const Assignment& a = {});

const Value& eq_realizer();   // (a, b) -> the code isomorphism
const Value& mem_realizer();  // (a, b) -> (matching node, eq_realizer)
std::optional<Value> realize_eq(const HFSet& x, const HFSet& y);
std::optional<Value> realize_mem(const HFSet& x, const HFSet& y);

struct Extracted {
  uint64_t index = 0;
  Value inner;
  Formula branch;
};
// r(0) = (index, inner) for a disjunction.
Extracted extract_disjunct(const Value& r, const Formula& disj, uint64_t fuel = kDefaultFuel);

struct Witness {
  Code code;
  std::vector<HFSet> values;
  Value inner;
  Formula instance;  // the body with the witness substituted
};
Witness extract_witness(const Value& r, const Formula& exists, uint64_t fuel = kDefaultFuel);

// Decoded values of a context code: the set itself for length 1, the
// sequence entries otherwise. Raises stuck-term on a length mismatch.
std::vector<HFSet> decode_context(const Code& c, size_t length);
Code context_code(const std::vector<Code>& parts);

}  // namespace otmr
