#pragma once

#include <string>
#include <unordered_map>
#include <vector>

#include "otmr/formula.hpp"
#include "otmr/realize.hpp"

namespace otmr {

// Provability in the background theory, answered from a finite database by
// bounded backward chaining. Answers:
//   yes      the formula is in the database, is a true Delta0 or Sigma1
//            sentence or a true closed sequence membership, or follows by
//            one of: conjunction of provable parts, a provable disjunct, an
//            implication whose consequent is provable or is the antecedent
//            or one of its conjuncts, an implication from a refuted closed
//            fact, generalisation of a provable body
//   no       a false Delta0 sentence or sequence membership not in the
//            database, or a conjunction with such a part
//   unknown  otherwise
// The database only grows, and a formula's answer only moves towards yes.
class ProvabilityOracle {
 public:
  explicit ProvabilityOracle(std::vector<Formula> db = {}, int depth = 3);
  // One formula per line; blank lines and lines starting with ';' are
  // skipped. Raises io-error and parse-error (with the line number).
  static ProvabilityOracle load(const std::string& path, int depth = 3);

  void add(const Formula& f);
  Verdict proves(const Formula& f) const;
  size_t size() const { return db_.size(); }
  const std::vector<Formula>& formulas() const { return db_; }

 private:
  Verdict chain(const Formula& f, int depth) const;

  std::vector<Formula> db_;
  std::unordered_map<Formula, bool> in_db_;
  int depth_;
  mutable std::unordered_map<Formula, Verdict> memo_;
};

bool is_finitary(const Formula& f);

// The plain verifier with provability added to the implication and
// universal clauses. Raises not-finitary.
Verdict verify_glued(const Value& r, const Formula& phi, const ProvabilityOracle& oracle, const CodeUniverse& U);

// The disjunction-property step: the selected disjunct and its realiser,
// after checking that r glued-realises the disjunction (raises not-realised
// otherwise) and that the disjunction is finitary.
Extracted dp_extract(const Value& r, const Formula& disj, const ProvabilityOracle& oracle, const CodeUniverse& U,
                     uint64_t fuel = kDefaultFuel);

}  // namespace otmr
