#pragma once

#include <optional>
#include <string>
#include <vector>

#include "otmr/formula.hpp"
#include "otmr/interp.hpp"

namespace otmr {

// Schema instances take a formula:
//   induction(φ)          x0 is the induction variable
//   delta0-separation(φ)  x0 is the element variable
//   delta0-collection(φ)  x0 ranges over the domain, x1 is the witness
// Every other free variable of φ is a parameter, universally quantified in
// front as one context (in increasing index order).
const std::vector<std::string>& axiom_ids();
bool is_schema(const std::string& name);
// False for the three principles realised by reading off the input code.
bool realised_uniformly(const std::string& name);

struct AxiomRealizer {
  std::string name;
  Formula formula;
  Value realizer;
  Context params;
};

// Raises unknown-axiom, and not-delta0 when a separation or collection
// instance is outside the fragment. A schema name without a formula, or a
// formula for a fixed axiom, is a usage error (bad-instance).
Formula axiom_formula(const std::string& name, const std::optional<Formula>& phi = std::nullopt);
AxiomRealizer realize_axiom(const std::string& name, const std::optional<Formula>& phi = std::nullopt);

}  // namespace otmr
