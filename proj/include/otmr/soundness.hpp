#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "otmr/calculus.hpp"
#include "otmr/realize.hpp"

namespace otmr {

// A generated use of one sequent rule: true premise sequents realised by the
// universal construction, and the combinator's output for the conclusion.
struct RuleInstance {
  std::string rule;
  std::vector<Formula> premise_formulas;
  std::vector<Value> premises;
  Formula conclusion;
  Value realizer;
};

// Draws formulas until the rule's premises are true; nullopt if none of the
// attempts gives true premises.
std::optional<RuleInstance> random_instance(const std::string& rule, std::mt19937_64& rng, int attempts = 40);

struct RuleReport {
  std::string rule;
  size_t instances = 0;  // instances whose premises verified
  size_t accepted = 0;   // of those, conclusions that verified
  std::vector<std::string> failures;
};

// Generates instances until `count` have verified premises and checks each
// conclusion over V_rank plus the instance's constants.
RuleReport check_rule(const std::string& rule, size_t count, uint64_t seed, unsigned rank = 3);

// The depth-2 binary tree with every length-2 node in the bar, with Delta0
// sentences chosen so that each inner node follows from its children.
struct WalkingFixture {
  TreeSpec tree;
  std::map<TreeNode, Formula> phi;
  std::map<TreeNode, Value> premises;
  Formula conclusion;
};
WalkingFixture walking_fixture(uint64_t seed);

struct TransitFixture {
  TreeSpec tree;
  std::map<TreeNode, Formula> phi;
  std::map<TreeNode, uint32_t> vars;
  std::map<TreeNode, Value> premises;
  Formula root;
  Formula conclusion;
};
TransitFixture transit_fixture(uint64_t seed);

}  // namespace otmr
