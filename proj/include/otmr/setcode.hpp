#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "otmr/hfset.hpp"
#include "otmr/ordinal.hpp"

namespace otmr {

// A membership graph presenting tc({X}) for a single X, with nodes named by
// ordinals below domain(). Two shapes exist:
//   explicit: finitely many nodes 0..n-1 with an arbitrary extensional,
//     well-founded edge set (member -> container);
//   segment: nodes are the ordinals <= top and b in c iff b < c, so node a
//     denotes the von Neumann ordinal a. This is the only way to present
//     infinite sets such as w.
// Validation runs in the factories; a PreCode value is always valid.
class PreCode {
 public:
  // Edges are (member, container) pairs over nodes < n.
  static PreCode from_edges(uint32_t n, const std::vector<std::pair<uint32_t, uint32_t>>& edges);
  // Edges given as godel_pair(member, container) values.
  static PreCode from_pairs(const std::set<Ordinal>& pairs, const Ordinal& domain);
  static PreCode segment(const Ordinal& top);

  bool is_segment() const { return segment_; }
  const Ordinal& domain() const { return domain_; }
  // Nodes of an explicit pre-code; segment pre-codes raise not-decidable
  // when infinite.
  uint32_t size() const;
  Ordinal top() const;

  bool contains_node(const Ordinal& a) const { return a < domain_; }
  bool has_edge(const Ordinal& member, const Ordinal& container) const;
  // Members of a node in increasing order.
  std::vector<Ordinal> members(const Ordinal& node) const;
  // Length of the longest membership chain below a node; equal sets have
  // equal heights, which keeps the decode recursion well-founded.
  uint32_t height(const Ordinal& node) const;
  // Mostowski collapse at a node.
  HFSet value(const Ordinal& node) const;
  // The node whose value is x, if any.
  std::optional<Ordinal> node_of(const HFSet& x) const;

  std::set<Ordinal> pairs() const;  // explicit only
  const std::vector<std::vector<uint32_t>>& member_lists() const { return members_; }

  friend bool operator==(const PreCode& a, const PreCode& b);

 private:
  PreCode() = default;
  void validate_and_collapse();
  uint32_t node_index(const Ordinal& a) const;

  bool segment_ = false;
  Ordinal domain_;
  std::vector<std::vector<uint32_t>> members_;
  std::vector<std::vector<uint32_t>> containers_;
  std::vector<uint32_t> heights_;
  std::vector<HFSet> values_;
  std::unordered_map<HFSet, uint32_t> by_value_;
};

struct Code {
  Ordinal rho;
  std::shared_ptr<const PreCode> pre;

  Code() = default;
  Code(Ordinal r, std::shared_ptr<const PreCode> p);  // raises invalid-code unless rho < domain
  Code at(const Ordinal& node) const { return Code(node, pre); }
  // code(rho; p1,p2,...; domain) or segcode(rho; top)
  std::string to_string() const;
  static Code parse(std::string_view text);

  friend bool operator==(const Code& a, const Code& b);
};

Code build_code(const HFSet& x);
// A code for x with a seeded node permutation and, for odd seeds, extra
// non-essential nodes from an ambient set containing x.
Code build_code_scrambled(const HFSet& x, uint64_t seed);

HFSet decode_set(const Code& c);
std::vector<Ordinal> essdom(const Code& c);
// Nodes whose values are elements of the coded set.
std::vector<Ordinal> element_nodes(const Code& c);

// Mutual recursion between matching and inclusion; memo tables live for one top-level call.
std::optional<Ordinal> decode_match(const Code& a, const Code& b, const Ordinal& alpha);
bool subset_check(const Code& a, const Code& b, const Ordinal& alpha, const Ordinal& beta);

// A code for {decode_set(a) | a in s}. Segment inputs are unsupported.
Code merge_codes(const std::vector<Code>& s);
Code separate(const Code& c, const std::function<bool(const Code&)>& pred);

// A map from essdom(a) to essdom(b). Codes of w-like sets built on segment
// pre-codes are related by the identity on [0, identity_upto] instead.
struct CodeIso {
  std::map<Ordinal, Ordinal> mapping;
  std::optional<Ordinal> identity_upto;
  std::string to_string() const;
  friend bool operator==(const CodeIso&, const CodeIso&) = default;
};

std::optional<CodeIso> build_iso(const Code& a, const Code& b);
// Structural check: root preserved, bijective between essential domains,
// membership preserved both ways.
bool is_code_iso(const Code& a, const Code& b, const CodeIso& f);

// Codes of sequences: functions with a finite ordinal domain given as sets
// of Kuratowski pairs.
Code seq_code(const std::vector<Code>& parts);
std::vector<Code> seq_parts(const Code& c);  // raises invalid-code if not a sequence

}  // namespace otmr
