#pragma once

#include <functional>
#include <map>
#include <vector>

#include "otmr/formula.hpp"
#include "otmr/hfset.hpp"
#include "otmr/setcode.hpp"

namespace otmr {

using Assignment = std::map<uint32_t, HFSet>;

// Canonical code of x, memoized per thread.
const Code& canonical_code(const HFSet& x);

// Bounded quantifiers over an infinite bound are searched through this many
// elements; a search that neither succeeds nor refutes raises not-decidable.
inline constexpr uint64_t kInfiniteSearchCap = 256;

// Recursive truth for Delta0 formulas, working on codes: atoms go through
// decode_match, bounded quantifiers run over the element nodes of the
// bound's code. Raises not-delta0 outside the fragment and unbound-variable.
bool eval_delta0(const Formula& f, const Assignment& a = {});

// Classical satisfaction with every quantifier ranging over `universe`.
// Guards of the form v ∈ t found in conjunctive position narrow the search
// without changing the result.
bool eval_bruteforce(const Formula& f, const std::vector<HFSet>& universe, const Assignment& a = {});

// V_rank, plus tc of each extra set, plus the domain ordinal of every
// sequence object present so that "x̄ ∈ y" can be witnessed. Infinite extras
// are added as elements without their (infinite) closure.
std::vector<HFSet> make_universe(unsigned rank, const std::vector<HFSet>& extra = {});

// Enumerates assignments of ctx over `universe`, in canonical order with
// guard pruning read from `guards` (a formula every accepted assignment must
// satisfy). `a` holds the current assignment while `visit` runs. Returns
// true as soon as visit does.
bool search_block(const Context& ctx, const Formula& guards, const std::vector<HFSet>& universe, Assignment& a,
                  const std::function<bool()>& visit);

}  // namespace otmr
