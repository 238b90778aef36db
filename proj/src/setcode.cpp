#include "otmr/setcode.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <sstream>
#include <unordered_set>

#include "otmr/error.hpp"

namespace otmr {

namespace {

[[noreturn]] void invalid(const std::string& why) { throw Error("invalid-code", why); }

uint32_t finite_node(const Ordinal& a, uint32_t n) {
  if (!a.is_finite() || a.finite_part() >= n) invalid("node " + a.to_string() + " outside the domain");
  return static_cast<uint32_t>(a.finite_part());
}

}  // namespace

PreCode PreCode::from_edges(uint32_t n, const std::vector<std::pair<uint32_t, uint32_t>>& edges) {
  if (n == 0) invalid("empty domain");
  PreCode p;
  p.domain_ = Ordinal(n);
  p.members_.assign(n, {});
  p.containers_.assign(n, {});
  for (auto [m, c] : edges) {
    if (m >= n || c >= n) invalid("edge outside the domain");
    p.members_[c].push_back(m);
    p.containers_[m].push_back(c);
  }
  for (auto& v : p.members_) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
  }
  for (auto& v : p.containers_) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
  }
  p.validate_and_collapse();
  return p;
}

PreCode PreCode::from_pairs(const std::set<Ordinal>& pairs, const Ordinal& domain) {
  if (!domain.is_finite()) throw Error("unsupported", "explicit pre-codes must have a finite domain");
  uint32_t n = static_cast<uint32_t>(domain.finite_part());
  std::vector<std::pair<uint32_t, uint32_t>> edges;
  for (const Ordinal& g : pairs) {
    OrdPair pr = godel_unpair(g);
    edges.emplace_back(finite_node(pr.first, n), finite_node(pr.second, n));
  }
  return from_edges(n, edges);
}

PreCode PreCode::segment(const Ordinal& top) {
  PreCode p;
  p.segment_ = true;
  p.domain_ = top.succ();
  return p;
}

void PreCode::validate_and_collapse() {
  uint32_t n = static_cast<uint32_t>(members_.size());
  // Kahn's algorithm from the member-less nodes upward doubles as the
  // well-foundedness check and gives a collapse order.
  std::vector<uint32_t> pending(n);
  std::vector<uint32_t> order;
  for (uint32_t v = 0; v < n; ++v) {
    pending[v] = static_cast<uint32_t>(members_[v].size());
    if (pending[v] == 0) order.push_back(v);
  }
  for (size_t i = 0; i < order.size(); ++i)
    for (uint32_t c : containers_[order[i]])
      if (--pending[c] == 0) order.push_back(c);
  if (order.size() != n) invalid("membership graph has a cycle");
  values_.assign(n, HFSet());
  heights_.assign(n, 0);
  for (uint32_t v : order) {
    for (uint32_t m : members_[v]) heights_[v] = std::max(heights_[v], heights_[m] + 1);
    std::vector<HFSet> e;
    for (uint32_t m : members_[v]) e.push_back(values_[m]);
    values_[v] = HFSet::make(std::move(e));
    if (!by_value_.emplace(values_[v], v).second) invalid("membership graph is not extensional");
  }
  uint32_t tops = 0;
  for (uint32_t v = 0; v < n; ++v) tops += containers_[v].empty();
  if (tops != 1) invalid("membership graph has " + std::to_string(tops) + " top nodes");
}

uint32_t PreCode::size() const {
  if (segment_) {
    if (!domain_.is_finite()) throw Error("not-decidable", "infinite segment pre-code");
    return static_cast<uint32_t>(domain_.finite_part());
  }
  return static_cast<uint32_t>(members_.size());
}

Ordinal PreCode::top() const {
  if (segment_) return domain_.pred();
  for (uint32_t v = 0; v < members_.size(); ++v)
    if (containers_[v].empty()) return Ordinal(v);
  invalid("no top node");
}

uint32_t PreCode::node_index(const Ordinal& a) const { return finite_node(a, static_cast<uint32_t>(members_.size())); }

bool PreCode::has_edge(const Ordinal& member, const Ordinal& container) const {
  if (segment_) return member < container && container < domain_;
  if (!contains_node(member) || !contains_node(container)) return false;
  const auto& m = members_[node_index(container)];
  return std::binary_search(m.begin(), m.end(), node_index(member));
}

std::vector<Ordinal> PreCode::members(const Ordinal& node) const {
  std::vector<Ordinal> out;
  if (segment_) {
    if (!(node < domain_)) invalid("node " + node.to_string() + " outside the domain");
    if (!node.is_finite()) throw Error("not-decidable", "node " + node.to_string() + " has infinitely many members");
    for (uint64_t k = 0; k < node.finite_part(); ++k) out.emplace_back(k);
    return out;
  }
  for (uint32_t m : members_[node_index(node)]) out.emplace_back(m);
  return out;
}

uint32_t PreCode::height(const Ordinal& node) const {
  if (segment_) {
    if (!node.is_finite()) throw Error("not-decidable", "infinite height");
    return static_cast<uint32_t>(node.finite_part());
  }
  return heights_[node_index(node)];
}

HFSet PreCode::value(const Ordinal& node) const {
  if (segment_) {
    if (!(node < domain_)) invalid("node " + node.to_string() + " outside the domain");
    return HFSet::ordinal(node);
  }
  return values_[node_index(node)];
}

std::optional<Ordinal> PreCode::node_of(const HFSet& x) const {
  if (segment_) {
    auto a = x.as_ordinal();
    if (a && *a < domain_) return *a;
    return std::nullopt;
  }
  auto it = by_value_.find(x);
  if (it == by_value_.end()) return std::nullopt;
  return Ordinal(it->second);
}

std::set<Ordinal> PreCode::pairs() const {
  if (segment_) throw Error("not-decidable", "segment pre-codes have no finite pair list");
  std::set<Ordinal> out;
  for (uint32_t c = 0; c < members_.size(); ++c)
    for (uint32_t m : members_[c]) out.insert(godel_pair(Ordinal(m), Ordinal(c)));
  return out;
}

bool operator==(const PreCode& a, const PreCode& b) {
  return a.segment_ == b.segment_ && a.domain_ == b.domain_ && a.members_ == b.members_;
}

Code::Code(Ordinal r, std::shared_ptr<const PreCode> p) : rho(std::move(r)), pre(std::move(p)) {
  if (!pre) invalid("missing pre-code");
  if (!pre->contains_node(rho)) invalid("representative " + rho.to_string() + " outside the domain");
}

bool operator==(const Code& a, const Code& b) {
  return a.rho == b.rho && (a.pre == b.pre || *a.pre == *b.pre);
}

std::string Code::to_string() const {
  if (pre->is_segment()) return "segcode(" + rho.to_string() + "; " + pre->top().to_string() + ")";
  std::string s = "code(" + rho.to_string() + "; ";
  bool first = true;
  for (const Ordinal& g : pre->pairs()) {
    if (!first) s += ",";
    s += g.to_string();
    first = false;
  }
  return s + "; " + pre->domain().to_string() + ")";
}

namespace {

std::string trim(std::string_view s) {
  size_t b = s.find_first_not_of(" \t\n");
  if (b == std::string_view::npos) return "";
  size_t e = s.find_last_not_of(" \t\n");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : s) {
    if (ch == sep) {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += ch;
    }
  }
  out.push_back(trim(cur));
  return out;
}

}  // namespace

Code Code::parse(std::string_view text) {
  std::string t = trim(text);
  auto fail = [&](const std::string& why) -> Error { return Error("parse-error", "code '" + t + "': " + why); };
  bool seg = t.rfind("segcode(", 0) == 0;
  bool expl = t.rfind("code(", 0) == 0;
  if ((!seg && !expl) || t.back() != ')') throw fail("expected code(...) or segcode(...)");
  std::string body = t.substr(seg ? 8 : 5, t.size() - (seg ? 9 : 6));
  auto fields = split(body, ';');
  try {
    if (seg) {
      if (fields.size() != 2) throw fail("segcode takes rho and top");
      return Code(Ordinal::parse(fields[0]), std::make_shared<PreCode>(PreCode::segment(Ordinal::parse(fields[1]))));
    }
    if (fields.size() != 3) throw fail("code takes rho, pairs and domain");
    std::set<Ordinal> pairs;
    if (!fields[1].empty())
      for (const std::string& g : split(fields[1], ',')) pairs.insert(Ordinal::parse(g));
    auto pre = std::make_shared<PreCode>(PreCode::from_pairs(pairs, Ordinal::parse(fields[2])));
    return Code(Ordinal::parse(fields[0]), pre);
  } catch (const Error& e) {
    if (e.kind() == "parse-error" || e.kind() == "invalid-code") throw;
    throw fail(e.what());
  }
}

namespace {

std::shared_ptr<const PreCode> graph_of(const std::vector<HFSet>& nodes) {
  std::unordered_map<HFSet, uint32_t> index;
  for (uint32_t i = 0; i < nodes.size(); ++i) index.emplace(nodes[i], i);
  std::vector<std::pair<uint32_t, uint32_t>> edges;
  for (uint32_t i = 0; i < nodes.size(); ++i)
    for (const HFSet& e : nodes[i].elements()) edges.emplace_back(index.at(e), i);
  return std::make_shared<PreCode>(PreCode::from_edges(static_cast<uint32_t>(nodes.size()), edges));
}

}  // namespace

Code build_code(const HFSet& x) {
  if (x.is_infinite()) return Code(*x.as_ordinal(), std::make_shared<PreCode>(PreCode::segment(*x.as_ordinal())));
  std::vector<HFSet> nodes = transitive_closure(x);
  auto pre = graph_of(nodes);
  return Code(*pre->node_of(x), pre);
}

Code build_code_scrambled(const HFSet& x, uint64_t seed) {
  std::mt19937_64 rng(seed * 0x9e3779b97f4a7c15ULL + 17);
  if (x.is_infinite()) {
    Ordinal a = *x.as_ordinal();
    return Code(a, std::make_shared<PreCode>(PreCode::segment(a + Ordinal(seed % 3))));
  }
  HFSet ambient = x;
  if (seed % 2 == 1) {
    const auto& pool = cumulative_level(3);
    std::vector<HFSet> elems{x};
    for (uint64_t k = 1 + rng() % 3; k > 0; --k) elems.push_back(pool[rng() % pool.size()]);
    ambient = HFSet::make(std::move(elems));
  }
  std::vector<HFSet> nodes = transitive_closure(ambient);
  for (size_t i = nodes.size(); i > 1; --i) std::swap(nodes[i - 1], nodes[rng() % i]);
  auto pre = graph_of(nodes);
  return Code(*pre->node_of(x), pre);
}

HFSet decode_set(const Code& c) { return c.pre->value(c.rho); }

std::vector<Ordinal> essdom(const Code& c) {
  if (c.pre->is_segment()) {
    if (!c.rho.is_finite()) throw Error("not-decidable", "essential domain of " + c.to_string() + " is infinite");
    std::vector<Ordinal> out;
    for (uint64_t k = 0; k <= c.rho.finite_part(); ++k) out.emplace_back(k);
    return out;
  }
  std::set<Ordinal> seen;
  std::vector<Ordinal> stack{c.rho};
  while (!stack.empty()) {
    Ordinal b = stack.back();
    stack.pop_back();
    if (!seen.insert(b).second) continue;
    for (const Ordinal& a : c.pre->members(b)) stack.push_back(a);
  }
  return {seen.begin(), seen.end()};
}

std::vector<Ordinal> element_nodes(const Code& c) { return c.pre->members(c.rho); }

namespace {

// Decode(a,b,alpha) and Subset(a,b,alpha,beta) for explicit pre-codes, with
// memo tables for both directions of one code pair.
class Matcher {
 public:
  Matcher(const Code& a, const Code& b) : side_{&a, &b} {}

  std::optional<Ordinal> decode(int dir, const Ordinal& alpha) {
    const Code& a = *side_[dir];
    const Code& b = *side_[1 - dir];
    if (a.pre->is_segment() || b.pre->is_segment()) return b.pre->node_of(a.pre->value(alpha));
    uint32_t ai = static_cast<uint32_t>(alpha.finite_part());
    auto key = std::make_pair(dir, ai);
    if (auto it = dmemo_.find(key); it != dmemo_.end()) return it->second;
    std::optional<Ordinal> out;
    const auto& bm = b.pre->member_lists();
    if (a.pre->member_lists()[ai].empty()) {
      for (uint32_t g = 0; g < bm.size() && !out; ++g)
        if (bm[g].empty()) out = Ordinal(g);
    } else {
      // Candidates must agree in height and member count; without this the
      // mutual recursion can revisit a pending call.
      uint32_t h = a.pre->height(alpha);
      size_t k = a.pre->member_lists()[ai].size();
      for (uint32_t be = 0; be < bm.size() && !out; ++be) {
        if (bm[be].size() != k || b.pre->height(Ordinal(be)) != h) continue;
        if (subset(dir, alpha, Ordinal(be)) && subset(1 - dir, Ordinal(be), alpha)) out = Ordinal(be);
      }
    }
    dmemo_.emplace(key, out);
    return out;
  }

  bool subset(int dir, const Ordinal& alpha, const Ordinal& beta) {
    const Code& a = *side_[dir];
    const Code& b = *side_[1 - dir];
    if (a.pre->is_segment() || b.pre->is_segment()) return a.pre->value(alpha).subset_of(b.pre->value(beta));
    auto key = std::make_tuple(dir, static_cast<uint32_t>(alpha.finite_part()), static_cast<uint32_t>(beta.finite_part()));
    if (auto it = smemo_.find(key); it != smemo_.end()) return it->second;
    bool ok = true;
    for (const Ordinal& g : a.pre->members(alpha)) {
      auto d = decode(dir, g);
      if (!d || !b.pre->has_edge(*d, beta)) {
        ok = false;
        break;
      }
    }
    smemo_.emplace(key, ok);
    return ok;
  }

 private:
  const Code* side_[2];
  std::map<std::pair<int, uint32_t>, std::optional<Ordinal>> dmemo_;
  std::map<std::tuple<int, uint32_t, uint32_t>, bool> smemo_;
};

void require_node(const Code& c, const Ordinal& a) {
  if (!c.pre->contains_node(a)) invalid("node " + a.to_string() + " outside the domain of " + c.to_string());
}

}  // namespace

std::optional<Ordinal> decode_match(const Code& a, const Code& b, const Ordinal& alpha) {
  require_node(a, alpha);
  return Matcher(a, b).decode(0, alpha);
}

bool subset_check(const Code& a, const Code& b, const Ordinal& alpha, const Ordinal& beta) {
  require_node(a, alpha);
  require_node(b, beta);
  return Matcher(a, b).subset(0, alpha, beta);
}

Code merge_codes(const std::vector<Code>& s) {
  // Concatenate the essential parts of each input, then identify nodes that
  // code equal sets, keeping the first occurrence.
  struct Part {
    const Code* code;
    std::vector<Ordinal> nodes;
  };
  std::vector<Part> parts;
  for (const Code& c : s) {
    if (c.pre->is_segment()) throw Error("unsupported", "merging segment codes");
    parts.push_back({&c, essdom(c)});
  }
  std::vector<std::vector<uint32_t>> rep(parts.size());
  std::vector<std::pair<size_t, Ordinal>> reps;  // representative nodes by new index
  std::map<std::pair<size_t, size_t>, std::unique_ptr<Matcher>> matchers;
  for (size_t i = 0; i < parts.size(); ++i) {
    const Code& ci = *parts[i].code;
    for (const Ordinal& u : parts[i].nodes) {
      std::optional<uint32_t> found;
      size_t mu = ci.pre->members(u).size();
      for (uint32_t r = 0; r < reps.size() && !found; ++r) {
        auto [j, v] = reps[r];
        if (j == i) continue;
        const Code& cj = *parts[j].code;
        if (cj.pre->members(v).size() != mu) continue;
        auto& m = matchers[{i, j}];
        if (!m) m = std::make_unique<Matcher>(ci, cj);
        if (m->subset(0, u, v) && m->subset(1, v, u)) found = r;
      }
      if (!found) {
        found = static_cast<uint32_t>(reps.size());
        reps.emplace_back(i, u);
      }
      rep[i].push_back(*found);
    }
  }
  uint32_t top = static_cast<uint32_t>(reps.size());
  std::set<std::pair<uint32_t, uint32_t>> edges;
  for (size_t i = 0; i < parts.size(); ++i) {
    const Code& ci = *parts[i].code;
    std::map<Ordinal, uint32_t> local;
    for (size_t k = 0; k < parts[i].nodes.size(); ++k) local[parts[i].nodes[k]] = rep[i][k];
    for (const Ordinal& v : parts[i].nodes)
      for (const Ordinal& u : ci.pre->members(v)) edges.emplace(local.at(u), local.at(v));
    edges.emplace(local.at(ci.rho), top);
  }
  // Keep what lies below the new top and renumber in first-seen order.
  std::vector<std::vector<uint32_t>> mem(top + 1);
  for (auto [m, c] : edges) mem[c].push_back(m);
  std::vector<int64_t> renum(top + 1, -1);
  std::vector<uint32_t> stack{top};
  std::vector<uint32_t> keep;
  while (!stack.empty()) {
    uint32_t v = stack.back();
    stack.pop_back();
    if (renum[v] >= 0) continue;
    renum[v] = 0;
    keep.push_back(v);
    for (uint32_t m : mem[v]) stack.push_back(m);
  }
  std::sort(keep.begin(), keep.end());
  for (uint32_t k = 0; k < keep.size(); ++k) renum[keep[k]] = k;
  std::vector<std::pair<uint32_t, uint32_t>> out;
  for (auto [m, c] : edges)
    if (renum[m] >= 0 && renum[c] >= 0) out.emplace_back(renum[m], renum[c]);
  auto pre = std::make_shared<PreCode>(PreCode::from_edges(static_cast<uint32_t>(keep.size()), out));
  return Code(Ordinal(static_cast<uint64_t>(renum[top])), pre);
}

Code separate(const Code& c, const std::function<bool(const Code&)>& pred) {
  std::vector<Code> stack;
  for (const Ordinal& m : element_nodes(c)) {
    Code e = c.at(m);
    if (pred(e)) stack.push_back(e);
  }
  return merge_codes(stack);
}

std::string CodeIso::to_string() const {
  if (identity_upto) return "iso(id<=" + identity_upto->to_string() + ")";
  std::string s = "iso(";
  bool first = true;
  for (const auto& [k, v] : mapping) {
    if (!first) s += ",";
    s += k.to_string() + "->" + v.to_string();
    first = false;
  }
  return s + ")";
}

std::optional<CodeIso> build_iso(const Code& a, const Code& b) {
  if (a.pre->is_segment() && b.pre->is_segment()) {
    if (a.rho != b.rho) return std::nullopt;
    return CodeIso{{}, a.rho};
  }
  if ((a.pre->is_segment() && !a.rho.is_finite()) || (b.pre->is_segment() && !b.rho.is_finite())) return std::nullopt;
  Matcher m(a, b);
  CodeIso f;
  for (const Ordinal& alpha : essdom(a)) {
    auto beta = m.decode(0, alpha);
    if (!beta) return std::nullopt;
    f.mapping.emplace(alpha, *beta);
  }
  if (!is_code_iso(a, b, f)) return std::nullopt;
  return f;
}

bool is_code_iso(const Code& a, const Code& b, const CodeIso& f) {
  if (f.identity_upto) {
    return f.mapping.empty() && a.pre->is_segment() && b.pre->is_segment() && a.rho == *f.identity_upto &&
           b.rho == *f.identity_upto;
  }
  if ((a.pre->is_segment() && !a.rho.is_finite()) || (b.pre->is_segment() && !b.rho.is_finite())) return false;
  std::vector<Ordinal> da = essdom(a);
  std::vector<Ordinal> db = essdom(b);
  if (da.size() != f.mapping.size() || db.size() != f.mapping.size()) return false;
  std::set<Ordinal> range;
  for (const Ordinal& x : da) {
    auto it = f.mapping.find(x);
    if (it == f.mapping.end()) return false;
    range.insert(it->second);
  }
  if (range != std::set<Ordinal>(db.begin(), db.end())) return false;
  auto root = f.mapping.find(a.rho);
  if (root == f.mapping.end() || root->second != b.rho) return false;
  for (const Ordinal& u : da)
    for (const Ordinal& v : da)
      if (a.pre->has_edge(u, v) != b.pre->has_edge(f.mapping.at(u), f.mapping.at(v))) return false;
  return true;
}

Code seq_code(const std::vector<Code>& parts) {
  std::vector<Code> pairs;
  Code index = build_code(HFSet());
  for (size_t j = 0; j < parts.size(); ++j) {
    Code single = merge_codes({index});
    Code dbl = merge_codes({index, parts[j]});
    pairs.push_back(merge_codes({single, dbl}));
    index = build_code(HFSet::ordinal(j + 1));
  }
  return merge_codes(pairs);
}

std::vector<Code> seq_parts(const Code& c) {
  auto seq = as_seq(decode_set(c));
  if (!seq) invalid(c.to_string() + " does not code a sequence");
  std::vector<Code> out;
  for (const HFSet& x : *seq) out.push_back(c.at(*c.pre->node_of(x)));
  return out;
}

}  // namespace otmr
