#include "otmr/hfset.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <mutex>
#include <unordered_map>
#include <unordered_set>

#include "otmr/error.hpp"

namespace otmr {

struct HFSet::Node {
  std::vector<HFSet> elems;
  bool inf = false;
  Ordinal ord;  // the ordinal value for infinite nodes
  uint32_t rank = 0;
  size_t hash = 0;
  uint64_t id = 0;
  std::optional<Ordinal> as_ord;
};

namespace {

struct VecHash {
  size_t operator()(const std::vector<const void*>& v) const {
    size_t h = 0x9e3779b97f4a7c15ULL;
    for (const void* p : v) h = (h ^ reinterpret_cast<size_t>(p)) * 0x100000001b3ULL;
    return h;
  }
};

struct Pool {
  std::mutex mu;
  std::deque<HFSet::Node> nodes;
  std::unordered_map<std::vector<const void*>, const HFSet::Node*, VecHash> finite;
  std::map<Ordinal, const HFSet::Node*> infinite;
};

Pool& pool() {
  static Pool* p = new Pool();
  return *p;
}

size_t mix(size_t h, size_t v) { return (h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2))); }

}  // namespace

HFSet::HFSet() {
  static const Node* empty_node = [] {
    Pool& p = pool();
    std::lock_guard<std::mutex> lock(p.mu);
    p.nodes.emplace_back();
    Node* n = &p.nodes.back();
    n->hash = 0x51ed27;
    n->as_ord = Ordinal(0);
    p.finite.emplace(std::vector<const void*>{}, n);
    return n;
  }();
  n_ = empty_node;
}

std::strong_ordering operator<=>(const HFSet& a, const HFSet& b) {
  if (a.n_ == b.n_) return std::strong_ordering::equal;
  if (a.n_->inf != b.n_->inf) return a.n_->inf ? std::strong_ordering::greater : std::strong_ordering::less;
  if (a.n_->inf) return a.n_->ord <=> b.n_->ord;
  if (a.n_->rank != b.n_->rank) return a.n_->rank <=> b.n_->rank;
  if (a.n_->elems.size() != b.n_->elems.size()) return a.n_->elems.size() <=> b.n_->elems.size();
  for (size_t i = 0; i < a.n_->elems.size(); ++i) {
    auto c = a.n_->elems[i] <=> b.n_->elems[i];
    if (c != 0) return c;
  }
  return std::strong_ordering::equal;
}

HFSet HFSet::make(std::vector<HFSet> elems) {
  std::sort(elems.begin(), elems.end());
  elems.erase(std::unique(elems.begin(), elems.end()), elems.end());
  std::vector<const void*> key;
  key.reserve(elems.size());
  for (const HFSet& e : elems) key.push_back(e.n_);
  HFSet empty_set;  // ensures the empty node exists before locking
  Pool& p = pool();
  std::lock_guard<std::mutex> lock(p.mu);
  auto it = p.finite.find(key);
  if (it != p.finite.end()) return HFSet(it->second);
  Node n;
  n.elems = std::move(elems);
  size_t h = 0xcbf29ce484222325ULL;
  uint64_t max_ord = 0;
  bool all_ord = true;
  for (const HFSet& e : n.elems) {
    if (e.n_->inf) throw Error("not-decidable", "hereditarily finite sets cannot contain infinite ordinals");
    n.rank = std::max(n.rank, e.n_->rank + 1);
    h = mix(h, e.n_->hash);
    if (e.n_->as_ord)
      max_ord = std::max(max_ord, e.n_->as_ord->finite_part());
    else
      all_ord = false;
  }
  n.hash = mix(h, n.elems.size());
  if (all_ord && !n.elems.empty() && max_ord + 1 == n.elems.size()) n.as_ord = Ordinal(n.elems.size());
  n.id = p.nodes.size();
  p.nodes.push_back(std::move(n));
  const Node* stored = &p.nodes.back();
  p.finite.emplace(std::move(key), stored);
  return HFSet(stored);
}

HFSet HFSet::ordinal(const Ordinal& a) {
  if (a.is_finite()) {
    std::vector<HFSet> elems;
    HFSet cur;
    for (uint64_t k = 0; k < a.finite_part(); ++k) {
      elems.push_back(cur);
      cur = make(elems);
    }
    return cur;
  }
  Pool& p = pool();
  std::lock_guard<std::mutex> lock(p.mu);
  auto it = p.infinite.find(a);
  if (it != p.infinite.end()) return HFSet(it->second);
  Node n;
  n.inf = true;
  n.ord = a;
  n.as_ord = a;
  n.rank = UINT32_MAX;
  n.hash = std::hash<std::string>{}(a.to_string()) ^ 0x1f1f;
  n.id = p.nodes.size();
  p.nodes.push_back(std::move(n));
  const Node* stored = &p.nodes.back();
  p.infinite.emplace(a, stored);
  return HFSet(stored);
}

bool HFSet::is_empty() const { return !n_->inf && n_->elems.empty(); }
bool HFSet::is_infinite() const { return n_->inf; }

const std::vector<HFSet>& HFSet::elements() const {
  if (n_->inf) throw Error("not-decidable", "cannot enumerate the elements of " + to_string());
  return n_->elems;
}

size_t HFSet::size() const { return elements().size(); }
uint32_t HFSet::rank() const { return n_->rank; }
size_t HFSet::hash() const { return n_->hash; }
uint64_t HFSet::id() const { return n_->id; }
std::optional<Ordinal> HFSet::as_ordinal() const { return n_->as_ord; }

bool HFSet::contains(const HFSet& x) const {
  if (n_->inf) return x.n_->as_ord && *x.n_->as_ord < n_->ord;
  if (x.n_->inf) return false;
  if (x.n_->rank >= n_->rank) return false;
  return std::binary_search(n_->elems.begin(), n_->elems.end(), x);
}

bool HFSet::subset_of(const HFSet& y) const {
  if (n_->inf) return y.n_->inf && n_->ord <= y.n_->ord;
  return std::all_of(n_->elems.begin(), n_->elems.end(), [&](const HFSet& e) { return y.contains(e); });
}

HFSet HFSet::with(const HFSet& x) const {
  if (n_->inf) {
    if (contains(x)) return *this;
    if (x.as_ordinal() && *x.as_ordinal() == n_->ord) return ordinal(n_->ord.succ());
    throw Error("not-decidable", "cannot adjoin to an infinite ordinal");
  }
  std::vector<HFSet> e = n_->elems;
  e.push_back(x);
  return make(std::move(e));
}

HFSet HFSet::union_of() const {
  if (n_->inf) return n_->ord.is_limit() ? *this : ordinal(n_->ord.pred());
  std::vector<HFSet> out;
  std::optional<HFSet> inf_part;
  for (const HFSet& e : n_->elems) {
    if (e.n_->inf) {
      HFSet u = e;
      if (!inf_part || *inf_part < u) inf_part = u;
      continue;
    }
    out.insert(out.end(), e.n_->elems.begin(), e.n_->elems.end());
  }
  if (inf_part) {
    for (const HFSet& x : out)
      if (!inf_part->contains(x)) throw Error("not-decidable", "union mixes an infinite ordinal with other sets");
    return *inf_part;
  }
  return make(std::move(out));
}

std::string HFSet::to_string() const {
  if (n_->inf) return "#" + n_->ord.to_string();
  std::string s = "{";
  for (size_t i = 0; i < n_->elems.size(); ++i) {
    if (i) s += ',';
    s += n_->elems[i].to_string();
  }
  return s + "}";
}

namespace {

class SetParser {
 public:
  explicit SetParser(std::string_view t) : t_(t) {}
  HFSet parse_all() {
    HFSet s = value();
    skip();
    if (i_ != t_.size()) fail("trailing input");
    return s;
  }

 private:
  void skip() {
    while (i_ < t_.size() && (t_[i_] == ' ' || t_[i_] == '\n' || t_[i_] == '\t')) ++i_;
  }
  HFSet value() {
    skip();
    if (i_ >= t_.size()) fail("unexpected end");
    if (t_[i_] == '#') {
      size_t j = ++i_;
      while (i_ < t_.size() && std::string_view("0123456789w+*^()").find(t_[i_]) != std::string_view::npos) ++i_;
      // A trailing ')' belongs to an enclosing expression, not the ordinal.
      while (i_ > j && t_[i_ - 1] == ')' &&
             std::count(t_.begin() + j, t_.begin() + i_, '(') < std::count(t_.begin() + j, t_.begin() + i_, ')'))
        --i_;
      return HFSet::ordinal(Ordinal::parse(t_.substr(j, i_ - j)));
    }
    if (t_[i_] != '{') fail("expected '{'");
    ++i_;
    std::vector<HFSet> elems;
    skip();
    if (i_ < t_.size() && t_[i_] == '}') {
      ++i_;
      return HFSet::make({});
    }
    for (;;) {
      elems.push_back(value());
      skip();
      if (i_ < t_.size() && t_[i_] == ',') {
        ++i_;
        continue;
      }
      if (i_ < t_.size() && t_[i_] == '}') {
        ++i_;
        return HFSet::make(std::move(elems));
      }
      fail("expected ',' or '}'");
    }
  }
  [[noreturn]] void fail(const std::string& m) {
    throw Error("parse-error", "set '" + std::string(t_) + "': " + m + " at offset " + std::to_string(i_));
  }
  std::string_view t_;
  size_t i_ = 0;
};

}  // namespace

HFSet HFSet::parse(std::string_view text) { return SetParser(text).parse_all(); }

HFSet kpair(const HFSet& a, const HFSet& b) { return HFSet::make({HFSet::make({a}), HFSet::make({a, b})}); }

std::optional<std::pair<HFSet, HFSet>> as_kpair(const HFSet& p) {
  if (p.is_infinite()) return std::nullopt;
  const auto& e = p.elements();
  if (e.size() == 1) {
    if (e[0].is_infinite() || e[0].size() != 1) return std::nullopt;
    return std::make_pair(e[0].elements()[0], e[0].elements()[0]);
  }
  if (e.size() != 2 || e[0].is_infinite() || e[1].is_infinite()) return std::nullopt;
  const HFSet* single = nullptr;
  const HFSet* dbl = nullptr;
  for (const HFSet& x : e) {
    if (x.size() == 1) single = &x;
    if (x.size() == 2) dbl = &x;
  }
  if (!single || !dbl) return std::nullopt;
  const HFSet& a = single->elements()[0];
  if (!dbl->contains(a)) return std::nullopt;
  const HFSet& b = dbl->elements()[0] == a ? dbl->elements()[1] : dbl->elements()[0];
  return std::make_pair(a, b);
}

HFSet make_seq(const std::vector<HFSet>& xs) {
  std::vector<HFSet> pairs;
  for (size_t j = 0; j < xs.size(); ++j) pairs.push_back(kpair(HFSet::ordinal(j), xs[j]));
  return HFSet::make(std::move(pairs));
}

std::optional<std::vector<HFSet>> as_seq(const HFSet& f) {
  if (f.is_infinite()) return std::nullopt;
  std::vector<std::optional<HFSet>> slots(f.size());
  for (const HFSet& p : f.elements()) {
    auto kp = as_kpair(p);
    if (!kp) return std::nullopt;
    auto j = kp->first.as_ordinal();
    if (!j || !j->is_finite() || j->finite_part() >= slots.size()) return std::nullopt;
    auto& slot = slots[static_cast<size_t>(j->finite_part())];
    if (slot) return std::nullopt;
    slot = kp->second;
  }
  std::vector<HFSet> out;
  for (auto& s : slots) out.push_back(*s);
  return out;
}

std::vector<HFSet> transitive_closure(const HFSet& x) {
  std::vector<HFSet> out;
  std::unordered_set<uint64_t> seen;
  std::vector<HFSet> stack{x};
  while (!stack.empty()) {
    HFSet s = stack.back();
    stack.pop_back();
    if (!seen.insert(s.id()).second) continue;
    out.push_back(s);
    if (s.is_infinite()) throw Error("not-decidable", "transitive closure of " + s.to_string() + " is infinite");
    for (const HFSet& e : s.elements()) stack.push_back(e);
  }
  std::sort(out.begin(), out.end());
  return out;
}

const std::vector<HFSet>& cumulative_level(unsigned n) {
  if (n > 5) throw Error("bound-overflow", "V_" + std::to_string(n) + " is too large to enumerate");
  static std::once_flag once;
  static std::vector<std::vector<HFSet>> levels;
  std::call_once(once, [] {
    levels.push_back({});
    for (unsigned k = 0; k < 5; ++k) {
      const auto& prev = levels.back();
      std::vector<HFSet> next;
      size_t m = prev.size();
      for (uint64_t mask = 0; mask < (uint64_t{1} << m); ++mask) {
        std::vector<HFSet> e;
        for (size_t i = 0; i < m; ++i)
          if (mask >> i & 1) e.push_back(prev[i]);
        next.push_back(HFSet::make(std::move(e)));
      }
      std::sort(next.begin(), next.end());
      levels.push_back(std::move(next));
    }
  });
  return levels[n];
}

}  // namespace otmr
