#include "otmr/corpus.hpp"

#include <algorithm>

#include "otmr/hfset.hpp"

namespace otmr {

namespace {

class Gen {
 public:
  Gen(std::mt19937_64& rng, const CorpusOptions& o, uint32_t first_bound = 0)
      : rng_(rng), o_(o), consts_(cumulative_level(o.rank)), next_(first_bound) {
    const auto& v2 = cumulative_level(2);
    for (const HFSet& a : v2)
      for (const HFSet& b : v2) seqs_.push_back(make_seq({a, b}));
  }

  Formula formula(int depth, std::vector<uint32_t> vars) {
    if (depth <= 0 || pick(6) == 0) return atom(vars);
    auto sub = [&](const std::vector<uint32_t>& vs) { return formula(depth - 1, vs); };
    if (chance(o_.omega)) {
      std::vector<Formula> prefix, cycle;
      for (size_t k = pick(2); k > 0; --k) prefix.push_back(sub(vars));
      for (size_t k = 1 + pick(2); k > 0; --k) cycle.push_back(sub(vars));
      return pick(2) ? Formula::conj_omega(prefix, cycle) : Formula::disj_omega(prefix, cycle);
    }
    if (chance(o_.seq_bound)) {
      uint32_t a = next_++, b = next_++;
      Term bound = Term::c(seq_set());
      std::vector<uint32_t> inner = vars;
      inner.push_back(a);
      inner.push_back(b);
      Formula body = sub(inner);
      return pick(2) ? make_bounded_forall({a, b}, bound, body) : make_bounded_exists({a, b}, bound, body);
    }
    switch (pick(7)) {
      case 0:
        return Formula::implies(sub(vars), sub(vars));
      case 1:
      case 2: {
        std::vector<Formula> ps;
        for (size_t k = 2 + pick(2); k > 0; --k) ps.push_back(sub(vars));
        return pick(2) ? Formula::conj(ps) : Formula::disj(ps);
      }
      case 3:
        return Formula::neg(sub(vars));
      default: {
        uint32_t x = next_++;
        Term bound = term(vars);
        std::vector<uint32_t> inner = vars;
        inner.push_back(x);
        Formula body = sub(inner);
        return pick(2) ? make_bounded_forall({x}, bound, body) : make_bounded_exists({x}, bound, body);
      }
    }
  }

  Formula sigma(int depth) {
    uint32_t x = next_++;
    if (pick(4) == 0) {
      uint32_t y = next_++;
      Formula m = formula(depth, {x, y});
      return pick(2) ? Formula::exists({x, y}, m) : Formula::exists({x}, Formula::exists({y}, m));
    }
    Formula m = formula(depth, {x});
    if (pick(2)) m = Formula::conj({Formula::mem(Term::v(x), Term::c(constant())), m});
    return Formula::exists({x}, m);
  }

 private:
  size_t pick(size_t n) { return rng_() % n; }
  bool chance(double p) { return static_cast<double>(rng_() % 10000) < p * 10000.0; }

  const HFSet& constant() { return consts_[pick(consts_.size())]; }

  HFSet seq_set() {
    std::vector<HFSet> e;
    for (size_t k = pick(4); k > 0; --k) e.push_back(seqs_[pick(seqs_.size())]);
    if (pick(3) == 0) e.push_back(constant());
    return HFSet::make(e);
  }

  Term term(const std::vector<uint32_t>& vars) {
    if (!vars.empty() && pick(3) != 0) return Term::v(vars[pick(vars.size())]);
    return Term::c(constant());
  }

  Formula atom(const std::vector<uint32_t>& vars) {
    size_t k = pick(10);
    if (k == 0) return Formula::bottom();
    if (k < 6) return Formula::mem(term(vars), term(vars));
    return Formula::eq(term(vars), term(vars));
  }

  std::mt19937_64& rng_;
  CorpusOptions o_;
  const std::vector<HFSet>& consts_;
  std::vector<HFSet> seqs_;
  uint32_t next_;
};

}  // namespace

Formula random_delta0(std::mt19937_64& rng, const CorpusOptions& o) { return Gen(rng, o).formula(o.depth, {}); }

Formula random_sigma1(std::mt19937_64& rng, const CorpusOptions& o) { return Gen(rng, o).sigma(o.depth); }

Formula random_open_delta0(std::mt19937_64& rng, const CorpusOptions& o, const std::vector<uint32_t>& vars,
                           uint32_t first_bound) {
  for (uint32_t v : vars) first_bound = std::max(first_bound, v + 1);
  return Gen(rng, o, first_bound).formula(o.depth, vars);
}

std::vector<CorpusEntry> corpus_generate(uint64_t seed, int depth, unsigned rank, size_t count) {
  std::mt19937_64 rng(seed);
  CorpusOptions o;
  o.depth = depth;
  o.rank = rank;
  std::vector<CorpusEntry> out;
  for (size_t i = 0; i < count; ++i) {
    Formula f = i % 2 == 0 ? random_delta0(rng, o) : random_sigma1(rng, o);
    out.push_back({f, classify(f)});
  }
  return out;
}

std::string corpus_text(const std::vector<CorpusEntry>& c) {
  std::string out;
  for (const auto& e : c) out += class_name(e.label) + "\t" + e.formula.to_string() + "\n";
  return out;
}

}  // namespace otmr
