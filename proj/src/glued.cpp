#include "otmr/glued.hpp"

#include <fstream>
#include <optional>

#include "otmr/error.hpp"

namespace otmr {

namespace {

bool closed_delta0(const Formula& f) { return free_vars(f).empty() && is_delta0(classify(f)); }
bool closed_sigma1(const Formula& f) { return free_vars(f).empty() && is_sigma1(classify(f)); }

// A closed "x̄ ∈ y" is decided by asking whether y holds the sequence.
std::optional<bool> seq_fact(const Formula& f) {
  auto m = match_seq_membership(f);
  if (!m || m->y.is_var) return std::nullopt;
  std::vector<HFSet> xs;
  for (const Term& t : m->xs) {
    if (t.is_var) return std::nullopt;
    xs.push_back(t.value);
  }
  return m->y.value.contains(make_seq(xs));
}

// Closed facts whose negation the theory proves.
bool refuted(const Formula& f) {
  if (closed_delta0(f)) return !sentence_truth(f);
  auto s = seq_fact(f);
  return s && !*s;
}

bool is_part_of(const Formula& part, const Formula& whole) {
  if (part == whole) return true;
  if (whole.kind() != FKind::Conj || whole.is_omega()) return false;
  for (const Formula& p : whole.distinct_parts())
    if (is_part_of(part, p)) return true;
  return false;
}

}  // namespace

ProvabilityOracle::ProvabilityOracle(std::vector<Formula> db, int depth) : depth_(depth) {
  for (const Formula& f : db) add(f);
}

ProvabilityOracle ProvabilityOracle::load(const std::string& path, int depth) {
  std::ifstream in(path);
  if (!in) throw Error("io-error", "cannot read " + path);
  ProvabilityOracle o({}, depth);
  std::string line;
  for (size_t n = 1; std::getline(in, line); ++n) {
    size_t start = line.find_first_not_of(" \t\r");
    if (start == std::string::npos || line[start] == ';') continue;
    try {
      o.add(Formula::parse(line));
    } catch (const Error& e) {
      throw Error("parse-error", path + ":" + std::to_string(n) + ": " + e.what());
    }
  }
  return o;
}

void ProvabilityOracle::add(const Formula& f) {
  if (in_db_.emplace(f, true).second) db_.push_back(f);
  memo_.clear();
}

Verdict ProvabilityOracle::proves(const Formula& f) const {
  if (auto it = memo_.find(f); it != memo_.end()) return it->second;
  Verdict v = chain(f, depth_);
  memo_.emplace(f, v);
  return v;
}

Verdict ProvabilityOracle::chain(const Formula& f, int depth) const {
  if (in_db_.count(f)) return Verdict::Yes;
  // True closed Delta0 and Sigma1 facts are provable and false Delta0 ones
  // refuted. A Sigma1 search that fails in the finite universe refutes
  // nothing: the witness may lie outside it.
  if (closed_delta0(f)) return sentence_truth(f) ? Verdict::Yes : Verdict::No;
  if (closed_sigma1(f) && sentence_truth(f)) return Verdict::Yes;
  if (auto fact = seq_fact(f)) return *fact ? Verdict::Yes : Verdict::No;
  if (depth == 0) return Verdict::Unknown;
  switch (f.kind()) {
    case FKind::Conj: {
      if (f.is_omega()) return Verdict::Unknown;
      Verdict out = Verdict::Yes;
      for (const Formula& p : f.distinct_parts()) {
        Verdict v = chain(p, depth - 1);
        if (v == Verdict::No) return v;
        if (v == Verdict::Unknown) out = v;
      }
      return out;
    }
    case FKind::Disj: {
      if (f.is_omega()) return Verdict::Unknown;
      for (const Formula& p : f.distinct_parts())
        if (chain(p, depth - 1) == Verdict::Yes) return Verdict::Yes;
      return Verdict::Unknown;
    }
    case FKind::Implies:
      if (refuted(f.ant()) || is_part_of(f.cons(), f.ant())) return Verdict::Yes;
      return chain(f.cons(), depth - 1) == Verdict::Yes ? Verdict::Yes : Verdict::Unknown;
    case FKind::Forall:
      return chain(f.body(), depth - 1) == Verdict::Yes ? Verdict::Yes : Verdict::Unknown;
    default:
      return Verdict::Unknown;
  }
}

bool is_finitary(const Formula& f) {
  switch (f.kind()) {
    case FKind::Conj:
    case FKind::Disj:
      if (f.is_omega()) return false;
      for (const Formula& p : f.distinct_parts())
        if (!is_finitary(p)) return false;
      return true;
    case FKind::Implies: return is_finitary(f.ant()) && is_finitary(f.cons());
    case FKind::Exists:
    case FKind::Forall: return is_finitary(f.body());
    default: return true;
  }
}

Verdict verify_glued(const Value& r, const Formula& phi, const ProvabilityOracle& oracle, const CodeUniverse& U) {
  if (!is_finitary(phi)) throw Error("not-finitary", phi.to_string());
  ProvesFn proves = [&](const Formula& f) { return oracle.proves(f); };
  return verify_with(r, phi, U, false, &proves);
}

Extracted dp_extract(const Value& r, const Formula& disj, const ProvabilityOracle& oracle, const CodeUniverse& U,
                     uint64_t fuel) {
  if (disj.kind() != FKind::Disj) throw Error("stuck-term", "not a disjunction: " + disj.to_string());
  Verdict v = verify_glued(r, disj, oracle, U);
  if (v != Verdict::Yes)
    throw Error("not-realised", std::string(v == Verdict::No ? "refuted" : "undetermined") + ": " + disj.to_string());
  return extract_disjunct(r, disj, fuel);
}

}  // namespace otmr
