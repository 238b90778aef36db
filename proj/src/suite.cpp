#include "otmr/suite.hpp"

#include <chrono>
#include <functional>
#include <map>
#include <random>
#include <set>

#include <fmt/format.h>

#include "json.hpp"
#include "otmr/axioms.hpp"
#include "otmr/corpus.hpp"
#include "otmr/error.hpp"
#include "otmr/glued.hpp"
#include "otmr/otm.hpp"
#include "otmr/setcode.hpp"
#include "otmr/soundness.hpp"
#include "otmr/tape.hpp"
#include "otmr/truth.hpp"

namespace otmr {

namespace {

// Tallies one property over many cases and keeps the first few failures.
struct Tally {
  std::map<std::string, std::pair<uint64_t, uint64_t>> counts;  // name -> (ok, total)
  std::vector<std::string> failures;

  void check(const std::string& name, bool ok, const std::string& what = "") {
    auto& [good, total] = counts[name];
    ++total;
    if (ok) {
      ++good;
    } else if (failures.size() < 3) {
      failures.push_back(name + (what.empty() ? "" : ": " + what));
    }
  }
  bool all() const {
    for (const auto& [n, c] : counts)
      if (c.first != c.second) return false;
    return !counts.empty();
  }
  std::string detail() const {
    std::string s;
    for (const auto& [n, c] : counts) s += (s.empty() ? "" : ", ") + fmt::format("{} {}/{}", n, c.first, c.second);
    for (const std::string& f : failures) s += "; first failure " + f;
    return s;
  }
};

// 1. The coding of sets of ordinals on tapes.

std::string direct_set_code(const std::set<uint64_t>& x) {
  uint64_t beta = 0;
  for (uint64_t a : x) beta = std::max(beta, 2 * a + 2);
  std::string s(beta + 3, '0');
  for (uint64_t a : x) s[2 * a + 1] = '1';
  s[beta + 1] = s[beta + 2] = '1';
  return s;
}

void tape_codes(Tally& t, const SuiteConfig& c) {
  t.check("fixed small codes", encode_ordset(OrdSet{}).to_string() == "011");
  t.check("fixed small codes", encode_ordset(OrdSet::of({Ordinal(0)})).to_string() == "01011");
  t.check("fixed small codes", encode_ordset(OrdSet::naturals()).to_string() == "(01)^w011");
  std::mt19937_64 rng(c.seed);
  for (int i = 0; i < 1000; ++i) {
    std::set<uint64_t> xs;
    for (size_t k = rng() % 6; k > 0; --k) xs.insert(rng() % 24);
    OrdSet x;
    for (uint64_t a : xs) x.insert(Ordinal(a));
    bool infinite = i % 5 == 0;
    if (infinite) x.add_run(Ordinal::omega() * Ordinal(1 + rng() % 2));
    BitTape code = encode_ordset(x);
    if (!infinite) t.check("direct coding", code.to_string() == direct_set_code(xs), code.to_string());
    std::string bits;
    for (size_t k = 1 + rng() % 48; k > 0; --k) bits += (rng() & 1) ? '1' : '0';
    BitTape tail = BitTape::parse(i % 10 == 1 ? "(1)^w" : bits);
    DecodedSet d = decode_ordset(code.concat(tail));
    t.check("tail extensions", d.set == x, x.to_string());
  }
}

// 2. Machine-level programs against the tape-level reference.

void otm_suite(Tally& t, const SuiteConfig&) {
  SuiteReport r = otm_reference_suite();
  t.check("member agreement", r.member_agree == r.member_cases && r.member_cases > 0,
          r.disagreements.empty() ? "" : r.disagreements.front());
  t.check("append agreement", r.append_agree == r.append_cases && r.append_cases > 0,
          r.disagreements.empty() ? "" : r.disagreements.front());
  // The harness itself detects a corrupted machine.
  t.check("corruption detected", !otm_reference_suite(corrupted_member_program()).all_agree());
}

// 3. Set codes: decoding inverts building, and isomorphism decides equality.

HFSet collapse_from_pairs(const Code& c) {
  std::set<Ordinal> pairs = c.pre->pairs();
  uint64_t n = c.pre->domain().finite_part();
  std::vector<std::optional<HFSet>> val(n);
  std::function<HFSet(uint64_t)> go = [&](uint64_t v) -> HFSet {
    if (val[v]) return *val[v];
    std::vector<HFSet> e;
    for (uint64_t u = 0; u < n; ++u)
      if (pairs.count(godel_pair(Ordinal(u), Ordinal(v)))) e.push_back(go(u));
    val[v] = HFSet::make(e);
    return *val[v];
  };
  return go(c.rho.finite_part());
}

HFSet random_set(std::mt19937_64& rng, unsigned rank) {
  const auto& pool = cumulative_level(rank);
  std::vector<HFSet> e;
  for (size_t k = rng() % 5; k > 0; --k) e.push_back(pool[rng() % pool.size()]);
  return HFSet::make(e);
}

void set_codes(Tally& t, const SuiteConfig& c) {
  auto round_trip = [&](const char* name, const HFSet& x, const Code& code) {
    t.check(name, decode_set(code) == x && collapse_from_pairs(code) == x, x.to_string());
  };
  for (const HFSet& x : cumulative_level(4)) round_trip("exhaustive rank <= 3", x, build_code(x));
  std::mt19937_64 rng(c.seed + 3);
  for (int i = 0; i < 500; ++i) {
    HFSet x = random_set(rng, 4);
    round_trip("random rank 4", x, i % 2 ? build_code(x) : build_code_scrambled(x, rng()));
  }
  for (int i = 0; i < 500; ++i) {
    HFSet x = random_set(rng, 3);
    HFSet y = rng() % 2 ? x : random_set(rng, 3);
    Code a = build_code_scrambled(x, rng()), b = build_code_scrambled(y, rng());
    auto f = build_iso(a, b);
    t.check("iso iff equal", f.has_value() == (x == y) && (!f || is_code_iso(a, b, *f)));
  }
}

// 4. Delta0 truth: the recursive evaluator against brute force over V4.

void delta0_truth(Tally& t, const SuiteConfig& c) {
  std::mt19937_64 rng(c.seed + 4);
  CorpusOptions o;
  o.depth = 3;
  o.rank = 3;
  for (int i = 0; i < 1000; ++i) {
    Formula f = random_delta0(rng, o);
    auto cs = constants(f);
    bool fast = eval_delta0(f);
    t.check("agreement", fast == eval_bruteforce(f, make_universe(4, {cs.begin(), cs.end()})), f.to_string());
  }
}

// 5. The universal program on the Delta0/Sigma1 corpus.

void universal_program(Tally& t, const SuiteConfig& c) {
  std::vector<CorpusEntry> corpus = corpus_generate(c.seed + 5, 2, 3, 500);
  for (const CorpusEntry& e : corpus) {
    const Formula& s = e.formula;
    auto cs = constants(s);
    bool truth = eval_bruteforce(s, make_universe(c.rank, {cs.begin(), cs.end()}));
    auto r = phi_universal(s);
    t.check("succeeds iff true", r.has_value() == truth, s.to_string());
    if (!r) continue;
    CodeUniverse u = CodeUniverse::for_formula(s, c.rank, 2, c.fuel);
    t.check("success verifies", verify(*r, s, u), s.to_string());
    if (is_delta0(e.label)) t.check("Delta0 success is uniform", verify_uniform(*r, s, u), s.to_string());
  }
}

// 6. Sequent-rule combinators, walking and transfinite transitivity.

void combinators(Tally& t, const SuiteConfig& c) {
  uint64_t seed = c.seed * 1000 + 6;
  for (const std::string& rule : rule_ids()) {
    RuleReport r = check_rule(rule, 20, seed++, c.rank);
    t.check("rules with 20 verified instances", r.instances == 20 && r.accepted == 20,
            fmt::format("{} {}/{}{}", rule, r.accepted, r.instances, r.failures.empty() ? "" : " " + r.failures[0]));
  }
  WalkingFixture w = walking_fixture(c.seed);
  CodeUniverse uw = CodeUniverse::for_formula(w.conclusion, c.rank, 2, c.fuel);
  t.check("walking", verify(walking(w.tree, w.premises), w.conclusion, uw));
  TransitFixture tf = transit_fixture(c.seed);
  CodeUniverse ut = CodeUniverse::for_formula(tf.conclusion, c.rank, 2, c.fuel);
  Value rt = transfinite_transitivity(tf.tree, tf.premises);
  bool ok = verify(rt, tf.conclusion, ut);
  Extracted e = extract_disjunct(interpret(rt, synthesize(tf.root), c.fuel),
                                 transit_conclusion(tf.tree, tf.phi, tf.vars), c.fuel);
  t.check("transfinite transitivity", ok && verify(e.inner, e.branch, ut), e.branch.to_string());
}

// 7. Axiom realisers.

const HFSet& choice_family() {
  static const HFSet x = HFSet::parse("{{{},{{}}},{{},{{{}}}}}");
  return x;
}

Value apply_all(const Value& r, const std::vector<Value>& args, uint64_t fuel) {
  Value v = r;
  for (const Value& a : args) v = interpret(v, a, fuel);
  return v;
}

void axioms(Tally& t, const SuiteConfig& c) {
  auto F = [](const char* s) { return Formula::parse(s); };
  auto S = [](const char* s) { return HFSet::parse(s); };
  auto code = [](const HFSet& x) { return Value::code(build_code(x)); };
  const Value zero = Value::ord(Ordinal(0));
  CodeUniverse u = CodeUniverse::level(c.rank, {choice_family(), S("{{},{{{}}}}")}, 2, c.fuel);

  std::vector<std::pair<std::string, std::optional<Formula>>> instances;
  for (const std::string& name : axiom_ids())
    if (!is_schema(name)) instances.emplace_back(name, std::nullopt);
  for (const char* phi : {"(not (mem x0 x0))", "(or (eq x0 {}) (ex (x1) (mem x1 x0)))", "(imp (mem x1 x0) (mem x1 x0))"})
    instances.emplace_back("induction", F(phi));
  for (const char* phi : {"(mem {} x0)", "(mem x0 x1)", "(allin (x2) x0 (bot))"})
    instances.emplace_back("delta0-separation", F(phi));
  for (const char* phi : {"(mem x0 x1)", "(eq x1 x0)", "(and (mem x0 x1) (mem x2 x1))"})
    instances.emplace_back("delta0-collection", F(phi));

  for (const auto& [name, phi] : instances) {
    AxiomRealizer a = realize_axiom(name, phi);
    std::string label = name + (phi ? "(" + phi->to_string() + ")" : "");
    t.check("verify", verify(a.realizer, a.formula, u), label);
    t.check("uniform exactly where expected", verify_uniform(a.realizer, a.formula, u) == realised_uniformly(name),
            label);
  }

  Value pair = apply_all(realize_axiom("pairing").realizer, {code(S("{}")), code(S("{{}}")), zero}, c.fuel);
  t.check("pairing decodes", decode_set(pair.fst().as_code()) == S("{{},{{}}}"));
  Value uni = apply_all(realize_axiom("union").realizer, {code(S("{{{}}}")), zero}, c.fuel);
  t.check("union decodes", decode_set(uni.fst().as_code()) == S("{{}}"));
  Value sep = apply_all(realize_axiom("delta0-separation", F("(mem {} x0)")).realizer,
                        {code(S("{{},{{}},{{{}}},{{},{{}}}}")), zero}, c.fuel);
  t.check("separation decodes", decode_set(sep.fst().as_code()) == S("{{{}},{{},{{}}}}"));
  AxiomRealizer col = realize_axiom("delta0-collection", F("(eq x1 x0)"));
  HFSet dom = S("{{},{{}},{{{}}}}");
  Value hyp = synthesize(substitute(col.formula.body().ant(), col.formula.ctx(), {dom}));
  Value bound = apply_all(col.realizer, {code(dom), hyp, zero}, c.fuel);
  t.check("collection decodes", decode_set(bound.fst().as_code()) == dom);

  CodeUniverse uf = CodeUniverse::level(c.rank, {choice_family()}, 2, c.fuel);
  AxiomRealizer ac = realize_axiom("choice"), wc = realize_axiom("weak-choice");
  t.check("choice verifies", verify(ac.realizer, ac.formula, uf));
  t.check("choice is not uniform on the two-element family", !verify_uniform(ac.realizer, ac.formula, uf));
  t.check("weak choice is uniform", verify_uniform(wc.realizer, wc.formula, uf));
}

// 8. Disjunction and existence extraction.

void extraction(Tally& t, const SuiteConfig& c) {
  std::mt19937_64 rng(c.seed + 8);
  CorpusOptions o;
  o.depth = 2;
  o.rank = 3;
  o.omega = 0;
  ProvabilityOracle oracle;
  int disjunctions = 0, existentials = 0;
  while (disjunctions < 100 || existentials < 100) {
    if (disjunctions < 100) {
      std::vector<Formula> parts;
      for (size_t k = 2 + rng() % 2; k > 0; --k) parts.push_back(rng() % 2 ? random_delta0(rng, o) : random_sigma1(rng, o));
      Formula d = Formula::disj(parts);
      if (sentence_truth(d)) {
        ++disjunctions;
        Value r = synthesize(d);
        CodeUniverse u = CodeUniverse::for_formula(d, c.rank, 2, c.fuel);
        Extracted e = extract_disjunct(r, d, c.fuel);
        t.check("extract_disjunct re-verifies", verify(e.inner, e.branch, u) && e.branch == d.part(e.index),
                d.to_string());
        Extracted g = dp_extract(r, d, oracle, u, c.fuel);
        t.check("dp_extract re-verifies", verify_glued(g.inner, g.branch, oracle, u) == Verdict::Yes, d.to_string());
      }
    }
    if (existentials < 100) {
      Formula s = random_sigma1(rng, o);
      if (sentence_truth(s)) {
        ++existentials;
        Witness w = extract_witness(synthesize(s), s, c.fuel);
        auto cs = constants(s);
        for (const HFSet& v : w.values) cs.insert(v);
        Formula inst = substitute(s.body(), s.ctx(), w.values);
        bool ok = inst == w.instance && eval_bruteforce(inst, make_universe(c.rank, {cs.begin(), cs.end()}));
        t.check("witnesses satisfy the matrix", ok, s.to_string());
      }
    }
  }
}

// 9. Glued against plain realisability, and oracle growth.

void glued(Tally& t, const SuiteConfig& c) {
  std::mt19937_64 rng(c.seed + 9);
  CorpusOptions o;
  o.depth = 2;
  o.rank = 3;
  o.omega = 0;
  o.seq_bound = 0;
  std::vector<std::pair<Value, Formula>> pairs;
  std::vector<Formula> lemmas;
  while (pairs.size() < 200) {
    // Unbounded universal sentences are where the oracle matters.
    Formula pi = Formula::forall({1}, random_open_delta0(rng, o, {1}, 2));
    Formula s = rng() % 2 ? random_delta0(rng, o) : random_sigma1(rng, o);
    Formula f;
    switch (pairs.size() % 4) {
      case 0: f = Formula::implies(pi, s); break;
      case 1: f = pi; break;
      case 2: f = Formula::implies(s, pi); break;
      default: f = Formula::disj({s, pi}); break;
    }
    lemmas.push_back(f);
    Value r = sentence_truth(f) ? synthesize(f) : candidate_pool(f).back();
    pairs.emplace_back(r, f);
    if (pairs.size() % 5 == 0) pairs.emplace_back(top_realizer("x"), f);
  }
  pairs.resize(200);
  ProvabilityOracle oracle;
  std::vector<Verdict> last(pairs.size(), Verdict::No);
  uint64_t yes_first = 0, yes_last = 0;
  for (int stage = 0; stage <= 3; ++stage) {
    if (stage > 0)
      for (size_t i = stage - 1; i < lemmas.size(); i += 3) oracle.add(lemmas[i]);
    for (size_t i = 0; i < pairs.size(); ++i) {
      const auto& [r, f] = pairs[i];
      CodeUniverse u = CodeUniverse::for_formula(f, c.rank, 2, c.fuel);
      Verdict g = verify_glued(r, f, oracle, u);
      if (g == Verdict::Yes) t.check("glued implies plain", verify(r, f, u), f.to_string());
      if (stage > 0) t.check("growth keeps 1", last[i] != Verdict::Yes || g == Verdict::Yes, f.to_string());
      last[i] = g;
      if (g == Verdict::Yes && stage == 0) ++yes_first;
      if (g == Verdict::Yes && stage == 3) ++yes_last;
    }
  }
  t.check("growth adds glued realisers", yes_last > yes_first, fmt::format("{} -> {}", yes_first, yes_last));
}

struct CriterionSpec {
  const char* title;
  double limit;
  void (*run)(Tally&, const SuiteConfig&);
};

const std::map<int, CriterionSpec>& criterion_specs() {
  static const std::map<int, CriterionSpec> m = {
      {1, {"tape codes of ordinal sets", 5, tape_codes}},
      {2, {"machine programs against the reference", 60, otm_suite}},
      {3, {"set codes round trip and isomorphism", 120, set_codes}},
      {4, {"Delta0 evaluation against brute force on V4", 120, delta0_truth}},
      {5, {"universal program on Delta0/Sigma1 sentences", 300, universal_program}},
      {6, {"sequent-rule combinators and tree rules", 300, combinators}},
      {7, {"axiom realisers", 300, axioms}},
      {8, {"disjunction and existence extraction", 120, extraction}},
      {9, {"glued coherence and oracle growth", 60, glued}},
  };
  return m;
}

}  // namespace

const std::vector<int>& criterion_ids() {
  static const std::vector<int> ids = {1, 2, 3, 4, 5, 6, 7, 8, 9};
  return ids;
}

CriterionResult run_criterion(int id, const SuiteConfig& c) {
  auto it = criterion_specs().find(id);
  if (it == criterion_specs().end()) throw Error("usage", fmt::format("no criterion {}", id));
  const CriterionSpec& s = it->second;
  CriterionResult r;
  r.id = id;
  r.title = s.title;
  r.limit = s.limit;
  unsigned saved = synthesis_rank();
  set_synthesis_rank(c.rank);
  auto start = std::chrono::steady_clock::now();
  Tally t;
  try {
    s.run(t, c);
    r.holds = t.all();
    r.detail = t.detail();
  } catch (const Error& e) {
    r.holds = false;
    r.detail = t.detail() + (t.counts.empty() ? "" : "; ") + "aborted: " + e.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  r.in_time = r.seconds < r.limit;
  set_synthesis_rank(saved);
  return r;
}

std::vector<CriterionResult> run_suite(const SuiteConfig& c, const std::vector<int>& ids) {
  std::vector<CriterionResult> out;
  for (int id : ids.empty() ? criterion_ids() : ids) out.push_back(run_criterion(id, c));
  return out;
}

std::string report_line(const CriterionResult& r, bool stable) {
  std::string timing = stable ? fmt::format("[{} {:g} s]", r.in_time ? "within" : "over", r.limit)
                              : fmt::format("[{:.2f} s {} {:g} s]", r.seconds, r.in_time ? "<" : ">=", r.limit);
  return fmt::format("{} {} {}: {} {}", r.passed() ? "PASS" : "FAIL", r.id, r.title, r.detail, timing);
}

std::string summary_json(const std::vector<CriterionResult>& rs, const SuiteConfig& c, bool stable) {
  nlohmann::ordered_json j;
  j["rank"] = c.rank;
  j["seed"] = c.seed;
  j["fuel"] = c.fuel;
  bool all = !rs.empty();
  for (const CriterionResult& r : rs) {
    nlohmann::ordered_json e;
    e["id"] = r.id;
    e["title"] = r.title;
    e["passed"] = r.passed();
    e["holds"] = r.holds;
    e["in_time"] = r.in_time;
    e["limit_seconds"] = r.limit;
    if (!stable) e["seconds"] = r.seconds;
    e["detail"] = r.detail;
    j["criteria"].push_back(e);
    all = all && r.passed();
  }
  j["all_passed"] = all;
  return j.dump(2) + "\n";
}

}  // namespace otmr
