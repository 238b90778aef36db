#include <chrono>
#include <random>

#include "doctest.h"
#include "otmr/corpus.hpp"
#include "otmr/error.hpp"
#include "otmr/truth.hpp"

using namespace otmr;

namespace {

Formula P(const char* t) { return Formula::parse(t); }
HFSet S(const char* t) { return HFSet::parse(t); }

bool kind_is(const std::function<void()>& f, const std::string& kind) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind() == kind;
  }
  return false;
}

std::vector<HFSet> universe_for(const Formula& f, unsigned rank) {
  auto cs = constants(f);
  return make_universe(rank, {cs.begin(), cs.end()});
}

}  // namespace

TEST_CASE("delta0 evaluation") {
  CHECK(eval_delta0(P("(eq {} {})")));
  CHECK(eval_delta0(P("(allin (x0) {{}} (eq x0 {}))")));
  CHECK_FALSE(eval_delta0(P("(allin (x0) {{},{{}}} (eq x0 {}))")));
  CHECK(eval_delta0(P("(exin (x0) {{},{{}}} (mem {} x0))")));
  CHECK_FALSE(eval_delta0(P("(mem {} {})")));
  CHECK(eval_delta0(P("(mem x0 x1)"), {{0, S("{}")}, {1, S("{{}}")}}));
  CHECK(kind_is([] { eval_delta0(P("(mem x0 {})")); }, "unbound-variable"));
  CHECK(kind_is([] { eval_delta0(P("(ex (x0) (eq x0 {}))")); }, "not-delta0"));
  CHECK(eval_delta0(P("(andw () ((eq {} {})))")));
  CHECK_FALSE(eval_delta0(P("(andw ((eq {} {})) ((eq {} {}) (bot)))")));
  CHECK(eval_delta0(P("(orw ((bot)) ((bot) (mem {} {{}})))")));

  // Bounds that are infinite: witnesses are found, universal claims can
  // be refuted, anything else is not decided.
  CHECK(eval_delta0(P("(exin (x0) #w (eq x0 #5))")));
  CHECK(eval_delta0(P("(mem #3 #w)")));
  CHECK_FALSE(eval_delta0(P("(allin (x0) #w (mem x0 #4))")));
  CHECK(kind_is([] { eval_delta0(P("(allin (x0) #w (mem x0 #w))")); }, "not-decidable"));

  // Length-2 bounds range over the sequences in the bound.
  HFSet seqs = HFSet::make({make_seq({S("{}"), S("{{}}")}), make_seq({S("{{}}"), S("{{}}")}), S("{}")});
  Assignment a{{5, seqs}};
  CHECK(eval_delta0(make_bounded_forall({0, 1}, Term::v(5), P("(mem {} x1)")), a));
  CHECK_FALSE(eval_delta0(make_bounded_forall({0, 1}, Term::v(5), P("(eq x0 x1)")), a));
  CHECK(eval_delta0(make_bounded_exists({0, 1}, Term::v(5), P("(eq x0 x1)")), a));
}

TEST_CASE("brute-force evaluation") {
  const auto& v3 = cumulative_level(3);
  CHECK(eval_bruteforce(P("(ex (x0) (eq x0 {}))"), v3));
  CHECK_FALSE(eval_bruteforce(P("(ex (x0) (and (mem {} x0) (mem x0 {})))"), v3));
  CHECK(eval_bruteforce(P("(all (x0) (eq x0 x0))"), v3));
  CHECK_FALSE(eval_bruteforce(P("(all (x0) (mem {} x0))"), v3));
  CHECK(kind_is([&] { eval_bruteforce(P("(mem x3 {})"), v3); }, "unbound-variable"));

  // The sequence-membership expansion on X = <{}> and Y = {<0,{}>-as-function}.
  HFSet one = make_seq({HFSet()});
  Formula sm = substitute(expand_seq_membership({0}, Term::v(1)), {0, 1}, {HFSet(), HFSet::make({one})});
  auto u = universe_for(sm, 3);
  CHECK(eval_bruteforce(sm, u));
  Formula no = substitute(expand_seq_membership({0}, Term::v(1)), {0, 1}, {S("{{}}"), HFSet::make({one})});
  CHECK_FALSE(eval_bruteforce(no, u));
  HFSet pair = make_seq({S("{{}}"), HFSet()});
  Formula sm2 = substitute(expand_seq_membership({0, 1}, Term::v(2)), {0, 1, 2},
                           {S("{{}}"), HFSet(), HFSet::make({pair, S("{}")})});
  CHECK(eval_bruteforce(sm2, universe_for(sm2, 3)));
  Formula sm2no = substitute(expand_seq_membership({0, 1}, Term::v(2)), {0, 1, 2},
                             {HFSet(), S("{{}}"), HFSet::make({pair, S("{}")})});
  CHECK_FALSE(eval_bruteforce(sm2no, universe_for(sm2no, 3)));

  uint32_t fresh = 10;
  Formula fd = lib::fun_dom(Term::c(pair), Term::c(HFSet::ordinal(2)), fresh);
  CHECK(eval_delta0(fd));
  fresh = 10;
  CHECK_FALSE(eval_delta0(lib::fun_dom(Term::c(pair), Term::c(HFSet::ordinal(1)), fresh)));
  fresh = 10;
  CHECK(eval_delta0(lib::successor(Term::c(HFSet::ordinal(3)), Term::c(HFSet::ordinal(2)), fresh)));
}

TEST_CASE("universe construction") {
  HFSet pair = make_seq({S("{{}}"), S("{{}}")});
  auto u = make_universe(2, {HFSet::make({pair})});
  CHECK(std::is_sorted(u.begin(), u.end()));
  CHECK(std::find(u.begin(), u.end(), HFSet::ordinal(2)) != u.end());
  for (const HFSet& x : u)
    for (const HFSet& y : x.elements()) CHECK(std::find(u.begin(), u.end(), y) != u.end());
  CHECK(make_universe(4).size() == 16);
}

TEST_CASE("delta0 agrees with brute force on a generated corpus") {
  std::mt19937_64 rng(17);
  CorpusOptions o;
  o.depth = 3;
  o.rank = 3;
  int truths = 0;
  for (int i = 0; i < 300; ++i) {
    Formula f = random_delta0(rng, o);
    REQUIRE(is_delta0(classify(f)));
    bool d = eval_delta0(f);
    CHECK_MESSAGE(d == eval_bruteforce(f, universe_for(f, 4)), f.to_string());
    CHECK(eval_delta0(Formula::neg(f)) != d);
    truths += d;
  }
  CHECK(truths > 50);
  CHECK(truths < 250);
}

TEST_CASE("sigma1 truth is monotone in the universe") {
  std::mt19937_64 rng(23);
  CorpusOptions o;
  o.depth = 2;
  for (int i = 0; i < 100; ++i) {
    Formula f = random_sigma1(rng, o);
    REQUIRE(is_sigma1(classify(f)));
    if (eval_bruteforce(f, universe_for(f, 3))) CHECK(eval_bruteforce(f, universe_for(f, 4)));
  }
}

TEST_CASE("corpus generation") {
  auto a = corpus_text(corpus_generate(0, 2, 2, 50));
  auto b = corpus_text(corpus_generate(0, 2, 2, 50));
  CHECK(a == b);
  auto c = corpus_generate(1, 3, 3, 400);
  for (const auto& e : c) CHECK(e.label == classify(e.formula));
  std::string all = corpus_text(c);
  for (const char* k : {"(mem", "(eq", "(bot)", "(imp", "(and ", "(or ", "(allin", "(exin", "(not", "(andw", "(orw", "(ex "})
    CHECK_MESSAGE(all.find(k) != std::string::npos, k);
}
