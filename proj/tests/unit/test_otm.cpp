#include "doctest.h"
#include "otmr/error.hpp"
#include "otmr/otm.hpp"

using namespace otmr;

namespace {

BitTape T(const char* t) { return BitTape::parse(t); }
const Ordinal w = Ordinal::omega();

bool kind_is(const std::function<void()>& f, const std::string& kind) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind() == kind;
  }
  return false;
}

// Copies a set code: even cells end the code when they hold a one.
const char* kCopy = R"(initial 0
halt 2
0 0*** -> ***0 RSSR 1
0 1*** -> ***1 SSSS 2
1 0*** -> ***0 RSSR 0
1 1*** -> ***1 RSSR 0
)";

}  // namespace

TEST_CASE("program text") {
  OtmProgram p = OtmProgram::parse(kCopy);
  CHECK(p.initial == 0);
  CHECK(p.halting == std::set<uint32_t>{2});
  CHECK(OtmProgram::parse(p.to_string()).to_string() == p.to_string());
  CHECK(member_program().find(2, "1010") != nullptr);
  CHECK(kind_is([] { OtmProgram::parse("initial 0\nhalt 1\n0 **** -> **** SSSS 1\n0 0*** -> **** SSSS 1\n"); },
                "parse-error"));
  CHECK(kind_is([] { OtmProgram::parse("halt 1\n"); }, "parse-error"));
  CHECK(kind_is([] { OtmProgram::parse("initial 0\nhalt 1\n0 *** -> **** SSSS 1\n"); }, "parse-error"));
}

TEST_CASE("successor steps") {
  OtmProgram halt_now = OtmProgram::parse("initial 0\nhalt 0\n");
  RunResult r = otm_run(halt_now, T("011"), BitTape(), w);
  CHECK(r.status == RunStatus::Halted);
  CHECK(r.final_config.stage == Ordinal(0));

  OtmProgram p = OtmProgram::parse("initial 0\nhalt 1\n0 **** -> 1*** RSSS 1\n");
  MachineConfig c = initial_config(p, BitTape(), BitTape());
  StepResult s = otm_step(c, p);
  CHECK(s.halted);
  CHECK(s.cfg.heads[0] == Ordinal(1));
  CHECK(s.cfg.tapes[0].read(Ordinal(0)));
  CHECK(s.cfg.stage == Ordinal(1));

  OtmProgram stuck = OtmProgram::parse("initial 0\nhalt 1\n0 1*** -> **** SSSS 1\n");
  CHECK(kind_is([&] { otm_step(initial_config(stuck, BitTape(), BitTape()), stuck); }, "missing-transition"));
  CHECK(otm_run(stuck, BitTape(), BitTape(), w).status == RunStatus::Crashed);
}

TEST_CASE("limit rule") {
  OtmProgram p = OtmProgram::parse("initial 0\nhalt 9\n");
  MachineConfig base = initial_config(p, BitTape(), BitTape());

  // A cell alternating 1, 0 has inferior limit 0.
  MachineConfig a = base, b = base;
  a.tapes[2].write(Ordinal(0), true);
  CofinalBehavior alt{w, {a, b, a}, {}};
  CHECK_FALSE(otm_limit(alt).tapes[2].read(Ordinal(0)));
  // A cell that stays 1 keeps it.
  CofinalBehavior one{w, {a, a}, {}};
  CHECK(otm_limit(one).tapes[2].read(Ordinal(0)));

  // Heads 0, 1, 2, ... converge to w; a constant head stays put.
  MachineConfig h0 = base, h1 = base;
  h1.heads[0] = Ordinal(1);
  h0.heads[1] = h1.heads[1] = Ordinal(5);
  CofinalBehavior mover{w, {h0, h1}, {1, 0, 0, 0}};
  MachineConfig l = otm_limit(mover);
  CHECK(l.heads[0] == w);
  CHECK(l.heads[1] == Ordinal(5));
  CHECK(l.stage == w);

  // State: the least state visited cofinally.
  MachineConfig s3 = base, s7 = base;
  s3.state = 3;
  s7.state = 7;
  CHECK(otm_limit(CofinalBehavior{w, {s7, s3, s7}, {}}).state == 3);
}

TEST_CASE("runs through limits") {
  OtmProgram copy = OtmProgram::parse(kCopy);
  for (const Ordinal& budget : {Ordinal(10), w, w * Ordinal(2)}) {
    RunResult r = otm_run(copy, T("011"), BitTape(), budget);
    REQUIRE(r.status == RunStatus::Halted);
    CHECK(r.output == T("011"));
  }
  CHECK(otm_run(copy, T("011"), BitTape(), Ordinal(2)).status == RunStatus::OutOfBudget);
  RunResult r2 = otm_run(copy, T("0101011"), BitTape(), w);
  CHECK(r2.output == T("0101011"));

  OtmProgram right = OtmProgram::parse("initial 0\nhalt 1\n0 **** -> **** RSSS 0\n");
  RunResult d = otm_run(right, T("011"), BitTape(), w * Ordinal(2));
  CHECK(d.status == RunStatus::OutOfBudget);
  CHECK(d.final_config.stage == w * Ordinal(2));
  CHECK(d.final_config.heads[0] == w * Ordinal(2));

  // Writing 10 repeatedly while moving right leaves (10)^w at stage w.
  OtmProgram stripes = OtmProgram::parse(
      "initial 0\nhalt 5\n0 **** -> ***1 SSSR 1\n1 **** -> ***0 SSSR 0\n");
  RunResult s = otm_run(stripes, BitTape(), BitTape(), w + Ordinal(1));
  CHECK(s.status == RunStatus::OutOfBudget);
  CHECK(s.final_config.stage == w + Ordinal(1));
  CHECK(s.final_config.tapes[3].read(Ordinal(40)));
  CHECK_FALSE(s.final_config.tapes[3].read(Ordinal(41)));
  CHECK(s.final_config.tapes[3].read(w));
  CHECK(s.final_config.heads[3] == w + Ordinal(1));
}

TEST_CASE("running to w equals stepping then taking the limit") {
  OtmProgram toggle = OtmProgram::parse(
      "initial 0\nhalt 9\n0 ***0 -> ***1 SSSS 1\n1 ***1 -> ***0 SSSS 0\n");
  std::vector<MachineConfig> seen;
  RunOptions o;
  o.trace = [&](const MachineConfig& c) { seen.push_back(c); };
  RunResult r = otm_run(toggle, BitTape(), BitTape(), w + Ordinal(1), o);
  CHECK(r.status == RunStatus::OutOfBudget);
  auto at_w = std::find_if(seen.begin(), seen.end(), [&](const MachineConfig& c) { return c.stage == w; });
  REQUIRE(at_w != seen.end());

  MachineConfig c0 = initial_config(toggle, BitTape(), BitTape());
  MachineConfig c1 = otm_step(c0, toggle).cfg;
  MachineConfig c2 = otm_step(c1, toggle).cfg;
  MachineConfig manual = otm_limit(CofinalBehavior{w, {c0, c1, c2}, {}});
  CHECK(manual.state == at_w->state);
  CHECK(manual.heads == at_w->heads);
  CHECK(manual.tapes == at_w->tapes);
  CHECK_FALSE(at_w->tapes[3].read(Ordinal(0)));
  CHECK(r.final_config.tapes[3].read(Ordinal(0)));
}

TEST_CASE("machine-level membership and append") {
  BitTape param;
  param.set_one(Ordinal(0));
  RunResult m = otm_run(member_program(), T("01011"), param, w);
  REQUIRE(m.status == RunStatus::Halted);
  CHECK(m.final_config.tapes[3].read(Ordinal(0)));
  BitTape p1;
  p1.set_one(Ordinal(1));
  CHECK_FALSE(otm_run(member_program(), T("01011"), p1, w).final_config.tapes[3].read(Ordinal(0)));
  BitTape p5;
  p5.set_one(Ordinal(5));
  CHECK(otm_run(member_program(), T("(01)^w011"), p5, w).final_config.tapes[3].read(Ordinal(0)));

  RunResult a = otm_run(seq_append_program(), T("1111"), T("0111"), w);
  REQUIRE(a.status == RunStatus::Halted);
  CHECK(a.output == T("01111111"));
}

TEST_CASE("reference suite") {
  SuiteReport r = otm_reference_suite();
  CHECK(r.member_cases == 2048);
  CHECK(r.append_cases == 157 * 12);
  CHECK(r.all_agree());
  CHECK(r.disagreements.empty());

  SuiteReport bad = otm_reference_suite(corrupted_member_program());
  CHECK_FALSE(bad.all_agree());
  CHECK(bad.disagreements.size() == bad.member_cases - bad.member_agree);
  CHECK(bad.to_string().find("disagree: tape_member") != std::string::npos);
}
