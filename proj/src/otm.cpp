#include "otmr/otm.hpp"

#include <algorithm>
#include <sstream>
#include <unordered_map>

#include "otmr/error.hpp"

namespace otmr {

namespace {

Ordinal block_end(const Ordinal& pos) { return pos.limit_part() + Ordinal::omega(); }

bool in_block(const TapeBlock& b, const Ordinal& pos) { return b.start <= pos && pos < b.end(); }

char block_bit(const TapeBlock& b, const Ordinal& pos) {
  uint64_t k = pos.finite_part() - b.start.finite_part();
  return b.pattern[static_cast<size_t>(k % b.pattern.size())];
}

bool overlaps(const TapeBlock& b, const Ordinal& from, const Ordinal& to) { return b.start < to && from < b.end(); }

Move parse_move(char c) {
  switch (c) {
    case 'L': return Move::Left;
    case 'R': return Move::Right;
    case 'S': return Move::Stay;
  }
  throw Error("parse-error", std::string("bad move '") + c + "'");
}

char move_char(Move m) { return m == Move::Left ? 'L' : m == Move::Right ? 'R' : 'S'; }

bool matches(const std::string& pattern, const std::string& bits) {
  for (size_t i = 0; i < kTapes; ++i)
    if (pattern[i] != '*' && pattern[i] != bits[i]) return false;
  return true;
}

bool patterns_overlap(const std::string& a, const std::string& b) {
  for (size_t i = 0; i < kTapes; ++i)
    if (a[i] != '*' && b[i] != '*' && a[i] != b[i]) return false;
  return true;
}

bool valid_field(const std::string& s) {
  return s.size() == kTapes && std::all_of(s.begin(), s.end(), [](char c) { return c == '0' || c == '1' || c == '*'; });
}

}  // namespace

// ---------------------------------------------------------------------------
// Programs

OtmProgram OtmProgram::parse(std::string_view text) {
  OtmProgram p;
  bool have_initial = false;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  auto fail = [&](const std::string& msg) {
    throw Error("parse-error", "line " + std::to_string(lineno) + ": " + msg);
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    std::istringstream ls(line);
    std::vector<std::string> w;
    for (std::string t; ls >> t;) w.push_back(t);
    if (w.empty()) continue;
    try {
      if (w[0] == "initial") {
        if (w.size() != 2) fail("initial takes one state");
        p.initial = static_cast<uint32_t>(std::stoul(w[1]));
        have_initial = true;
        continue;
      }
      if (w[0] == "halt") {
        if (w.size() < 2) fail("halt needs a state");
        for (size_t i = 1; i < w.size(); ++i) p.halting.insert(static_cast<uint32_t>(std::stoul(w[i])));
        continue;
      }
      if (w.size() != 6 || w[2] != "->") fail("expected 'state read -> write moves next'");
      uint32_t s = static_cast<uint32_t>(std::stoul(w[0]));
      Transition t;
      t.read = w[1];
      t.write = w[3];
      if (!valid_field(t.read) || !valid_field(t.write)) fail("read and write fields need " + std::to_string(kTapes) + " symbols");
      if (w[4].size() != kTapes) fail("one move per tape");
      for (size_t i = 0; i < kTapes; ++i) t.moves[i] = parse_move(w[4][i]);
      t.next = static_cast<uint32_t>(std::stoul(w[5]));
      for (const Transition& o : p.transitions[s])
        if (patterns_overlap(o.read, t.read)) fail("overlapping transitions for state " + w[0]);
      p.transitions[s].push_back(t);
    } catch (const std::invalid_argument&) {
      fail("expected a state number");
    } catch (const std::out_of_range&) {
      fail("state number out of range");
    }
  }
  if (!have_initial) throw Error("parse-error", "missing 'initial' line");
  if (p.halting.empty()) throw Error("parse-error", "missing 'halt' line");
  return p;
}

std::string OtmProgram::to_string() const {
  std::string out = "initial " + std::to_string(initial) + "\nhalt";
  for (uint32_t h : halting) out += " " + std::to_string(h);
  out += "\n";
  for (const auto& [s, ts] : transitions)
    for (const Transition& t : ts) {
      out += std::to_string(s) + " " + t.read + " -> " + t.write + " ";
      for (Move m : t.moves) out += move_char(m);
      out += " " + std::to_string(t.next) + "\n";
    }
  return out;
}

const Transition* OtmProgram::find(uint32_t state, const std::string& read) const {
  auto it = transitions.find(state);
  if (it == transitions.end()) return nullptr;
  for (const Transition& t : it->second)
    if (matches(t.read, read)) return &t;
  return nullptr;
}

// ---------------------------------------------------------------------------
// Tapes

bool MachineTape::underlying(const Ordinal& pos) const {
  for (auto it = blocks_.rbegin(); it != blocks_.rend(); ++it)
    if (in_block(*it, pos)) return block_bit(*it, pos) == '1';
  return base_.bit(pos);
}

bool MachineTape::read(const Ordinal& pos) const {
  auto it = cells_.find(pos);
  return it != cells_.end() ? it->second : underlying(pos);
}

void MachineTape::write(const Ordinal& pos, bool bit) {
  if (bit == underlying(pos)) cells_.erase(pos);
  else cells_[pos] = bit;
}

std::optional<std::vector<Ordinal>> MachineTape::ones_in(const Ordinal& from, const Ordinal& to) const {
  for (const TapeBlock& b : blocks_)
    if (overlaps(b, from, to) && b.pattern.find('1') != std::string::npos) return std::nullopt;
  for (const TapeBlock& b : base_.blocks())
    if (overlaps(b, from, to)) return std::nullopt;
  for (auto it = base_.ones().lower_bound(from); it != base_.ones().end() && *it < to; ++it)
    if (!cells_.count(*it)) return std::nullopt;
  std::vector<Ordinal> out;
  for (auto it = cells_.lower_bound(from); it != cells_.end() && it->first < to; ++it)
    if (it->second) out.push_back(it->first);
  return out;
}

void MachineTape::set_block(const Ordinal& start, const std::string& pattern) {
  Ordinal end = block_end(start);
  for (auto it = cells_.lower_bound(start); it != cells_.end() && it->first < end;) it = cells_.erase(it);
  blocks_.push_back(TapeBlock{start, pattern});
}

BitTape MachineTape::to_bittape() const {
  BitTape out;
  std::vector<TapeBlock> blocks;
  for (const TapeBlock& b : base_.blocks()) {
    bool shadowed = std::any_of(blocks_.begin(), blocks_.end(), [&](const TapeBlock& m) { return overlaps(m, b.start, b.end()); });
    if (!shadowed) blocks.push_back(b);
  }
  for (const TapeBlock& b : blocks_)
    if (b.pattern.find('1') != std::string::npos) blocks.push_back(b);
  std::sort(blocks.begin(), blocks.end(), [](const TapeBlock& a, const TapeBlock& b) { return a.start < b.start; });
  Ordinal len = base_.length();
  for (const TapeBlock& b : blocks) {
    out.add_block(b.start, b.pattern);
    if (len < b.end()) len = b.end();
  }
  std::set<Ordinal> ones;
  for (const Ordinal& o : base_.ones())
    if (read(o)) ones.insert(o);
  for (const auto& [pos, bit] : cells_)
    if (bit) ones.insert(pos);
  for (const Ordinal& o : ones) {
    bool covered = std::any_of(blocks.begin(), blocks.end(), [&](const TapeBlock& b) { return in_block(b, o); });
    if (!covered) out.set_one(o);
  }
  // Finite tapes end at their last one so that outputs compare exactly.
  if (blocks.empty()) len = ones.empty() ? Ordinal(0) : ones.rbegin()->succ();
  out.set_length(len);
  return out;
}

std::string MachineConfig::dump() const {
  std::string s = "stage=" + stage.to_string() + " state=" + std::to_string(state) + " heads=";
  for (size_t i = 0; i < kTapes; ++i) s += (i ? "," : "") + heads[i].to_string();
  return s;
}

MachineConfig initial_config(const OtmProgram& p, const BitTape& input, const BitTape& param) {
  MachineConfig c;
  c.tapes[0] = MachineTape(input);
  c.tapes[1] = MachineTape(param);
  c.state = p.initial;
  return c;
}

StepResult otm_step(const MachineConfig& cfg, const OtmProgram& p) {
  std::string bits(kTapes, '0');
  for (size_t i = 0; i < kTapes; ++i) bits[i] = cfg.tapes[i].read(cfg.heads[i]) ? '1' : '0';
  const Transition* t = p.find(cfg.state, bits);
  if (!t) throw Error("missing-transition", "state " + std::to_string(cfg.state) + " reading " + bits);
  StepResult r{cfg, false};
  MachineConfig& c = r.cfg;
  for (size_t i = 0; i < kTapes; ++i) {
    if (t->write[i] != '*') c.tapes[i].write(c.heads[i], t->write[i] == '1');
    switch (t->moves[i]) {
      case Move::Right:
        c.heads[i] = c.heads[i].succ();
        break;
      case Move::Left:
        // From 0 or a limit position the head drops to 0.
        c.heads[i] = c.heads[i].is_successor() ? c.heads[i].pred() : Ordinal(0);
        break;
      case Move::Stay:
        break;
    }
  }
  c.state = t->next;
  c.stage = c.stage.succ();
  r.halted = p.halting.count(c.state) > 0;
  return r;
}

MachineConfig otm_limit(const CofinalBehavior& h) {
  const auto& per = h.period;
  if (per.size() < 2) throw Error("unsupported", "a period needs at least two configurations");
  const size_t p = per.size() - 1;
  MachineConfig out = per[p];
  out.stage = h.limit;
  out.state = per[0].state;
  for (size_t k = 0; k < p; ++k) out.state = std::min(out.state, per[k].state);
  for (size_t i = 0; i < kTapes; ++i) {
    const Ordinal& h0 = per[0].heads[i];
    if (h.shift[i] > 0) {
      out.heads[i] = block_end(h0);
      std::string pattern;
      for (uint64_t j = 0; j < h.shift[i]; ++j) pattern += per[p].tapes[i].read(h0 + Ordinal(j)) ? '1' : '0';
      out.tapes[i] = per[p].tapes[i];
      out.tapes[i].set_block(h0, pattern);
      continue;
    }
    out.heads[i] = h0;
    std::set<Ordinal> touched;
    for (size_t k = 0; k < p; ++k) {
      out.heads[i] = std::min(out.heads[i], per[k].heads[i]);
      for (const auto& [pos, bit] : per[k].tapes[i].cells()) touched.insert(pos);
    }
    out.tapes[i] = per[0].tapes[i];
    for (const Ordinal& pos : touched) {
      bool v = true;
      for (size_t k = 0; k < p; ++k) v = v && per[k].tapes[i].read(pos);
      out.tapes[i].write(pos, v);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Runs

namespace {

size_t config_key(const MachineConfig& c, const Ordinal& limit) {
  size_t h = std::hash<uint32_t>{}(c.state);
  auto mix = [&](size_t v) { h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2); };
  for (size_t i = 0; i < kTapes; ++i) {
    auto ahead = c.tapes[i].ones_in(c.heads[i], limit);
    if (!ahead) {
      mix(0xdead);
      mix(c.heads[i].finite_part());
      continue;
    }
    mix(ahead->size());
    for (const Ordinal& o : *ahead) mix(o.finite_part() - c.heads[i].finite_part());
  }
  return h;
}

// Simulates p steps from c and checks that the segment repeats forever.
std::optional<CofinalBehavior> confirm_period(const MachineConfig& c, uint64_t p, const OtmProgram& prog,
                                              const Ordinal& limit) {
  CofinalBehavior b;
  b.limit = limit;
  b.period.push_back(c);
  std::array<Ordinal, kTapes> low = c.heads;
  try {
    for (uint64_t k = 0; k < p; ++k) {
      StepResult r = otm_step(b.period.back(), prog);
      if (r.halted) return std::nullopt;
      for (size_t i = 0; i < kTapes; ++i) low[i] = std::min(low[i], r.cfg.heads[i]);
      b.period.push_back(std::move(r.cfg));
    }
  } catch (const Error&) {
    return std::nullopt;
  }
  const MachineConfig& e = b.period.back();
  if (e.state != c.state) return std::nullopt;
  for (size_t i = 0; i < kTapes; ++i) {
    if (e.heads[i] < c.heads[i]) return std::nullopt;
    Ordinal d = ord_sub_left(c.heads[i], e.heads[i]);
    if (!d.is_finite()) return std::nullopt;
    b.shift[i] = d.finite_part();
    if (b.shift[i] == 0) {
      if (!(e.tapes[i] == c.tapes[i])) return std::nullopt;
      continue;
    }
    if (low[i] < c.heads[i]) return std::nullopt;
    auto a0 = c.tapes[i].ones_in(c.heads[i], limit);
    auto a1 = e.tapes[i].ones_in(e.heads[i], limit);
    if (!a0 || !a1 || a0->size() != a1->size()) return std::nullopt;
    for (size_t j = 0; j < a0->size(); ++j)
      if ((*a0)[j].finite_part() - c.heads[i].finite_part() != (*a1)[j].finite_part() - e.heads[i].finite_part())
        return std::nullopt;
  }
  return b;
}

}  // namespace

RunResult otm_run(const OtmProgram& p, const BitTape& input, const BitTape& param, const Ordinal& budget,
                  const RunOptions& o) {
  RunResult res;
  MachineConfig cfg = initial_config(p, input, param);
  auto halt = [&](const MachineConfig& c) {
    res.status = RunStatus::Halted;
    res.output = c.tapes[3].to_bittape();
    res.final_config = c;
    return res;
  };
  auto give_up = [&](const MachineConfig& c, std::string why) {
    res.status = RunStatus::OutOfBudget;
    res.final_config = c;
    res.detail = std::move(why);
    return res;
  };
  if (o.trace) o.trace(cfg);
  if (p.halting.count(cfg.state)) return halt(cfg);
  while (true) {
    const Ordinal limit = block_end(cfg.stage);
    std::unordered_map<size_t, uint64_t> seen;
    bool reached_limit = false;
    for (uint64_t n = 0; !reached_limit; ++n) {
      if (!(cfg.stage < budget)) return give_up(cfg, "budget exhausted at stage " + cfg.stage.to_string());
      if (n >= o.max_block_steps) return give_up(cfg, "no recognizable limit behavior");
      size_t key = config_key(cfg, limit);
      auto it = seen.find(key);
      if (it != seen.end()) {
        if (auto beh = confirm_period(cfg, n - it->second, p, limit)) {
          cfg = otm_limit(*beh);
          if (o.trace) o.trace(cfg);
          if (p.halting.count(cfg.state)) return halt(cfg);
          if (!(cfg.stage < budget)) return give_up(cfg, "budget exhausted at stage " + cfg.stage.to_string());
          reached_limit = true;
          continue;
        }
      }
      seen[key] = n;
      try {
        StepResult r = otm_step(cfg, p);
        cfg = std::move(r.cfg);
        if (o.trace) o.trace(cfg);
        if (r.halted) return halt(cfg);
      } catch (const Error& e) {
        if (e.kind() != "missing-transition") throw;
        res.status = RunStatus::Crashed;
        res.final_config = cfg;
        res.detail = e.what();
        return res;
      }
    }
  }
}

// ---------------------------------------------------------------------------
// Shipped machines

namespace {

// Scans odd cells 2g+1 of the set code with the parameter head at g. A one in
// the following even cell is the terminator.
constexpr const char* kMemberText = R"(initial 0
halt 9
0 **** -> **** RSSS 1
1 0*** -> **** RSSS 2
1 1*** -> **** RSSS 3
2 1*** -> ***0 SSSS 9
2 00** -> **** RRSS 1
2 01** -> ***0 SSSS 9
3 1*** -> ***0 SSSS 9
3 00** -> **** RRSS 1
3 01** -> ***1 SSSS 9
)";

// Copies pair codes from the input while tracking the parity inside each set
// code, then copies the parameter pair and writes the terminator 1111.
constexpr const char* kAppendText = R"(initial 0
halt 99
0 1*** -> **** SSSS 10
0 0*** -> ***0 RSSR 1
1 0*** -> ***0 RSSR 2
1 1*** -> ***1 RSSR 2
2 0*** -> ***0 RSSR 1
2 1*** -> ***1 RSSR 3
3 0*** -> ***0 RSSR 3
3 1*** -> ***1 RSSR 0
10 *0** -> ***0 SRSR 11
11 *0** -> ***0 SRSR 12
11 *1** -> ***1 SRSR 12
12 *0** -> ***0 SRSR 11
12 *1** -> ***1 SRSR 13
13 *0** -> ***0 SRSR 13
13 *1** -> ***1 SRSR 14
14 **** -> ***1 SSSR 15
15 **** -> ***1 SSSR 16
16 **** -> ***1 SSSR 17
17 **** -> ***1 SSSR 99
)";

}  // namespace

const OtmProgram& member_program() {
  static const OtmProgram p = OtmProgram::parse(kMemberText);
  return p;
}

const OtmProgram& seq_append_program() {
  static const OtmProgram p = OtmProgram::parse(kAppendText);
  return p;
}

OtmProgram corrupted_member_program() {
  OtmProgram p = member_program();
  for (Transition& t : p.transitions.at(3))
    if (t.write == "***1") t.write = "***0";
  return p;
}

std::string SuiteReport::to_string() const {
  std::string s = "tape_member: " + std::to_string(member_agree) + "/" + std::to_string(member_cases) +
                  " agree\nseq_append: " + std::to_string(append_agree) + "/" + std::to_string(append_cases) +
                  " agree\n";
  for (const std::string& d : disagreements) s += "disagree: " + d + "\n";
  return s;
}

SuiteReport otm_reference_suite(const OtmProgram& member, const OtmProgram& append) {
  SuiteReport r;
  const Ordinal budget = Ordinal::omega();
  for (uint32_t mask = 0; mask < 256; ++mask) {
    OrdSet x;
    for (uint32_t a = 0; a < 8; ++a)
      if (mask >> a & 1) x.insert(Ordinal(a));
    BitTape code = encode_ordset(x);
    for (uint32_t a = 0; a < 8; ++a) {
      BitTape param;
      param.set_one(Ordinal(a));
      RunResult run = otm_run(member, code, param, budget);
      bool host = tape_member(Ordinal(a), code);
      bool ok = run.status == RunStatus::Halted && run.final_config.tapes[3].read(Ordinal(0)) == host;
      ++r.member_cases;
      if (ok) ++r.member_agree;
      else r.disagreements.push_back("tape_member alpha=" + std::to_string(a) + " code=" + code.to_string());
    }
  }

  std::vector<LowPair> pairs;
  for (uint32_t a = 0; a < 3; ++a)
    for (uint32_t mask = 0; mask < 4; ++mask) {
      OrdSet x;
      for (uint32_t b = 0; b < 2; ++b)
        if (mask >> b & 1) x.insert(Ordinal(b));
      pairs.push_back(LowPair{Ordinal(a), x});
    }
  std::vector<std::vector<LowPair>> seqs{{}};
  for (const LowPair& p : pairs) seqs.push_back({p});
  for (const LowPair& p : pairs)
    for (const LowPair& q : pairs) seqs.push_back({p, q});
  for (const auto& s : seqs) {
    BitTape b = encode_seq(s);
    for (const LowPair& p : pairs) {
      BitTape pc = encode_lowpair(p);
      RunResult run = otm_run(append, b, pc, budget);
      BitTape host = seq_append(b, p);
      bool ok = run.status == RunStatus::Halted && run.output == host;
      ++r.append_cases;
      if (ok) ++r.append_agree;
      else r.disagreements.push_back("seq_append seq=" + b.to_string() + " pair=" + pc.to_string());
    }
  }
  return r;
}

}  // namespace otmr
