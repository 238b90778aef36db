#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "otmr/ordinal.hpp"
#include "otmr/tape.hpp"

namespace otmr {

// Tapes: input, parameter, scratch, output.
inline constexpr size_t kTapes = 4;
enum class Move { Left, Right, Stay };

// Read patterns use '0', '1' or '*' (any); write patterns use '0', '1' or
// '*' (keep).
struct Transition {
  std::string read;
  std::string write;
  std::array<Move, kTapes> moves{};
  uint32_t next = 0;
};

// Text form, one item per line:
//   initial N
//   halt N [M ...]
//   state rrrr -> wwww mmmm next     (moves L, R, S)
// '#' starts a comment.
struct OtmProgram {
  uint32_t initial = 0;
  std::set<uint32_t> halting;
  std::map<uint32_t, std::vector<Transition>> transitions;

  static OtmProgram parse(std::string_view text);  // rejects overlapping reads
  std::string to_string() const;
  const Transition* find(uint32_t state, const std::string& read) const;
};

// A total bit assignment on the ordinals: explicit cells over periodic
// blocks (produced at limits) over the initial tape.
class MachineTape {
 public:
  MachineTape() = default;
  explicit MachineTape(BitTape base) : base_(std::move(base)) {}

  bool read(const Ordinal& pos) const;
  void write(const Ordinal& pos, bool bit);
  // Explicit ones in [from, to), or nullopt if a block or the base tape has
  // a one there that is not an explicit cell.
  std::optional<std::vector<Ordinal>> ones_in(const Ordinal& from, const Ordinal& to) const;
  // Replaces [start, start.limit_part() + w) by the periodic pattern.
  void set_block(const Ordinal& start, const std::string& pattern);
  const std::map<Ordinal, bool>& cells() const { return cells_; }
  BitTape to_bittape() const;

  friend bool operator==(const MachineTape&, const MachineTape&) = default;

 private:
  bool underlying(const Ordinal& pos) const;
  BitTape base_;
  std::vector<TapeBlock> blocks_;
  std::map<Ordinal, bool> cells_;
};

struct MachineConfig {
  std::array<MachineTape, kTapes> tapes;
  std::array<Ordinal, kTapes> heads;
  uint32_t state = 0;
  Ordinal stage;

  std::string dump() const;  // "stage state h0 h1 h2 h3"
  friend bool operator==(const MachineConfig&, const MachineConfig&) = default;
};

MachineConfig initial_config(const OtmProgram& p, const BitTape& input, const BitTape& param);

struct StepResult {
  MachineConfig cfg;
  bool halted = false;
};
// One successor stage; raises missing-transition when no rule applies.
StepResult otm_step(const MachineConfig& cfg, const OtmProgram& p);

// Eventually periodic behavior below a limit: `period` holds the
// configurations at p + 1 consecutive stages, the last one repeating the
// first up to a shift of shift[i] cells on tape i. A tape with a positive
// shift has its head tend to the limit and never returns below its
// position at period start.
struct CofinalBehavior {
  Ordinal limit;
  std::vector<MachineConfig> period;
  std::array<uint64_t, kTapes> shift{};
};
// Cells, heads and state take their inferior limits.
MachineConfig otm_limit(const CofinalBehavior& h);

enum class RunStatus { Halted, OutOfBudget, Crashed };

struct RunResult {
  RunStatus status = RunStatus::OutOfBudget;
  BitTape output;  // the output tape when halted
  MachineConfig final_config;
  std::string detail;
};

struct RunOptions {
  // Successor steps tried inside one w-block before giving up on finding
  // a recognizable limit behavior.
  uint64_t max_block_steps = 1u << 20;
  std::function<void(const MachineConfig&)> trace;
};

// Runs every stage below `budget`; halting at stage s <= budget counts.
RunResult otm_run(const OtmProgram& p, const BitTape& input, const BitTape& param, const Ordinal& budget,
                  const RunOptions& o = {});

// Machine-level programs. The member tester takes a set code on the input
// tape and alpha as a single one at position alpha of the parameter tape,
// and leaves the answer in output cell 0. The appender takes a sequence
// code and a pair code and writes the extended sequence code.
const OtmProgram& member_program();
const OtmProgram& seq_append_program();
// The member tester with its accepting write flipped, for harness tests.
OtmProgram corrupted_member_program();

struct SuiteReport {
  uint64_t member_cases = 0, member_agree = 0;
  uint64_t append_cases = 0, append_agree = 0;
  std::vector<std::string> disagreements;
  bool all_agree() const { return member_agree == member_cases && append_agree == append_cases; }
  std::string to_string() const;
};

// Every subset of {0..7} against every alpha < 8, and appends of small
// pairs onto short sequences (including the empty one).
SuiteReport otm_reference_suite(const OtmProgram& member = member_program(),
                                const OtmProgram& append = seq_append_program());

}  // namespace otmr
