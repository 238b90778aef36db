// Batch front end. Exit codes: 0 success, 1 semantic refusal, 2 usage.
//
// Defaults for fuel and universe rank come from OTMR_FUEL and OTMR_RANK; a
// JSON file given by --config (keys "fuel", "rank") overrides them, and
// per-command flags override both.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "otmr/axioms.hpp"
#include "otmr/corpus.hpp"
#include "otmr/error.hpp"
#include "otmr/glued.hpp"
#include "otmr/otm.hpp"
#include "otmr/realize.hpp"
#include "otmr/setcode.hpp"
#include "otmr/suite.hpp"
#include "otmr/tape.hpp"
#include "otmr/truth.hpp"

using namespace otmr;

namespace {

constexpr int kOk = 0, kRefused = 1, kUsage = 2;

struct Defaults {
  uint64_t fuel = kDefaultFuel;
  unsigned rank = 3;
};

uint64_t env_number(const char* name, uint64_t fallback) {
  const char* v = std::getenv(name);
  if (!v || !*v) return fallback;
  try {
    size_t used = 0;
    unsigned long long n = std::stoull(v, &used);
    if (used != std::string(v).size()) throw std::invalid_argument(v);
    return n;
  } catch (const std::exception&) {
    throw Error("usage", std::string(name) + " is not a number: " + v);
  }
}

Defaults load_defaults(const std::string& config) {
  Defaults d;
  d.fuel = env_number("OTMR_FUEL", d.fuel);
  d.rank = static_cast<unsigned>(env_number("OTMR_RANK", d.rank));
  if (config.empty()) return d;
  std::ifstream in(config);
  if (!in) throw Error("io-error", "cannot read " + config);
  nlohmann::json j;
  try {
    in >> j;
    if (j.contains("fuel")) d.fuel = j.at("fuel").get<uint64_t>();
    if (j.contains("rank")) d.rank = j.at("rank").get<unsigned>();
  } catch (const nlohmann::json::exception& e) {
    throw Error("usage", config + ": " + e.what());
  }
  return d;
}

// "{0,3,w..}": points, and runs marked by a trailing "..".
OrdSet parse_ordset(std::string text) {
  auto trim = [](std::string s) {
    size_t a = s.find_first_not_of(" \t"), b = s.find_last_not_of(" \t");
    return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
  };
  text = trim(text);
  if (text.size() < 2 || text.front() != '{' || text.back() != '}')
    throw Error("parse-error", "ordinal set must be braced: " + text);
  OrdSet out;
  std::stringstream items(text.substr(1, text.size() - 2));
  for (std::string item; std::getline(items, item, ',');) {
    item = trim(item);
    if (item.empty()) continue;
    if (item.size() > 2 && item.ends_with(".."))
      out.add_run(Ordinal::parse(item.substr(0, item.size() - 2)));
    else
      out.insert(Ordinal::parse(item));
  }
  return out;
}

Assignment parse_assignment(const std::string& text) {
  Assignment a;
  std::stringstream items(text);
  for (std::string item; std::getline(items, item, ';');) {
    if (item.find_first_not_of(" \t") == std::string::npos) continue;
    size_t eq = item.find('=');
    size_t x = item.find('x');
    if (eq == std::string::npos || x == std::string::npos || x > eq)
      throw Error("parse-error", "assignment entries look like x0={}: " + item);
    uint32_t var = static_cast<uint32_t>(std::stoul(item.substr(x + 1, eq - x - 1)));
    a[var] = HFSet::parse(item.substr(eq + 1));
  }
  return a;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("io-error", "cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Yes: return "yes";
    case Verdict::No: return "no";
    default: return "unknown";
  }
}

const char* status_name(RunStatus s) {
  switch (s) {
    case RunStatus::Halted: return "halted";
    case RunStatus::OutOfBudget: return "out-of-budget";
    default: return "crashed";
  }
}

bool usage_kind(const std::string& kind) {
  return kind == "usage" || kind == "parse-error" || kind == "io-error" || kind == "bad-instance" ||
         kind == "unknown-axiom";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ordinal machine realisability toolkit"};
  app.require_subcommand(1);
  std::string config;
  app.add_option("--config", config, "JSON file with \"fuel\" and \"rank\" defaults");

  std::optional<uint64_t> fuel_flag;
  std::optional<unsigned> rank_flag;
  auto add_budget = [&](CLI::App* c) {
    c->add_option("--fuel", fuel_flag, "interpreter steps per application");
    c->add_option("--universe-rank", rank_flag, "verification universe V_rank plus constants");
  };

  // encode / decode
  std::string ordset_text, set_text, tape_text, code_text;
  std::optional<uint64_t> scramble;
  auto* encode = app.add_subcommand("encode", "ordinal set to tape code, or hereditarily finite set to set code");
  auto* enc_group = encode->add_option_group("input");
  enc_group->add_option("--ordset", ordset_text, "e.g. {0,3,w..}");
  enc_group->add_option("--set", set_text, "e.g. {{},{{}}}");
  enc_group->require_option(1);
  encode->add_option("--scramble", scramble, "seed for a non-canonical set code");

  auto* decode = app.add_subcommand("decode", "tape code to ordinal set, or set code to set");
  auto* dec_group = decode->add_option_group("input");
  dec_group->add_option("--tape", tape_text, "e.g. (01)^w011");
  dec_group->add_option("--code", code_text, "e.g. \"code(1; 0,1; 2)\"");
  dec_group->require_option(1);

  // eval
  std::string formula_text, assign_text, mode = "auto";
  auto* eval = app.add_subcommand("eval", "truth of a formula under an assignment");
  eval->add_option("--formula", formula_text)->required();
  eval->add_option("--assign", assign_text, "e.g. \"x0={};x1={{}}\"");
  eval->add_option("--universe-rank", rank_flag, "brute-force universe V_rank plus constants");
  eval->add_option("--mode", mode)->check(CLI::IsMember({"auto", "delta0", "brute"}));

  // realisability
  std::string realizer_text, axiom_name;
  bool uniform = false, emit_formula = false;
  auto* realize = app.add_subcommand("realize", "realiser for a true sentence or an axiom instance");
  realize->add_option("--formula", formula_text, "the sentence, or the schema body with --axiom");
  realize->add_option("--axiom", axiom_name)->check(CLI::IsMember(axiom_ids()));
  realize->add_flag("--emit-formula", emit_formula, "also print the realised formula on a second line");
  add_budget(realize);

  auto* verify_cmd = app.add_subcommand("verify", "check a realiser against a sentence");
  verify_cmd->add_option("--realizer", realizer_text)->required();
  verify_cmd->add_option("--formula", formula_text)->required();
  verify_cmd->add_flag("--uniform", uniform, "also require code-independent outputs");
  add_budget(verify_cmd);

  auto* extract = app.add_subcommand("extract", "disjunct or witness from a realiser");
  extract->add_option("--realizer", realizer_text)->required();
  extract->add_option("--formula", formula_text)->required();
  extract->add_option("--fuel", fuel_flag);

  std::string oracle_path;
  auto* glued = app.add_subcommand("glued-verify", "realisability with provability from an oracle database");
  glued->add_option("--realizer", realizer_text)->required();
  glued->add_option("--formula", formula_text)->required();
  glued->add_option("--oracle", oracle_path, "one formula per line");
  add_budget(glued);

  auto* dp = app.add_subcommand("dp-extract", "selected disjunct of a glued-realised disjunction");
  dp->add_option("--realizer", realizer_text)->required();
  dp->add_option("--formula", formula_text)->required();
  dp->add_option("--oracle", oracle_path, "one formula per line");
  add_budget(dp);

  // machines
  std::string program_path, builtin, input_text, param_text, budget_text = "w*4";
  bool trace = false;
  auto* run = app.add_subcommand("run-otm", "run a machine program");
  auto* prog_group = run->add_option_group("program");
  prog_group->add_option("--program", program_path, "transition file");
  prog_group->add_option("--builtin", builtin)->check(CLI::IsMember({"member", "append", "corrupted-member"}));
  prog_group->require_option(1);
  run->add_option("--input", input_text, "input tape literal");
  run->add_option("--param", param_text, "parameter tape literal");
  run->add_option("--budget", budget_text, "ordinal stage budget");
  run->add_flag("--trace", trace, "print the configuration at every stage");

  // corpus and suite
  uint64_t seed = 1;
  int depth = 2;
  size_t count = 100;
  std::string out_path;
  auto* corpus = app.add_subcommand("corpus", "deterministic labelled Delta0/Sigma1 sentences");
  corpus->add_option("--seed", seed);
  corpus->add_option("--depth", depth);
  corpus->add_option("--rank", rank_flag);
  corpus->add_option("--count", count);
  corpus->add_option("--out", out_path, "file instead of standard output");

  bool stable = false;
  std::string summary_path;
  std::vector<int> only;
  auto* suite = app.add_subcommand("suite", "acceptance criteria report");
  suite->add_option("--rank", rank_flag);
  suite->add_option("--seed", seed);
  suite->add_option("--fuel", fuel_flag);
  suite->add_option("--only", only, "criterion ids")->check(CLI::Range(1, 9));
  suite->add_flag("--stable", stable, "omit measured times");
  suite->add_option("--summary", summary_path, "JSON summary file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    Defaults d = load_defaults(config);
    uint64_t fuel = fuel_flag.value_or(d.fuel);
    unsigned rank = rank_flag.value_or(d.rank);
    set_synthesis_rank(rank);

    if (*encode) {
      if (!ordset_text.empty()) {
        std::cout << encode_ordset(parse_ordset(ordset_text)).to_string() << "\n";
      } else {
        HFSet x = HFSet::parse(set_text);
        std::cout << (scramble ? build_code_scrambled(x, *scramble) : build_code(x)).to_string() << "\n";
      }
      return kOk;
    }

    if (*decode) {
      if (!tape_text.empty())
        std::cout << decode_ordset(BitTape::parse(tape_text)).set.to_string() << "\n";
      else
        std::cout << decode_set(Code::parse(code_text)).to_string() << "\n";
      return kOk;
    }

    if (*eval) {
      Formula f = Formula::parse(formula_text);
      Assignment a = parse_assignment(assign_text);
      for (uint32_t v : free_vars(f))
        if (!a.count(v)) throw Error("usage", "x" + std::to_string(v) + " is free and unassigned");
      bool delta0 = is_delta0(classify(f));
      if (mode == "delta0" && !delta0) throw Error("usage", "not a Delta0 formula; use --mode brute");
      bool truth;
      if (mode == "brute" || !delta0) {
        auto cs = constants(f);
        std::vector<HFSet> extra(cs.begin(), cs.end());
        for (const auto& [v, x] : a) extra.push_back(x);
        truth = eval_bruteforce(f, make_universe(rank, extra), a);
      } else {
        truth = eval_delta0(f, a);
      }
      std::cout << (truth ? 1 : 0) << "\n";
      return kOk;
    }

    if (*realize) {
      if (!axiom_name.empty()) {
        std::optional<Formula> phi;
        if (!formula_text.empty()) phi = Formula::parse(formula_text);
        AxiomRealizer ar = realize_axiom(axiom_name, phi);
        std::cout << ar.realizer.to_string() << "\n";
        if (emit_formula) std::cout << ar.formula.to_string() << "\n";
        return kOk;
      }
      if (formula_text.empty()) throw Error("usage", "realize needs --formula or --axiom");
      Formula f = Formula::parse(formula_text);
      if (!free_vars(f).empty()) throw Error("usage", "realize expects a sentence");
      if (!sentence_truth(f)) {
        std::cerr << "refused: the sentence is false over V_" << rank << " plus its constants\n";
        return kRefused;
      }
      std::cout << synthesize(f).to_string() << "\n";
      if (emit_formula) std::cout << f.to_string() << "\n";
      return kOk;
    }

    if (*verify_cmd) {
      Value r = Value::parse(realizer_text);
      Formula f = Formula::parse(formula_text);
      CodeUniverse u = CodeUniverse::for_formula(f, rank, 2, fuel);
      bool ok = uniform ? verify_uniform(r, f, u) : verify(r, f, u);
      std::cout << (ok ? 1 : 0) << "\n";
      return ok ? kOk : kRefused;
    }

    if (*extract) {
      Value r = Value::parse(realizer_text);
      Formula f = Formula::parse(formula_text);
      if (f.kind() == FKind::Disj) {
        Extracted e = extract_disjunct(r, f, fuel);
        std::cout << "disjunct " << e.index << "\n" << e.branch.to_string() << "\n" << e.inner.to_string() << "\n";
      } else if (f.kind() == FKind::Exists) {
        Witness w = extract_witness(r, f, fuel);
        std::cout << "witness";
        for (const HFSet& x : w.values) std::cout << " " << x.to_string();
        std::cout << "\n" << w.instance.to_string() << "\n" << w.inner.to_string() << "\n";
      } else {
        throw Error("usage", "extract needs a disjunction or an existential");
      }
      return kOk;
    }

    if (*glued || *dp) {
      Value r = Value::parse(realizer_text);
      Formula f = Formula::parse(formula_text);
      ProvabilityOracle oracle = oracle_path.empty() ? ProvabilityOracle() : ProvabilityOracle::load(oracle_path);
      CodeUniverse u = CodeUniverse::for_formula(f, rank, 2, fuel);
      if (*glued) {
        Verdict v = verify_glued(r, f, oracle, u);
        std::cout << verdict_name(v) << "\n";
        return v == Verdict::Yes ? kOk : kRefused;
      }
      Extracted e = dp_extract(r, f, oracle, u, fuel);
      std::cout << "disjunct " << e.index << "\n" << e.branch.to_string() << "\n" << e.inner.to_string() << "\n";
      return kOk;
    }

    if (*run) {
      OtmProgram p = builtin == "member"   ? member_program()
                     : builtin == "append" ? seq_append_program()
                     : builtin.empty()     ? OtmProgram::parse(read_file(program_path))
                                           : corrupted_member_program();
      RunOptions o;
      if (trace) o.trace = [](const MachineConfig& c) { std::cout << c.dump() << "\n"; };
      RunResult res = otm_run(p, BitTape::parse(input_text), BitTape::parse(param_text), Ordinal::parse(budget_text), o);
      std::cout << status_name(res.status);
      if (res.status == RunStatus::Halted) std::cout << " " << res.output.to_string();
      if (!res.detail.empty()) std::cout << " (" << res.detail << ")";
      std::cout << "\n";
      return res.status == RunStatus::Halted ? kOk : kRefused;
    }

    if (*corpus) {
      std::string text = corpus_text(corpus_generate(seed, depth, rank, count));
      if (out_path.empty()) {
        std::cout << text;
      } else {
        std::ofstream out(out_path, std::ios::binary);
        if (!(out << text)) throw Error("io-error", "cannot write " + out_path);
      }
      return kOk;
    }

    if (*suite) {
      SuiteConfig c;
      c.rank = rank;
      c.seed = seed;
      c.fuel = fuel;
      std::vector<CriterionResult> rs;
      bool all = true;
      for (int id : only.empty() ? criterion_ids() : only) {
        rs.push_back(run_criterion(id, c));
        all = all && rs.back().passed();
        std::cout << report_line(rs.back(), stable) << std::endl;
      }
      if (!summary_path.empty()) {
        std::ofstream out(summary_path, std::ios::binary);
        if (!(out << summary_json(rs, c, stable) << "\n")) throw Error("io-error", "cannot write " + summary_path);
      }
      return all ? kOk : kRefused;
    }
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    return usage_kind(e.kind()) ? kUsage : kRefused;
  }
  return kUsage;
}
