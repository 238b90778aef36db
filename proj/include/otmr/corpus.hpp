#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "otmr/formula.hpp"

namespace otmr {

struct CorpusOptions {
  int depth = 3;
  unsigned rank = 3;          // constants are drawn from V_rank
  double seq_bound = 0.08;    // chance of a length-2 bounded quantifier
  double omega = 0.05;        // chance of a w-indexed connective
};

// A random Delta0 sentence. Every connective and both bounded forms occur
// with positive probability.
Formula random_delta0(std::mt19937_64& rng, const CorpusOptions& o);
// An existential block of one or two variables over a random Delta0 matrix.
Formula random_sigma1(std::mt19937_64& rng, const CorpusOptions& o);

// A random Delta0 formula whose free variables are among `vars`. Bound
// variables are numbered from first_bound, and always above every var.
Formula random_open_delta0(std::mt19937_64& rng, const CorpusOptions& o, const std::vector<uint32_t>& vars,
                           uint32_t first_bound = 0);

struct CorpusEntry {
  Formula formula;
  FClass label;
};

// Deterministic for a given seed: half Delta0, half Sigma1.
std::vector<CorpusEntry> corpus_generate(uint64_t seed, int depth, unsigned rank, size_t count);
// One "label<TAB>formula" line per entry.
std::string corpus_text(const std::vector<CorpusEntry>& c);

}  // namespace otmr
