#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "otmr/interp.hpp"

namespace otmr {

struct SuiteConfig {
  unsigned rank = 3;  // universe rank for the realisability criteria
  uint64_t seed = 1;
  uint64_t fuel = kDefaultFuel;
};

struct CriterionResult {
  int id = 0;
  std::string title;
  bool holds = false;    // the property itself
  bool in_time = false;  // finished within the limit
  double seconds = 0;
  double limit = 0;
  std::string detail;    // counts, deterministic for a given config
  bool passed() const { return holds && in_time; }
};

const std::vector<int>& criterion_ids();  // 1..9
CriterionResult run_criterion(int id, const SuiteConfig& c);
std::vector<CriterionResult> run_suite(const SuiteConfig& c, const std::vector<int>& ids = {});

// "PASS 3 set codes: ... [1.20 s < 120 s]"; stable lines drop the measured
// time and keep only whether the limit was met.
std::string report_line(const CriterionResult& r, bool stable);
std::string summary_json(const std::vector<CriterionResult>& rs, const SuiteConfig& c, bool stable);

}  // namespace otmr
