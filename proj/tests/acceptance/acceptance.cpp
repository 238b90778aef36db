#include <cstdio>
#include <fstream>

#include "otmr/suite.hpp"

// One PASS/FAIL line per acceptance criterion; exit status 0 iff all pass.
int main(int argc, char** argv) {
  otmr::SuiteConfig c;
  std::vector<otmr::CriterionResult> rs;
  for (int id : otmr::criterion_ids()) {
    rs.push_back(otmr::run_criterion(id, c));
    std::printf("%s\n", otmr::report_line(rs.back(), false).c_str());
    std::fflush(stdout);
  }
  if (argc > 1) std::ofstream(argv[1]) << otmr::summary_json(rs, c, false);
  for (const auto& r : rs)
    if (!r.passed()) return 1;
  return 0;
}
