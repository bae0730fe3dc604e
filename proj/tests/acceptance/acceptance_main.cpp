// Runs every acceptance criterion and prints one PASS/FAIL line each.
// Exit status is nonzero if any criterion fails.
//
//   sng_acceptance [--only 1,5,9] [--out DIR]

#include <cstdlib>
#include <iostream>
#include <set>
#include <sstream>
#include <string>

#include "sng/experiments.hpp"

int main(int argc, char** argv) {
  sng::VerifyOptions options;
  std::set<int> only;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--only" && i + 1 < argc) {
      std::stringstream list(argv[++i]);
      for (std::string item; std::getline(list, item, ',');) {
        only.insert(std::stoi(item));
      }
    } else if (arg == "--out" && i + 1 < argc) {
      options.out_dir = argv[++i];
    } else {
      std::cerr << "usage: sng_acceptance [--only ids] [--out dir]\n";
      return 2;
    }
  }

  int failed = 0;
  for (const auto& criterion : sng::acceptance_criteria()) {
    if (!only.empty() && !only.count(criterion.id)) continue;
    const auto result = sng::run_criterion(criterion, options);
    std::cout << sng::format_result_line(result) << std::endl;
    failed += !result.passed;
  }
  std::cout << (failed == 0 ? "ALL ACCEPTANCE CRITERIA PASSED"
                            : std::to_string(failed) + " CRITERIA FAILED")
            << std::endl;
  return failed == 0 ? EXIT_SUCCESS : EXIT_FAILURE;
}
