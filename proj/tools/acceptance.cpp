// Runs the acceptance criteria (all, or the ids given) and prints one line each.

#include <cstdio>
#include <cstdlib>
#include <vector>

#include <fmt/format.h>

#include "cchlab/acceptance.hpp"

int main(int argc, char** argv) {
  std::vector<int> ids;
  for (int i = 1; i < argc; ++i) ids.push_back(std::atoi(argv[i]));
  if (ids.empty()) {
    for (int i = 1; i <= cch::criterion_count(); ++i) ids.push_back(i);
  }
  int failed = 0;
  for (int id : ids) {
    const auto r = cch::run_criterion(id);
    fmt::print("{}\n", cch::format_result(r));
    std::fflush(stdout);
    failed += !r.passed;
  }
  return failed == 0 ? 0 : 1;
}
