#include <cstdlib>
#include <iostream>
#include <string>

#include "l1pred/validation.hpp"

using namespace l1pred::validation;

int main(int argc, char** argv) {
  Options opts;
  if (argc > 1 && std::string(argv[1]) == "--quick") opts.tier = Tier::quick;
  if (const char* seed = std::getenv("L1PRED_SEED")) opts.seed = std::stoull(seed);

  int failed = 0;
  run_all(opts, [&](const CriterionResult& r) {
    std::cout << r.summary() << std::endl;
    if (r.passed()) return;
    ++failed;
    for (const auto& c : r.checks) {
      if (c.passed) continue;
      std::cout << "    " << c.name << ": observed " << c.observed << ", expected " << c.expected << ", tolerance "
                << c.tolerance;
      if (!c.detail.empty()) std::cout << " [" << c.detail << "]";
      std::cout << std::endl;
    }
  });
  std::cout << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " criteria failed") << std::endl;
  return failed == 0 ? 0 : 1;
}
