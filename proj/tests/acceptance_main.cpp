// Acceptance suite: one line per criterion, nonzero exit on any failure.
#include <cstdlib>
#include <iostream>

#include "covsemi/acceptance.hpp"

int main(int argc, char** argv) {
  covsemi::acceptance::options opt;
  opt.log = &std::cout;
  if (const char* s = std::getenv("COVSEMI_SEED")) opt.seed = std::strtoull(s, nullptr, 10);
  if (const char* t = std::getenv("COVSEMI_THREADS")) opt.threads = std::atoi(t);
  if (argc > 1) opt.threads = std::atoi(argv[1]);

  auto results = covsemi::acceptance::run_all(opt);
  bool all = true;
  for (const auto& r : results) all = all && (r.pass || r.skipped);
  std::cout << (all ? "ACCEPTANCE: all criteria pass" : "ACCEPTANCE: FAILURES PRESENT")
            << std::endl;
  return all ? 0 : 1;
}
