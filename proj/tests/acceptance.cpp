#include <iostream>

#include "entronet/selftest.hpp"

int main(int argc, char** argv) {
  entronet::SelftestOptions opt;
  if (argc > 1) opt.fixture_dir = argv[1];
  if (argc > 2) opt.golden_dir = argv[2];
  std::cout << "seed " << opt.seed << "\n";
  auto results = entronet::run_selftest(opt, &std::cout);
  int failed = 0;
  for (const auto& r : results) failed += !r.passed;
  std::cout << results.size() - failed << "/" << results.size() << " criteria passed\n";
  return failed == 0 ? 0 : 1;
}
