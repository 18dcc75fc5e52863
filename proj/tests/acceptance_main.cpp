#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <string>

#include "treepark/acceptance.hpp"

int main(int argc, char** argv) {
  treepark::AcceptanceOptions opts;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--criterion" && i + 1 < argc) {
      opts.only = std::atoi(argv[++i]);
    } else if (a == "--seed" && i + 1 < argc) {
      opts.seed = std::strtoull(argv[++i], nullptr, 10);
    } else if (a == "--threads" && i + 1 < argc) {
      opts.threads = std::atoi(argv[++i]);
    } else if (a == "--out" && i + 1 < argc) {
      opts.out_dir = argv[++i];
    } else if (a == "--skip-mc-invariants") {
      opts.include_mc_invariants = false;
    } else {
      std::fprintf(stderr,
                   "usage: treepark_acceptance [--criterion N] [--seed S] [--threads T] "
                   "[--out DIR] [--skip-mc-invariants]\n");
      return 2;
    }
  }
  const auto results = treepark::run_acceptance(opts);
  const int failures = treepark::report_acceptance(results);
  std::printf("%zu criteria, %d failure(s)\n", results.size(), failures);
  return failures == 0 ? 0 : 1;
}
