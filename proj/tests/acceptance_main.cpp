// Acceptance suite runner: one pass/fail line per criterion.
// Flags: --quick (reduced replicates), --only 1,2,... , --seed S, --threads T.

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <string>

#include "pva/acceptance.hpp"

int main(int argc, char** argv) {
  pva::AcceptanceOptions opt;
  for (int i = 1; i < argc; ++i) {
    std::string arg = argv[i];
    if (arg == "--quick") {
      opt.quick = true;
    } else if (arg == "--only" && i + 1 < argc) {
      std::string list = argv[++i];
      size_t pos = 0;
      while (pos < list.size()) {
        size_t next = list.find(',', pos);
        opt.only.push_back(std::atoi(list.substr(pos, next - pos).c_str()));
        if (next == std::string::npos) break;
        pos = next + 1;
      }
    } else if (arg == "--seed" && i + 1 < argc) {
      opt.seed = std::strtoull(argv[++i], nullptr, 10);
    } else if (arg == "--threads" && i + 1 < argc) {
      opt.threads = std::atoi(argv[++i]);
    } else {
      std::fprintf(stderr, "unknown flag: %s\n", arg.c_str());
      return 1;
    }
  }
  auto results = pva::run_acceptance(opt);
  int failed = 0;
  for (const auto& r : results)
    if (!r.passed) ++failed;
  std::printf("%zu criteria run, %d failed\n", results.size(), failed);
  return failed == 0 ? 0 : 2;
}
