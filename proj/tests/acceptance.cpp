// Acceptance suite: runs every criterion at its stated tolerance and prints
// one pass/fail line each.  Exit status 0 iff all pass.

#include <cstdio>
#include <cstdlib>
#include <cstring>

#include "flipforge/verify.hpp"

int main(int argc, char** argv) {
  flipforge::verify::Options opt;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--quick") == 0) {
      // Development shortcut: trims the two big sample sizes.  The shipped
      // gate runs without it.
      opt.max_polygon = 10;
      opt.random_pairs = 60;
      opt.algo_instances = 800;
    } else if (std::strncmp(argv[i], "--seed=", 7) == 0) {
      opt.seed = std::strtoull(argv[i] + 7, nullptr, 10);
    }
  }
  if (const char* env = std::getenv("FLIPFORGE_BUDGET"))
    opt.search.max_states = std::strtoull(env, nullptr, 10);

  auto results = flipforge::verify::run(opt);
  bool all = true;
  for (const auto& r : results) {
    std::printf("%s %-42s %7.2fs  %s\n", r.pass ? "PASS" : "FAIL", r.name.c_str(), r.seconds,
                r.detail.c_str());
    all = all && r.pass;
  }
  std::printf("%s: %zu/%zu criteria passed\n", all ? "ACCEPTANCE PASS" : "ACCEPTANCE FAIL",
              static_cast<size_t>(std::count_if(results.begin(), results.end(),
                                                [](const auto& r) { return r.pass; })),
              results.size());
  return all ? 0 : 1;
}
