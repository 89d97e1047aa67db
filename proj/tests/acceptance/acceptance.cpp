// One PASS/FAIL line per acceptance criterion. Exit status 1 if any fails.
#include <cstdio>

#include "tori/golden.hpp"
#include "tori/homology.hpp"

int main() {
  tori::set_resolution_audit(true);
  int failed = 0;
  for (const auto& c : tori::golden_cases()) {
    auto rep = tori::run_golden(c.id);
    std::printf("%s criterion %d: %s (%zu checks, %.1fs)\n", rep.pass() ? "PASS" : "FAIL", rep.criterion,
                rep.title.c_str(), rep.checks.size(), rep.seconds);
    for (const auto& chk : rep.checks)
      if (!chk.ok) std::printf("    failed: %s %s\n", chk.what.c_str(), chk.detail.c_str());
    std::fflush(stdout);
    if (!rep.pass()) ++failed;
  }
  return failed ? 1 : 0;
}
