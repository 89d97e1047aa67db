#pragma once

#include <string>
#include <vector>

namespace tori {

// Golden checks against published values, one case per acceptance criterion.
struct GoldenCheck {
  std::string what;
  bool ok = false;
  std::string detail;
};

struct GoldenReport {
  std::string id;
  int criterion = 0;
  std::string title;
  std::vector<GoldenCheck> checks;
  double seconds = 0;
  bool pass() const;
};

struct GoldenCase {
  std::string id;
  int criterion = 0;
  std::string title;
};

struct GoldenOptions {
  size_t budget = 20000;
  size_t jobs = 1;
  size_t snf_cases = 1000;
  size_t shapiro_cases = 200;
  size_t duality_cases = 200;
  unsigned seed = 20240601;
};

const std::vector<GoldenCase>& golden_cases();
// Throws Error for an unknown id.
GoldenReport run_golden(const std::string& id, const GoldenOptions& opt = {});

}  // namespace tori
