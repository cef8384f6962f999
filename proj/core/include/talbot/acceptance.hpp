#pragma once

#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace talbot {

struct CriterionResult {
  int id = 0;
  std::string title;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

struct Criterion {
  int id;
  std::string title;
  std::function<CriterionResult()> run;
};

/// The acceptance criteria, ids 1..11. Tolerances are fixed in the implementation.
const std::vector<Criterion>& acceptance_criteria();

/// `PASS  3  title: detail (1.2 s)`
std::string format_result(const CriterionResult& r);

/// Runs the selected ids (all when empty), printing one line per criterion as it finishes.
std::vector<CriterionResult> run_acceptance(std::span<const int> ids, std::ostream& log);

}  // namespace talbot
