#pragma once

// Acceptance criteria as executable checks.

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace hohmann::verification {

struct Check {
  std::string label;
  bool passed = false;
  std::string measured;
  std::string expected;
};

struct CriterionResult {
  int id = 0;
  std::string title;
  bool passed = false;
  double seconds = 0.0;
  std::vector<Check> checks;
  std::vector<std::string> notes;  // informational, never gating

  /// One line: "[PASS] 3 transfer time, Example 2 (0.000 s)".
  std::string summary_line() const;
};

struct Report {
  std::vector<CriterionResult> results;
  bool all_passed() const;
};

inline constexpr int kCriterionCount = 10;

/// Titles indexed 1..kCriterionCount.
std::string_view criterion_title(int id);

/// Parses "1,3,7-9" into ids; empty or "all" selects every criterion. Throws
/// ConfigError on malformed input or ids out of range.
std::vector<int> parse_filter(std::string_view filter);

CriterionResult run_criterion(int id);

/// Runs the selected criteria. With a log stream, each criterion's lines are
/// written as soon as it finishes.
Report run(std::string_view filter = {}, std::ostream* log = nullptr, bool verbose = false);

/// Detailed multi-line rendering of a criterion.
std::string describe(const CriterionResult& result);

}  // namespace hohmann::verification
