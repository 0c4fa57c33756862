#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace roughmetrics::cli {

enum ExitCode : int {
  ok = 0,
  parse_error = 2, // also structurally broken input
  domain_error = 3,
  precondition_error = 4,
  budget_exhausted = 5,
  metric_violation = 6,
  internal_error = 1,
};

/// Runs one command; args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace roughmetrics::cli
