#pragma once

#include <climits>
#include <string>

namespace mdflow {

struct SolverConfig {
  double time_limit_seconds = 1e18;
  long node_limit = LONG_MAX;
  bool greedy_only = false;            // first-choice dive, no backtracking
  std::string tie_break = "canonical"; // the only implemented rule
  int jobs = 1;                        // first-level parallelism
};

enum class SolveStatus {
  Optimal,
  TimeLimit,  // stopped by time or node limit; best incumbent returned
  Infeasible,
};

const char* solve_status_name(SolveStatus s);

}  // namespace mdflow
