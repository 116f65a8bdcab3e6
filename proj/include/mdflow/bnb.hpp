#pragma once

#include <optional>
#include <span>

#include "mdflow/flowcore.hpp"
#include "mdflow/solver_config.hpp"

namespace mdflow {

struct SolveResult {
  SolveStatus status;
  std::optional<Solution> solution;
  std::optional<PathCover> cover;  // canonical form
  double best_bound = 0.0;         // == objective when Optimal; gap otherwise
  long nodes_explored = 0;
  double elapsed_seconds = 0.0;
};

// Exact solver. Optimal status means the objective equals the global maximum
// of the vector-flow program; among optimal covers the canonically smallest
// is returned, independent of cfg.jobs.
SolveResult solve(const FlowNetwork& net, const SolverConfig& cfg = {});

// Feasible warm-start solution built by taking, per node in topological
// order, the alternative with the best immediate bound. Never optimal by
// construction and may miss covers that exist.
SolveResult greedy_solve(const FlowNetwork& net);

// Partial assignment snapshot used by the admissible bound.
struct SearchNode {
  std::vector<std::vector<double>> open_track_min;  // running elementwise minima
  std::vector<NodeId> assigned;                     // assigned intermediates
  int opened = 0;                                   // tracks opened so far (<= d)
  double partial_bound = 0.0;
};

// Upper bound on the value of any track whose first intermediate node is v:
// the smaller of the enter-edge capacity sum and the best outgoing capacity
// sum (infinite capacities contribute +inf).
double enter_value_bound(const FlowNetwork& net, NodeId v);

// Admissible bound on any feasible completion of `node`: the running minima
// of open tracks can only shrink, and each not-yet-opened track is capped by
// the best remaining enter-eligible node value.
double upper_bound(const FlowNetwork& net, const SearchNode& node,
                   std::span<const NodeId> remaining);

}  // namespace mdflow
