#pragma once

#include <optional>
#include <vector>

#include "mdflow/mot/graph.hpp"
#include "mdflow/solver_config.hpp"

namespace mdflow::mot {

enum class SimilarityKind { Cosine, HistogramIntersection };

struct ScalarCostParams {
  SimilarityKind similarity = SimilarityKind::Cosine;
  double enter_exit = 0.2;  // cost of each enter and each exit edge
};

// Per-edge additive costs on the tracking graph: observation edges cost 0,
// enter/exit edges a constant, transition edges 1 - similarity of the two
// detections' features. All costs are non-negative.
struct ScalarCosts {
  std::vector<double> edge_cost;  // indexed by EdgeId of the graph
};

ScalarCosts scalar_costs(const MotGraph& graph, const ScalarCostParams& params);

struct ScalarResult {
  SolveStatus status;
  std::optional<TrackSet> tracks;
  std::optional<PathCover> cover;  // canonical form
  double total_cost = 0.0;
  long nodes_explored = 0;
};

// Exact minimum-cost path cover over the same feasible set as the vector
// solver (identical graph, identical branching); ties broken canonically.
ScalarResult solve_scalar(const MotGraph& graph, const ScalarCosts& costs,
                          const SolverConfig& cfg = {});

// Total cost of a cover under the given costs.
double cover_cost(const MotGraph& graph, const ScalarCosts& costs,
                  const PathCover& cover);

}  // namespace mdflow::mot
