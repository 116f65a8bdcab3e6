#pragma once

#include <functional>
#include <optional>

#include "mdflow/flowcore.hpp"

namespace mdflow {

struct EnumerationLimits {
  int max_intermediates = 14;
};

// Streams every PathCover of net exactly once, in canonical order: within a
// cover, paths sorted by first intermediate node id; covers in lexicographic
// order of their sorted path lists. The callback may return false to stop.
// Throws LimitError when the instance exceeds the intermediate-node limit.
void enumerate_covers(const FlowNetwork& net,
                      const std::function<bool(const PathCover&)>& yield,
                      EnumerationLimits limits = {});

enum class OracleStatus { Optimal, Infeasible };

struct OracleResult {
  OracleStatus status;
  std::optional<Solution> solution;
  std::optional<PathCover> cover;
  long covers_enumerated = 0;
};

// Exhaustive ground truth for tiny instances: evaluates every cover via
// flow_from_paths and keeps the maximum; ties go to the first (canonically
// smallest) cover enumerated.
OracleResult brute_force_solve(const FlowNetwork& net,
                               EnumerationLimits limits = {});

}  // namespace mdflow
