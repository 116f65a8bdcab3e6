#include "mdflow/bnb.hpp"

#include <algorithm>
#include <chrono>
#include <limits>

#include "mdflow/detail/cover_search.hpp"

namespace mdflow {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct VectorPolicy {
  const FlowNetwork* net;

  struct TrackScore {
    std::vector<double> run_min;
    double sum = kInf;
  };

  TrackScore fresh() const {
    return TrackScore{std::vector<double>(net->k(), kInf), kInf};
  }

  void apply_edge(TrackScore& s, EdgeId e) const {
    const CapVec& cap = net->edge(e).cap;
    if (cap.is_infinite()) return;
    double sum = 0.0;
    for (int i = 0; i < net->k(); ++i) {
      s.run_min[i] = std::min(s.run_min[i], cap.values()[i]);
      sum += s.run_min[i];
    }
    s.sum = sum;
  }

  double track_bound(const TrackScore& s) const { return s.sum; }

  double enter_value(NodeId v) const { return enter_value_bound(*net, v); }

  double evaluate_cover(const PathCover& cover) const {
    return flow_from_paths(*net, cover).objective;
  }
};

const char* status_names[] = {"optimal", "time-limit", "infeasible"};

SolveResult run(const FlowNetwork& net, SolverConfig cfg) {
  if (cfg.time_limit_seconds <= 0 || cfg.node_limit <= 0) {
    throw Error("solver limits must be positive");
  }
  if (cfg.tie_break != "canonical") {
    throw Error("unknown tie-break rule: " + cfg.tie_break);
  }
  const auto t0 = std::chrono::steady_clock::now();
  VectorPolicy policy{&net};
  detail::CoverSearch<VectorPolicy> search(net, policy, cfg);
  auto outcome = search.run();

  SolveResult result;
  result.nodes_explored = outcome.nodes;
  result.elapsed_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  if (!outcome.cover) {
    result.status = outcome.exhausted ? SolveStatus::Infeasible
                                      : SolveStatus::TimeLimit;
    result.best_bound = outcome.abandoned_bound;
    return result;
  }
  result.cover = std::move(outcome.cover);
  result.solution = flow_from_paths(net, *result.cover);
  result.status = (outcome.exhausted && !cfg.greedy_only)
                      ? SolveStatus::Optimal
                      : SolveStatus::TimeLimit;
  result.best_bound = result.status == SolveStatus::Optimal
                          ? result.solution->objective
                          : std::max(result.solution->objective,
                                     outcome.abandoned_bound);
  if (!validate(net, *result.solution).empty()) {
    throw Error("internal: solver produced an infeasible solution");
  }
  return result;
}

}  // namespace

const char* solve_status_name(SolveStatus s) {
  return status_names[static_cast<int>(s)];
}

SolveResult solve(const FlowNetwork& net, const SolverConfig& cfg) {
  return run(net, cfg);
}

SolveResult greedy_solve(const FlowNetwork& net) {
  SolverConfig cfg;
  cfg.greedy_only = true;
  return run(net, cfg);
}

double enter_value_bound(const FlowNetwork& net, NodeId v) {
  auto enter = net.find_edge(net.source(), v);
  if (!enter) return -kInf;
  double best_out = -kInf;
  for (EdgeId e : net.out_edges(v)) {
    best_out = std::max(best_out, net.edge(e).cap.entry_sum());
  }
  return std::min(net.edge(*enter).cap.entry_sum(), best_out);
}

double upper_bound(const FlowNetwork& net, const SearchNode& node,
                   std::span<const NodeId> remaining) {
  // Per-track subtotals, matching the grouping of cover objectives.
  double bound = 0.0;
  for (const auto& run_min : node.open_track_min) {
    double track = 0.0;
    for (double m : run_min) track += m;
    bound += track;
  }
  const int extra = net.d() - node.opened;
  if (extra > 0) {
    double best = -kInf;
    for (NodeId v : remaining) {
      if (net.find_edge(net.source(), v)) {
        best = std::max(best, enter_value_bound(net, v));
      }
    }
    bound += extra * best;
  }
  return bound;
}

}  // namespace mdflow
