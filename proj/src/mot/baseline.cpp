#include "mdflow/mot/baseline.hpp"

#include <algorithm>
#include <limits>

#include "mdflow/detail/cover_search.hpp"
#include "mdflow/mot/similarity.hpp"

namespace mdflow::mot {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Additive costs, maximized as negated sums so the one search engine serves
// both scoring models.
struct ScalarPolicy {
  const FlowNetwork* net;
  const std::vector<double>* cost;
  double min_exit_cost;

  struct TrackScore {
    double neg_cost = 0.0;
  };

  TrackScore fresh() const { return {}; }

  void apply_edge(TrackScore& s, EdgeId e) const { s.neg_cost -= (*cost)[e]; }

  // Remaining edges cost at least zero; the forced exit at least min_exit.
  double track_bound(const TrackScore& s) const {
    return s.neg_cost - min_exit_cost;
  }

  double enter_value(NodeId v) const {
    auto e = net->find_edge(net->source(), v);
    if (!e) return -kInf;
    return -(*cost)[*e] - min_exit_cost;
  }

  // Per-path subtotals in cover order, mirroring the per-track bound slots.
  double evaluate_cover(const PathCover& cover) const {
    double total = 0.0;
    for (const auto& path : cover.paths) {
      double path_cost = 0.0;
      for (size_t i = 0; i + 1 < path.size(); ++i) {
        path_cost += (*cost)[*net->find_edge(path[i], path[i + 1])];
      }
      total += path_cost;
    }
    return -total;
  }
};

}  // namespace

ScalarCosts scalar_costs(const MotGraph& graph, const ScalarCostParams& params) {
  if (params.enter_exit < 0) throw Error("enter/exit cost must be >= 0");
  ScalarCosts costs;
  costs.edge_cost.assign(graph.net.num_edges(), 0.0);
  for (EdgeId e = 0; e < graph.net.num_edges(); ++e) {
    switch (graph.roles[e]) {
      case EdgeRole::Observation:
        break;
      case EdgeRole::Enter:
      case EdgeRole::Exit:
        costs.edge_cost[e] = params.enter_exit;
        break;
      case EdgeRole::Transition: {
        const Detection& a =
            graph.detections[graph.det_of_node[graph.net.edge(e).from]];
        const Detection& b =
            graph.detections[graph.det_of_node[graph.net.edge(e).to]];
        const double sim = params.similarity == SimilarityKind::Cosine
                               ? cosine_similarity(a.feature, b.feature)
                               : histogram_intersection(a.feature, b.feature);
        costs.edge_cost[e] = 1.0 - sim;
        break;
      }
    }
  }
  return costs;
}

double cover_cost(const MotGraph& graph, const ScalarCosts& costs,
                  const PathCover& cover) {
  ScalarPolicy policy{&graph.net, &costs.edge_cost, 0.0};
  return -policy.evaluate_cover(cover);
}

ScalarResult solve_scalar(const MotGraph& graph, const ScalarCosts& costs,
                          const SolverConfig& cfg) {
  if (static_cast<int>(costs.edge_cost.size()) != graph.net.num_edges()) {
    throw Error("cost vector does not match graph edge count");
  }
  for (double c : costs.edge_cost) {
    if (!(c >= 0.0)) throw Error("edge costs must be non-negative");
  }
  if (cfg.tie_break != "canonical") {
    throw Error("unknown tie-break rule: " + cfg.tie_break);
  }

  double min_exit = kInf;
  for (EdgeId e : graph.net.in_edges(graph.net.sink())) {
    min_exit = std::min(min_exit, costs.edge_cost[e]);
  }
  if (min_exit == kInf) min_exit = 0.0;  // no exit edges; infeasible anyway

  ScalarPolicy policy{&graph.net, &costs.edge_cost, min_exit};
  detail::CoverSearch<ScalarPolicy> search(graph.net, policy, cfg);
  auto outcome = search.run();

  ScalarResult result;
  result.nodes_explored = outcome.nodes;
  if (!outcome.cover) {
    result.status = outcome.exhausted ? SolveStatus::Infeasible
                                      : SolveStatus::TimeLimit;
    return result;
  }
  result.status = (outcome.exhausted && !cfg.greedy_only)
                      ? SolveStatus::Optimal
                      : SolveStatus::TimeLimit;
  result.total_cost = -outcome.value;
  result.tracks = decode_tracks(graph, *outcome.cover);
  result.cover = std::move(outcome.cover);
  return result;
}

}  // namespace mdflow::mot
