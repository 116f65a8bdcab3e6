#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace mdflow {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed external input (files, CLI args). Carries location context when known.
class InputError : public Error {
 public:
  using Error::Error;
};

// An s->t path whose edges are all Infinite-capacity has no finite maximum.
class UnboundedError : public Error {
 public:
  using Error::Error;
};

// Instance exceeds a configured enumeration limit.
class LimitError : public Error {
 public:
  using Error::Error;
};

using NodeId = int;
using EdgeId = int;

// k-dimensional edge capacity: a finite non-negative vector, or unbounded.
// Infinite is a symbolic variant, never a numeric sentinel.
class CapVec {
 public:
  static CapVec finite(std::vector<double> values);
  static CapVec infinite() { return CapVec(); }

  bool is_finite() const { return finite_; }
  bool is_infinite() const { return !finite_; }

  // Only valid for finite capacities.
  const std::vector<double>& values() const;

  // Sum of all entries; +inf for the Infinite variant.
  double entry_sum() const;

  bool operator==(const CapVec& other) const {
    return finite_ == other.finite_ && values_ == other.values_;
  }

 private:
  CapVec() : finite_(false) {}
  explicit CapVec(std::vector<double> v) : finite_(true), values_(std::move(v)) {}

  bool finite_;
  std::vector<double> values_;
};

struct Edge {
  NodeId from;
  NodeId to;
  CapVec cap;
};

class FlowNetwork;

// Incremental construction; build() checks all structural invariants.
class NetworkBuilder {
 public:
  NetworkBuilder(int k, int d);

  NodeId add_node(const std::string& name);
  void set_source(NodeId v) { source_ = v; }
  void set_sink(NodeId v) { sink_ = v; }
  void add_edge(NodeId from, NodeId to, CapVec cap);

  FlowNetwork build();

 private:
  int k_;
  int d_;
  NodeId source_ = -1;
  NodeId sink_ = -1;
  std::vector<std::string> names_;
  std::vector<Edge> edges_;
};

// Immutable DAG with vector capacities, distinguished source/sink, dimension
// count k and required path count d. Node order is the canonical order used
// for enumeration and tie-breaking everywhere downstream.
class FlowNetwork {
 public:
  FlowNetwork() = default;  // empty; populate via NetworkBuilder

  int k() const { return k_; }
  int d() const { return d_; }
  NodeId source() const { return source_; }
  NodeId sink() const { return sink_; }

  int num_nodes() const { return static_cast<int>(names_.size()); }
  int num_edges() const { return static_cast<int>(edges_.size()); }
  const std::string& node_name(NodeId v) const { return names_[v]; }
  const std::vector<std::string>& node_names() const { return names_; }
  const Edge& edge(EdgeId e) const { return edges_[e]; }
  const std::vector<Edge>& edges() const { return edges_; }

  bool is_intermediate(NodeId v) const { return v != source_ && v != sink_; }
  int num_intermediates() const { return num_nodes() - 2; }

  // Edge ids sorted by target / origin node id.
  std::span<const EdgeId> out_edges(NodeId v) const { return out_[v]; }
  std::span<const EdgeId> in_edges(NodeId v) const { return in_[v]; }

  std::optional<EdgeId> find_edge(NodeId from, NodeId to) const;

  // Intermediate nodes in topological order, ties broken by node id.
  const std::vector<NodeId>& topo_intermediates() const { return topo_; }

 private:
  friend class NetworkBuilder;

  int k_ = 0;
  int d_ = 0;
  NodeId source_ = -1;
  NodeId sink_ = -1;
  std::vector<std::string> names_;
  std::vector<Edge> edges_;
  std::vector<std::vector<EdgeId>> out_;
  std::vector<std::vector<EdgeId>> in_;
  std::vector<NodeId> topo_;
};

// Exactly d node-disjoint s->t paths covering every intermediate node.
// Each path is the full node sequence including s and t.
struct PathCover {
  std::vector<std::vector<NodeId>> paths;
};

// Sorts paths by their first intermediate node id (distinct across
// node-disjoint paths, so this is a total order within a cover).
void canonicalize(PathCover& cover);

// Lexicographic comparison of canonicalized covers; paths compare by their
// intermediate-node sequences with a shorter prefix ordered first.
// Returns <0, 0, >0.
int compare_covers(const PathCover& a, const PathCover& b);

// Throws Error if the cover violates the PathCover invariants over net.
void check_cover(const FlowNetwork& net, const PathCover& cover);

struct Solution {
  std::vector<std::vector<double>> flow;  // per edge, k entries
  std::vector<char> active;               // per edge, 0/1
  double objective = 0.0;
};

enum class Constraint {
  Capacity,
  FlowConservation,
  NodeCount,
  TotalCount,
  NonNegativity,
};

const char* constraint_name(Constraint c);

struct Violation {
  Constraint family;
  EdgeId edge = -1;  // -1 when the violation is node-scoped
  NodeId node = -1;  // -1 when the violation is edge-scoped
  int dim = -1;      // -1 when not dimension-specific
  double magnitude = 0.0;
  std::string detail;
};

inline constexpr double kFeasibilityEps = 1e-9;

// Checks sol against all five constraint families. Empty result = feasible.
// A solution whose shape does not match net is a structural error, thrown.
std::vector<Violation> validate(const FlowNetwork& net, const Solution& sol,
                                double eps = kFeasibilityEps);

// Sum over source-outgoing edges of the componentwise flow sum.
double objective_value(const FlowNetwork& net, const Solution& sol);

// The unique optimal solution for a fixed activation pattern: each path
// carries the elementwise minimum of the finite capacities along it.
// Throws UnboundedError if some path crosses no finite-capacity edge.
Solution flow_from_paths(const FlowNetwork& net, const PathCover& cover);

// Per-path bottleneck (elementwise min of finite capacities along the path).
std::vector<double> path_bottleneck(const FlowNetwork& net,
                                    std::span<const NodeId> path);

}  // namespace mdflow
