#include "mdflow/flowcore.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <queue>
#include <set>
#include <sstream>

namespace mdflow {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

CapVec CapVec::finite(std::vector<double> values) {
  for (double v : values) {
    if (!(v >= 0.0)) {
      throw Error("finite capacity entries must be non-negative reals");
    }
  }
  return CapVec(std::move(values));
}

const std::vector<double>& CapVec::values() const {
  if (!finite_) throw Error("values() on Infinite capacity");
  return values_;
}

double CapVec::entry_sum() const {
  if (!finite_) return kInf;
  double s = 0.0;
  for (double v : values_) s += v;
  return s;
}

NetworkBuilder::NetworkBuilder(int k, int d) : k_(k), d_(d) {
  if (k < 1) throw Error("dimension count k must be positive");
  if (d < 1) throw Error("path count d must be positive");
}

NodeId NetworkBuilder::add_node(const std::string& name) {
  names_.push_back(name);
  return static_cast<NodeId>(names_.size() - 1);
}

void NetworkBuilder::add_edge(NodeId from, NodeId to, CapVec cap) {
  edges_.push_back(Edge{from, to, std::move(cap)});
}

FlowNetwork NetworkBuilder::build() {
  const int n = static_cast<int>(names_.size());
  if (source_ < 0 || source_ >= n) throw Error("source node not set");
  if (sink_ < 0 || sink_ >= n) throw Error("sink node not set");
  if (source_ == sink_) throw Error("source and sink must differ");

  std::set<std::string> seen_names;
  for (const auto& name : names_) {
    if (!seen_names.insert(name).second) {
      throw Error("duplicate node name: " + name);
    }
  }

  std::set<std::pair<NodeId, NodeId>> seen_edges;
  for (const Edge& e : edges_) {
    if (e.from < 0 || e.from >= n || e.to < 0 || e.to >= n) {
      throw Error("edge endpoint out of range");
    }
    if (e.from == e.to) throw Error("self-loop at node " + names_[e.from]);
    if (e.from == source_ && e.to == sink_) {
      throw Error("direct source->sink edge is not allowed");
    }
    if (e.to == source_) throw Error("source must have no incoming edges");
    if (e.from == sink_) throw Error("sink must have no outgoing edges");
    if (!seen_edges.insert({e.from, e.to}).second) {
      throw Error("duplicate edge " + names_[e.from] + "->" + names_[e.to]);
    }
    if (e.cap.is_finite()) {
      if (static_cast<int>(e.cap.values().size()) != k_) {
        throw Error("capacity dimension mismatch on edge " + names_[e.from] +
                    "->" + names_[e.to]);
      }
      for (double v : e.cap.values()) {
        if (!std::isfinite(v)) {
          throw Error("capacity entries must be finite on edge " +
                      names_[e.from] + "->" + names_[e.to]);
        }
      }
    }
  }

  std::sort(edges_.begin(), edges_.end(), [](const Edge& a, const Edge& b) {
    return std::tie(a.from, a.to) < std::tie(b.from, b.to);
  });

  FlowNetwork net;
  net.k_ = k_;
  net.d_ = d_;
  net.source_ = source_;
  net.sink_ = sink_;
  net.names_ = std::move(names_);
  net.edges_ = std::move(edges_);
  net.out_.assign(n, {});
  net.in_.assign(n, {});
  for (EdgeId e = 0; e < net.num_edges(); ++e) {
    net.out_[net.edges_[e].from].push_back(e);
    net.in_[net.edges_[e].to].push_back(e);
  }
  // Edges are sorted by (from, to), so out_ lists are already ordered by
  // target; in_ lists need ordering by origin.
  for (auto& lst : net.in_) {
    std::sort(lst.begin(), lst.end(), [&](EdgeId a, EdgeId b) {
      return net.edges_[a].from < net.edges_[b].from;
    });
  }

  // Kahn with a min-heap: detects cycles and fixes the canonical topological
  // order (smallest node id first among ready nodes).
  std::vector<int> indeg(n, 0);
  for (const Edge& e : net.edges_) indeg[e.to]++;
  std::priority_queue<NodeId, std::vector<NodeId>, std::greater<>> ready;
  for (NodeId v = 0; v < n; ++v) {
    if (indeg[v] == 0) ready.push(v);
  }
  int processed = 0;
  while (!ready.empty()) {
    NodeId v = ready.top();
    ready.pop();
    ++processed;
    if (net.is_intermediate(v)) net.topo_.push_back(v);
    for (EdgeId e : net.out_[v]) {
      if (--indeg[net.edges_[e].to] == 0) ready.push(net.edges_[e].to);
    }
  }
  if (processed != n) throw Error("graph contains a cycle");
  return net;
}

std::optional<EdgeId> FlowNetwork::find_edge(NodeId from, NodeId to) const {
  const auto& lst = out_[from];
  auto it = std::lower_bound(lst.begin(), lst.end(), to,
                             [&](EdgeId e, NodeId t) { return edges_[e].to < t; });
  if (it != lst.end() && edges_[*it].to == to) return *it;
  return std::nullopt;
}

void canonicalize(PathCover& cover) {
  std::sort(cover.paths.begin(), cover.paths.end(),
            [](const std::vector<NodeId>& a, const std::vector<NodeId>& b) {
              return a[1] < b[1];
            });
}

namespace {

// Lexicographic on intermediate sequences, shorter prefix first.
int compare_paths(const std::vector<NodeId>& a, const std::vector<NodeId>& b) {
  const size_t la = a.size() - 1, lb = b.size() - 1;  // skip trailing sink
  for (size_t i = 1; i < la && i < lb; ++i) {
    if (a[i] != b[i]) return a[i] < b[i] ? -1 : 1;
  }
  if (la != lb) return la < lb ? -1 : 1;
  return 0;
}

}  // namespace

int compare_covers(const PathCover& a, const PathCover& b) {
  const size_t n = std::min(a.paths.size(), b.paths.size());
  for (size_t i = 0; i < n; ++i) {
    int c = compare_paths(a.paths[i], b.paths[i]);
    if (c != 0) return c;
  }
  if (a.paths.size() != b.paths.size()) {
    return a.paths.size() < b.paths.size() ? -1 : 1;
  }
  return 0;
}

void check_cover(const FlowNetwork& net, const PathCover& cover) {
  if (static_cast<int>(cover.paths.size()) != net.d()) {
    throw Error("cover must contain exactly d paths");
  }
  std::vector<char> used(net.num_nodes(), 0);
  for (const auto& path : cover.paths) {
    if (path.size() < 3) throw Error("path must visit an intermediate node");
    if (path.front() != net.source() || path.back() != net.sink()) {
      throw Error("path must run from source to sink");
    }
    for (size_t i = 0; i + 1 < path.size(); ++i) {
      if (!net.find_edge(path[i], path[i + 1])) {
        throw Error("path uses a non-edge " + net.node_name(path[i]) + "->" +
                    net.node_name(path[i + 1]));
      }
    }
    for (size_t i = 1; i + 1 < path.size(); ++i) {
      if (used[path[i]]) {
        throw Error("node " + net.node_name(path[i]) +
                    " appears on more than one path");
      }
      used[path[i]] = 1;
    }
  }
  for (NodeId v = 0; v < net.num_nodes(); ++v) {
    if (net.is_intermediate(v) && !used[v]) {
      throw Error("node " + net.node_name(v) + " is not covered by any path");
    }
  }
}

const char* constraint_name(Constraint c) {
  switch (c) {
    case Constraint::Capacity: return "capacity";
    case Constraint::FlowConservation: return "flow conservation";
    case Constraint::NodeCount: return "node count";
    case Constraint::TotalCount: return "total count";
    case Constraint::NonNegativity: return "non-negativity";
  }
  return "?";
}

std::vector<Violation> validate(const FlowNetwork& net, const Solution& sol,
                                double eps) {
  const int m = net.num_edges();
  if (static_cast<int>(sol.flow.size()) != m ||
      static_cast<int>(sol.active.size()) != m) {
    throw Error("solution shape does not match network edge count");
  }
  for (const auto& f : sol.flow) {
    if (static_cast<int>(f.size()) != net.k()) {
      throw Error("solution flow dimension does not match network k");
    }
  }

  std::vector<Violation> out;
  auto loc = [&](EdgeId e) {
    return net.node_name(net.edge(e).from) + "->" + net.node_name(net.edge(e).to);
  };

  for (EdgeId e = 0; e < m; ++e) {
    const Edge& edge = net.edge(e);
    for (int i = 0; i < net.k(); ++i) {
      const double f = sol.flow[e][i];
      if (f < -eps) {
        out.push_back({Constraint::NonNegativity, e, -1, i, -f,
                       "negative flow on " + loc(e)});
      }
      if (sol.active[e]) {
        if (edge.cap.is_finite() && f > edge.cap.values()[i] + eps) {
          out.push_back({Constraint::Capacity, e, -1, i,
                         f - edge.cap.values()[i],
                         "flow exceeds capacity on " + loc(e)});
        }
      } else if (std::abs(f) > eps) {
        out.push_back({Constraint::Capacity, e, -1, i, std::abs(f),
                       "non-zero flow on inactive edge " + loc(e)});
      }
    }
  }

  for (NodeId v = 0; v < net.num_nodes(); ++v) {
    if (!net.is_intermediate(v)) continue;
    for (int i = 0; i < net.k(); ++i) {
      double in = 0.0, outflow = 0.0;
      for (EdgeId e : net.in_edges(v)) in += sol.flow[e][i];
      for (EdgeId e : net.out_edges(v)) outflow += sol.flow[e][i];
      if (std::abs(in - outflow) > eps) {
        out.push_back({Constraint::FlowConservation, -1, v, i,
                       std::abs(in - outflow),
                       "flow imbalance at " + net.node_name(v)});
      }
    }
    int in_active = 0, out_active = 0;
    for (EdgeId e : net.in_edges(v)) in_active += sol.active[e] ? 1 : 0;
    for (EdgeId e : net.out_edges(v)) out_active += sol.active[e] ? 1 : 0;
    if (in_active != 1) {
      out.push_back({Constraint::NodeCount, -1, v, -1,
                     static_cast<double>(std::abs(in_active - 1)),
                     net.node_name(v) + " has " + std::to_string(in_active) +
                         " active incoming edges"});
    }
    if (out_active != 1) {
      out.push_back({Constraint::NodeCount, -1, v, -1,
                     static_cast<double>(std::abs(out_active - 1)),
                     net.node_name(v) + " has " + std::to_string(out_active) +
                         " active outgoing edges"});
    }
  }

  int src_active = 0, sink_active = 0;
  for (EdgeId e : net.out_edges(net.source())) src_active += sol.active[e] ? 1 : 0;
  for (EdgeId e : net.in_edges(net.sink())) sink_active += sol.active[e] ? 1 : 0;
  if (src_active != net.d()) {
    out.push_back({Constraint::TotalCount, -1, net.source(), -1,
                   static_cast<double>(std::abs(src_active - net.d())),
                   std::to_string(src_active) + " active source edges, want " +
                       std::to_string(net.d())});
  }
  if (sink_active != net.d()) {
    out.push_back({Constraint::TotalCount, -1, net.sink(), -1,
                   static_cast<double>(std::abs(sink_active - net.d())),
                   std::to_string(sink_active) + " active sink edges, want " +
                       std::to_string(net.d())});
  }
  return out;
}

double objective_value(const FlowNetwork& net, const Solution& sol) {
  double total = 0.0;
  for (EdgeId e : net.out_edges(net.source())) {
    for (double f : sol.flow[e]) total += f;
  }
  return total;
}

std::vector<double> path_bottleneck(const FlowNetwork& net,
                                    std::span<const NodeId> path) {
  std::vector<double> bottleneck(net.k(), kInf);
  bool any_finite = false;
  for (size_t i = 0; i + 1 < path.size(); ++i) {
    auto e = net.find_edge(path[i], path[i + 1]);
    if (!e) {
      throw Error("path uses a non-edge " + net.node_name(path[i]) + "->" +
                  net.node_name(path[i + 1]));
    }
    const CapVec& cap = net.edge(*e).cap;
    if (cap.is_finite()) {
      any_finite = true;
      for (int j = 0; j < net.k(); ++j) {
        bottleneck[j] = std::min(bottleneck[j], cap.values()[j]);
      }
    }
  }
  if (!any_finite) {
    throw UnboundedError(
        "path crosses no finite-capacity edge; the flow is unbounded");
  }
  return bottleneck;
}

Solution flow_from_paths(const FlowNetwork& net, const PathCover& cover) {
  check_cover(net, cover);
  Solution sol;
  sol.flow.assign(net.num_edges(), std::vector<double>(net.k(), 0.0));
  sol.active.assign(net.num_edges(), 0);
  // Summed per path, then across paths in the cover's order. Solvers bound
  // partial covers with per-path subtotals in the same slot order, so this
  // grouping keeps an exactly attainable bound bit-identical to the value of
  // its completion.
  double objective = 0.0;
  for (const auto& path : cover.paths) {
    std::vector<double> bottleneck = path_bottleneck(net, path);
    for (size_t i = 0; i + 1 < path.size(); ++i) {
      EdgeId e = *net.find_edge(path[i], path[i + 1]);
      sol.flow[e] = bottleneck;
      sol.active[e] = 1;
    }
    double path_sum = 0.0;
    for (double b : bottleneck) path_sum += b;
    objective += path_sum;
  }
  sol.objective = objective;
  return sol;
}

}  // namespace mdflow
