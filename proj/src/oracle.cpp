#include "mdflow/oracle.hpp"

#include <algorithm>

namespace mdflow {

namespace {

class CoverEnumerator {
 public:
  CoverEnumerator(const FlowNetwork& net,
                  const std::function<bool(const PathCover&)>& yield)
      : net_(net), yield_(yield), assigned_(net.num_nodes(), 0) {}

  void run() {
    cover_.paths.clear();
    stopped_ = false;
    next_path(-1);
  }

 private:
  // Chooses the head (first intermediate) of the next path; heads increase
  // across paths, which makes the emitted order canonical.
  bool next_path(NodeId prev_head) {
    if (static_cast<int>(cover_.paths.size()) == net_.d()) {
      if (covered_ == net_.num_intermediates()) {
        if (!yield_(cover_)) stopped_ = true;
      }
      return !stopped_;
    }
    for (EdgeId e : net_.out_edges(net_.source())) {
      NodeId head = net_.edge(e).to;
      if (head <= prev_head || assigned_[head]) continue;
      path_.assign({net_.source(), head});
      assigned_[head] = 1;
      ++covered_;
      bool keep_going = extend(head);
      --covered_;
      assigned_[head] = 0;
      if (!keep_going) return false;
    }
    return !stopped_;
  }

  // Depth-first extension in increasing successor order, trying "end at t"
  // before any extension so shorter paths come first.
  bool extend(NodeId head) {
    NodeId u = path_.back();
    if (net_.find_edge(u, net_.sink())) {
      path_.push_back(net_.sink());
      cover_.paths.push_back(path_);
      std::vector<NodeId> saved = std::move(path_);
      if (!next_path(head)) return false;
      path_ = std::move(saved);
      cover_.paths.pop_back();
      path_.pop_back();
    }
    for (EdgeId e : net_.out_edges(u)) {
      NodeId w = net_.edge(e).to;
      if (w != net_.sink() && !assigned_[w]) {
        path_.push_back(w);
        assigned_[w] = 1;
        ++covered_;
        bool keep_going = extend(head);
        --covered_;
        assigned_[w] = 0;
        path_.pop_back();
        if (!keep_going) return false;
      }
    }
    return true;
  }

  const FlowNetwork& net_;
  const std::function<bool(const PathCover&)>& yield_;
  std::vector<char> assigned_;
  std::vector<NodeId> path_;
  PathCover cover_;
  int covered_ = 0;
  bool stopped_ = false;
};

}  // namespace

void enumerate_covers(const FlowNetwork& net,
                      const std::function<bool(const PathCover&)>& yield,
                      EnumerationLimits limits) {
  if (net.num_intermediates() > limits.max_intermediates) {
    throw LimitError("instance has " + std::to_string(net.num_intermediates()) +
                     " intermediate nodes, enumeration limit is " +
                     std::to_string(limits.max_intermediates));
  }
  CoverEnumerator(net, yield).run();
}

OracleResult brute_force_solve(const FlowNetwork& net,
                               EnumerationLimits limits) {
  OracleResult result;
  result.status = OracleStatus::Infeasible;
  enumerate_covers(
      net,
      [&](const PathCover& cover) {
        ++result.covers_enumerated;
        Solution sol = flow_from_paths(net, cover);
        if (!result.solution || sol.objective > result.solution->objective) {
          result.solution = std::move(sol);
          result.cover = cover;
          result.status = OracleStatus::Optimal;
        }
        return true;
      },
      limits);
  return result;
}

}  // namespace mdflow
