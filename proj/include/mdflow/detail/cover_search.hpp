#pragma once

#include <algorithm>
#include <array>
#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>
#include <mutex>
#include <optional>
#include <thread>
#include <vector>

#include "mdflow/flowcore.hpp"
#include "mdflow/solver_config.hpp"

namespace mdflow::detail {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Branch-and-bound over the node-disjoint path covers of a DAG, maximizing a
// policy-defined per-track objective. Intermediate nodes are assigned in
// topological order to an open track or to a new track; a track ends
// implicitly once nothing extends it, provided its last node reaches the sink.
//
// Policy contract:
//   struct TrackScore;                       value state of one open track
//   TrackScore fresh() const;
//   void apply_edge(TrackScore&, EdgeId) const;
//   double track_bound(const TrackScore&) const;   upper bound on the track's
//                                                  final contribution
//   double enter_value(NodeId v) const;      upper bound on the contribution
//                                            of any track whose first
//                                            intermediate node is v
//   double evaluate_cover(const PathCover&) const; exact objective, computed
//                                            on the canonicalized cover
//
// Pruning discards a subtree only when its bound is strictly below the
// incumbent value, so every optimal cover is eventually completed and
// compared; ties resolve to the canonically smallest cover independent of
// exploration order and worker count.
template <class Policy>
class CoverSearch {
 public:
  struct Outcome {
    bool exhausted = false;          // search space fully explored
    std::optional<PathCover> cover;  // canonical form
    double value = -kInf;
    double abandoned_bound = -kInf;  // sup of bounds dropped at the limits
    long nodes = 0;
  };

  CoverSearch(const FlowNetwork& net, const Policy& policy,
              const SolverConfig& cfg)
      : net_(net), policy_(policy), cfg_(cfg) {
    prepare();
  }

  Outcome run() {
    Outcome out;
    out.exhausted = true;
    if (!structurally_feasible_) return out;

    shared_.best_value.store(-kInf);
    shared_.stop.store(false);
    shared_.nodes.store(0);
    shared_.abandoned.store(-kInf);
    // Capped so the conversion to the clock's integer ticks cannot overflow.
    const double limit_s = std::min(cfg_.time_limit_seconds, 1e8);
    shared_.deadline =
        std::chrono::steady_clock::now() +
        std::chrono::duration_cast<std::chrono::steady_clock::duration>(
            std::chrono::duration<double>(limit_s));

    Best best;
    if (cfg_.greedy_only) {
      Worker w(*this, true);
      w.dive(best);
    } else {
      // Greedy incumbent first; its value seeds pruning for the full search.
      {
        Worker g(*this, true);
        g.dive(best);
        if (best.cover) atomic_max(shared_.best_value, best.value);
      }
      search_all(best);
    }

    out.nodes = shared_.nodes.load();
    out.abandoned_bound = shared_.abandoned.load();
    out.exhausted = !shared_.stop.load() && !cfg_.greedy_only;
    if (best.cover) {
      out.cover = std::move(best.cover);
      out.value = best.value;
    }
    return out;
  }

 private:
  struct Best {
    std::optional<PathCover> cover;
    double value = -kInf;
  };

  struct Shared {
    std::atomic<double> best_value{-kInf};
    std::atomic<double> abandoned{-kInf};
    std::atomic<long> nodes{0};
    std::atomic<bool> stop{false};
    std::chrono::steady_clock::time_point deadline;
  };

  static void atomic_max(std::atomic<double>& target, double v) {
    double cur = target.load();
    while (v > cur && !target.compare_exchange_weak(cur, v)) {
    }
  }

  void prepare() {
    const auto& order = net_.topo_intermediates();
    const int n = net_.num_nodes();
    pos_of_.assign(n, -1);
    for (int p = 0; p < static_cast<int>(order.size()); ++p) {
      pos_of_[order[p]] = p;
    }

    // Equality node-count makes any intermediate without both an incoming and
    // an outgoing edge infeasible outright.
    structurally_feasible_ = true;
    for (NodeId v : order) {
      if (net_.in_edges(v).empty() || net_.out_edges(v).empty()) {
        structurally_feasible_ = false;
        return;
      }
    }

    has_exit_.assign(n, 0);
    max_out_pos_.assign(n, -1);
    for (NodeId v : order) {
      for (EdgeId e : net_.out_edges(v)) {
        NodeId w = net_.edge(e).to;
        if (w == net_.sink()) {
          has_exit_[v] = 1;
        } else {
          max_out_pos_[v] = std::max(max_out_pos_[v], pos_of_[w]);
        }
      }
    }

    // suffix_top_[p] holds the d largest enter_value() entries among
    // enter-eligible nodes at positions >= p (padded with -inf), each with
    // its position. Eligibility and values are static, so the table is exact
    // at every search depth.
    const int len = static_cast<int>(order.size());
    const int d = net_.d();
    suffix_top_.assign(len + 1,
                       std::vector<std::pair<double, int>>(d, {-kInf, -1}));
    for (int p = len - 1; p >= 0; --p) {
      suffix_top_[p] = suffix_top_[p + 1];
      NodeId v = order[p];
      if (net_.find_edge(net_.source(), v)) {
        std::pair<double, int> entry{policy_.enter_value(v), p};
        auto& top = suffix_top_[p];
        for (int i = 0; i < d; ++i) {
          if (entry.first > top[i].first ||
              (entry.first == top[i].first && entry.second < top[i].second)) {
            std::swap(entry, top[i]);
          }
        }
      }
    }
  }

  // Folds the m largest enter values among remaining positions onto `sum`,
  // in ascending position order; false when fewer than m head candidates
  // remain. Accumulating onto the caller's running sum in canonical slot
  // order keeps an exactly attainable bound bit-identical to the objective
  // of its completion, so rounding can never prune an optimal cover.
  bool accumulate_new_tracks(int p, int opened, double& sum) const {
    const int m = net_.d() - opened;
    if (m == 0) return true;
    const auto& top = suffix_top_[p];
    std::array<std::pair<int, double>, 16> buf;  // (position, value)
    std::vector<std::pair<int, double>> spill;
    std::span<std::pair<int, double>> chosen;
    if (m <= static_cast<int>(buf.size())) {
      chosen = std::span(buf.data(), m);
    } else {
      spill.resize(m);
      chosen = spill;
    }
    for (int i = 0; i < m; ++i) {
      if (top[i].second < 0) return false;
      chosen[i] = {top[i].second, top[i].first};
    }
    std::sort(chosen.begin(), chosen.end());
    for (const auto& [pos, value] : chosen) {
      (void)pos;
      sum += value;
    }
    return true;
  }

  struct Track {
    NodeId last;
    typename Policy::TrackScore score;
    double bound;
    std::vector<NodeId> nodes;  // intermediate sequence
  };

  struct Candidate {
    int track;    // -1 = open a new track
    EdgeId edge;  // edge applied by this alternative
    double bound; // bound of the resulting child
    typename Policy::TrackScore score;
  };

  class Worker {
   public:
    Worker(CoverSearch& owner, bool greedy)
        : o_(owner), greedy_(greedy), cand_(owner.net_.topo_intermediates().size() + 1) {}

    // Full DFS from the root.
    void dive(Best& best) {
      step(0, best);
    }

    // Restricted DFS: at split level `split_pos`, explores only the
    // candidates whose rank satisfies rank % stride == offset.
    void dive_split(Best& best, int split_pos, int stride, int offset) {
      split_pos_ = split_pos;
      split_stride_ = stride;
      split_offset_ = offset;
      step(0, best);
    }

   private:
    bool stopped() {
      if (o_.shared_.stop.load(std::memory_order_relaxed)) return true;
      long n = o_.shared_.nodes.load(std::memory_order_relaxed);
      if (n > o_.cfg_.node_limit ||
          ((n & 1023) == 0 &&
           std::chrono::steady_clock::now() > o_.shared_.deadline)) {
        o_.shared_.stop.store(true);
        return true;
      }
      return false;
    }

    void complete(Best& best) {
      if (static_cast<int>(tracks_.size()) != o_.net_.d()) return;
      PathCover cover;
      for (const Track& t : tracks_) {
        if (!o_.has_exit_[t.last]) return;
      }
      for (const Track& t : tracks_) {
        std::vector<NodeId> path;
        path.reserve(t.nodes.size() + 2);
        path.push_back(o_.net_.source());
        path.insert(path.end(), t.nodes.begin(), t.nodes.end());
        path.push_back(o_.net_.sink());
        cover.paths.push_back(std::move(path));
      }
      canonicalize(cover);
      const double value = o_.policy_.evaluate_cover(cover);
      if (!best.cover || value > best.value ||
          (value == best.value && compare_covers(cover, *best.cover) < 0)) {
        best.value = value;
        best.cover = std::move(cover);
        atomic_max(o_.shared_.best_value, value);
      }
    }

    void step(int p, Best& best) {
      const auto& order = o_.net_.topo_intermediates();
      if (p == static_cast<int>(order.size())) {
        complete(best);
        return;
      }
      const NodeId v = order[p];
      auto& cands = cand_[p];
      cands.clear();

      const int opened = static_cast<int>(tracks_.size());
      for (int ti = 0; ti < opened; ++ti) {
        if (auto e = o_.net_.find_edge(tracks_[ti].last, v)) {
          push_candidate(cands, ti, *e, p, opened);
        }
      }
      if (opened < o_.net_.d()) {
        if (auto e = o_.net_.find_edge(o_.net_.source(), v)) {
          push_candidate(cands, -1, *e, p, opened + 1);
        }
      }
      // Bound-descending; generation order (open tracks by index, then the
      // new-track alternative) breaks ties.
      std::stable_sort(cands.begin(), cands.end(),
                       [](const Candidate& a, const Candidate& b) {
                         return a.bound > b.bound;
                       });

      for (size_t ci = 0; ci < cands.size(); ++ci) {
        Candidate& c = cands[ci];
        if (stopped()) {
          for (size_t cj = ci; cj < cands.size(); ++cj) {
            atomic_max(o_.shared_.abandoned, cands[cj].bound);
          }
          return;
        }
        if (c.bound == -kInf) continue;  // no feasible completion below
        if (!greedy_ &&
            c.bound < o_.shared_.best_value.load(std::memory_order_relaxed)) {
          continue;
        }
        if (p == split_pos_ &&
            static_cast<int>(ci) % split_stride_ != split_offset_) {
          continue;
        }

        apply(c, v);
        o_.shared_.nodes.fetch_add(1, std::memory_order_relaxed);
        if (!dead_track_exists(p)) {
          step(p + 1, best);
        }
        undo(c);
        if (greedy_) return;  // one alternative per level, no backtracking
      }
    }

    void push_candidate(std::vector<Candidate>& cands, int track, EdgeId edge,
                        int p, int opened_after) {
      Candidate c;
      c.track = track;
      c.edge = edge;
      c.score = track >= 0 ? tracks_[track].score : o_.policy_.fresh();
      o_.policy_.apply_edge(c.score, edge);
      const double tb = o_.policy_.track_bound(c.score);
      // Summed in track order with the candidate substituted in place, then
      // the not-yet-opened heads in position order: the same slot order the
      // objective of any completion uses.
      double sum = 0.0;
      for (int ti = 0; ti < static_cast<int>(tracks_.size()); ++ti) {
        sum += ti == track ? tb : tracks_[ti].bound;
      }
      if (track < 0) sum += tb;
      c.bound = o_.accumulate_new_tracks(p + 1, opened_after, sum) &&
                        !std::isnan(sum)
                    ? sum
                    : -kInf;
      cands.push_back(std::move(c));
    }

    void apply(Candidate& c, NodeId v) {
      if (c.track < 0) {
        Track t;
        t.last = v;
        t.score = c.score;
        t.bound = o_.policy_.track_bound(t.score);
        t.nodes.push_back(v);
        tracks_.push_back(std::move(t));
      } else {
        Track& t = tracks_[c.track];
        saved_last_.push_back(t.last);
        saved_score_.push_back(std::move(t.score));
        saved_bound_.push_back(t.bound);
        t.last = v;
        t.score = c.score;
        t.bound = o_.policy_.track_bound(t.score);
        t.nodes.push_back(v);
      }
    }

    void undo(Candidate& c) {
      if (c.track < 0) {
        tracks_.pop_back();
      } else {
        Track& t = tracks_[c.track];
        t.nodes.pop_back();
        t.last = saved_last_.back();
        t.score = std::move(saved_score_.back());
        t.bound = saved_bound_.back();
        saved_last_.pop_back();
        saved_score_.pop_back();
        saved_bound_.pop_back();
      }
    }

    // A track whose last node can neither exit nor reach any unassigned node
    // has no feasible completion. Positions <= p are assigned.
    bool dead_track_exists(int p) const {
      for (const Track& t : tracks_) {
        if (!o_.has_exit_[t.last] && o_.max_out_pos_[t.last] <= p) return true;
      }
      return false;
    }

    CoverSearch& o_;
    bool greedy_;
    std::vector<Track> tracks_;
    std::vector<std::vector<Candidate>> cand_;  // per-depth scratch
    std::vector<NodeId> saved_last_;
    std::vector<typename Policy::TrackScore> saved_score_;
    std::vector<double> saved_bound_;
    int split_pos_ = -1;
    int split_stride_ = 1;
    int split_offset_ = 0;
  };

  // Sequential search, or first-branching-level parallelism when cfg_.jobs > 1:
  // workers take disjoint slices of the first level with more than one
  // alternative and merge on (value, canonical cover order).
  void search_all(Best& best) {
    const int jobs = std::max(1, cfg_.jobs);
    if (jobs == 1) {
      Worker w(*this, false);
      Best local;
      w.dive(local);
      merge(best, local);
      return;
    }

    const int split = find_split_level();
    if (split < 0) {
      Worker w(*this, false);
      Best local;
      w.dive(local);
      merge(best, local);
      return;
    }

    std::vector<Best> results(jobs);
    std::vector<std::thread> threads;
    threads.reserve(jobs);
    for (int j = 0; j < jobs; ++j) {
      threads.emplace_back([this, j, jobs, split, &results]() {
        Worker w(*this, false);
        w.dive_split(results[j], split, jobs, j);
      });
    }
    for (auto& t : threads) t.join();
    for (auto& r : results) merge(best, r);
  }

  // First position in the forced prefix with more than one viable
  // alternative; -1 when the whole tree is a single chain.
  int find_split_level() {
    const auto& order = net_.topo_intermediates();
    Probe probe(*this);
    for (int p = 0; p < static_cast<int>(order.size()); ++p) {
      int count = probe.viable_candidates(p);
      if (count == 0) return -1;        // infeasible; sequential run reports it
      if (count > 1) return p;
      probe.apply_single(p);
    }
    return -1;
  }

  // Minimal replay of the forced prefix for split-level discovery.
  class Probe {
   public:
    explicit Probe(CoverSearch& o) : o_(o) {}

    int viable_candidates(int p) {
      cands_.clear();
      NodeId v = o_.net_.topo_intermediates()[p];
      for (size_t ti = 0; ti < tracks_.size(); ++ti) {
        if (o_.net_.find_edge(tracks_[ti], v)) cands_.push_back(static_cast<int>(ti));
      }
      if (static_cast<int>(tracks_.size()) < o_.net_.d() &&
          o_.net_.find_edge(o_.net_.source(), v)) {
        cands_.push_back(-1);
      }
      return static_cast<int>(cands_.size());
    }

    void apply_single(int p) {
      NodeId v = o_.net_.topo_intermediates()[p];
      if (cands_[0] < 0) {
        tracks_.push_back(v);
      } else {
        tracks_[cands_[0]] = v;
      }
    }

   private:
    CoverSearch& o_;
    std::vector<NodeId> tracks_;  // last node per open track
    std::vector<int> cands_;      // open-track index or -1 for "new track"
  };

  void merge(Best& into, Best& from) {
    if (!from.cover) return;
    if (!into.cover || from.value > into.value ||
        (from.value == into.value &&
         compare_covers(*from.cover, *into.cover) < 0)) {
      into = std::move(from);
    }
  }

  const FlowNetwork& net_;
  const Policy& policy_;
  SolverConfig cfg_;
  Shared shared_;
  bool structurally_feasible_ = true;
  std::vector<int> pos_of_;
  std::vector<char> has_exit_;
  std::vector<int> max_out_pos_;
  std::vector<std::vector<std::pair<double, int>>> suffix_top_;
};

}  // namespace mdflow::detail
