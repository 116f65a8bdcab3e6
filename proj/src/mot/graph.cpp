#include "mdflow/mot/graph.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "mdflow/mot/similarity.hpp"

namespace mdflow::mot {

namespace {

bool all_have_gt(const std::vector<Detection>& dets) {
  return std::all_of(dets.begin(), dets.end(),
                     [](const Detection& d) { return d.gt_id >= 0; });
}

int distinct_gt(const std::vector<Detection>& dets) {
  std::set<int> ids;
  for (const Detection& d : dets) ids.insert(d.gt_id);
  return static_cast<int>(ids.size());
}

double center_distance(const Detection& a, const Detection& b) {
  const double dx = a.center_x() - b.center_x();
  const double dy = a.center_y() - b.center_y();
  return std::hypot(dx, dy);
}

bool gate_keeps(const Detection& a, const Detection& b, double gate) {
  return center_distance(a, b) <= gate * (b.frame - a.frame);
}

MotGraph assemble(std::vector<Detection> dets, const GraphParams& params,
                  bool gated, double gate) {
  if (params.delta_t < 1) throw Error("delta_t must be >= 1");
  if (params.d < 1) throw Error("track count d must be positive");
  if (dets.empty()) throw Error("cannot build a graph from zero detections");

  std::sort(dets.begin(), dets.end(), [](const Detection& a, const Detection& b) {
    return std::tie(a.frame, a.id) < std::tie(b.frame, b.id);
  });
  std::set<int> ids;
  const int k = static_cast<int>(dets.front().feature.size());
  if (k < 1) throw Error("detections carry no features");
  for (const Detection& det : dets) {
    if (!ids.insert(det.id).second) {
      throw Error("duplicate detection id " + std::to_string(det.id));
    }
    if (det.width <= 0 || det.height <= 0) {
      throw Error("detection " + std::to_string(det.id) +
                  " has a non-positive box");
    }
    if (static_cast<int>(det.feature.size()) != k) {
      throw Error("feature length differs at detection " +
                  std::to_string(det.id));
    }
    for (double f : det.feature) {
      if (!(f >= 0.0)) {
        throw Error("negative feature entry at detection " +
                    std::to_string(det.id));
      }
    }
  }

  const int n = static_cast<int>(dets.size());
  NetworkBuilder builder(k, params.d);
  MotGraph graph;
  NodeId s = builder.add_node("s");
  graph.start_node.resize(n);
  graph.end_node.resize(n);
  for (int i = 0; i < n; ++i) {
    graph.start_node[i] = builder.add_node("e" + std::to_string(dets[i].id));
    graph.end_node[i] = builder.add_node("o" + std::to_string(dets[i].id));
  }
  NodeId t = builder.add_node("t");
  builder.set_source(s);
  builder.set_sink(t);

  // Edge roles are rebuilt after NetworkBuilder sorts the edge list, so
  // collect them keyed by endpoints first.
  std::map<std::pair<NodeId, NodeId>, EdgeRole> role_of;
  auto add = [&](NodeId u, NodeId v, CapVec cap, EdgeRole role) {
    builder.add_edge(u, v, std::move(cap));
    role_of[{u, v}] = role;
  };

  for (int i = 0; i < n; ++i) {
    add(s, graph.start_node[i], CapVec::infinite(), EdgeRole::Enter);
    add(graph.start_node[i], graph.end_node[i], CapVec::finite(dets[i].feature),
        EdgeRole::Observation);
    add(graph.end_node[i], t, CapVec::infinite(), EdgeRole::Exit);
  }
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const int gap = dets[j].frame - dets[i].frame;
      if (gap < 1) continue;
      if (gap > params.delta_t) break;  // dets sorted by frame
      if (gated && !gate_keeps(dets[i], dets[j], gate)) continue;
      add(graph.end_node[i], graph.start_node[j], CapVec::infinite(),
          EdgeRole::Transition);
    }
  }

  graph.net = builder.build();
  graph.detections = std::move(dets);
  graph.roles.resize(graph.net.num_edges());
  for (EdgeId e = 0; e < graph.net.num_edges(); ++e) {
    graph.roles[e] = role_of.at({graph.net.edge(e).from, graph.net.edge(e).to});
  }
  graph.det_of_node.assign(graph.net.num_nodes(), -1);
  for (int i = 0; i < n; ++i) {
    graph.det_of_node[graph.start_node[i]] = i;
    graph.det_of_node[graph.end_node[i]] = i;
  }
  return graph;
}

}  // namespace

MotGraph build_graph(std::vector<Detection> dets, const GraphParams& params) {
  if (params.gate) {
    if (*params.gate < 0) throw Error("gating distance must be >= 0");
    return assemble(std::move(dets), params, true, *params.gate);
  }
  return assemble(std::move(dets), params, false, 0.0);
}

MotGraph prune(const MotGraph& graph, double gate) {
  if (gate < 0) throw Error("gating distance must be >= 0");
  // Rebuilding applies the gate to transition edges only and keeps node ids
  // and canonical order identical.
  GraphParams params;
  params.d = graph.net.d();
  params.gate = gate;
  params.delta_t = 1;
  int max_gap = 1;
  for (EdgeId e = 0; e < graph.net.num_edges(); ++e) {
    if (graph.roles[e] != EdgeRole::Transition) continue;
    const Detection& a = graph.detections[graph.det_of_node[graph.net.edge(e).from]];
    const Detection& b = graph.detections[graph.det_of_node[graph.net.edge(e).to]];
    max_gap = std::max(max_gap, b.frame - a.frame);
  }
  params.delta_t = max_gap;
  return assemble(graph.detections, params, true, gate);
}

TrackSet decode_tracks(const MotGraph& graph, const PathCover& cover) {
  PathCover canon = cover;
  canonicalize(canon);
  check_cover(graph.net, canon);
  TrackSet tracks;
  int track_id = 0;
  for (const auto& path : canon.paths) {
    ++track_id;
    for (size_t i = 1; i + 1 < path.size(); ++i) {
      const int det = graph.det_of_node[path[i]];
      if (det < 0) throw Error("cover path visits a non-detection node");
      tracks.track_of_det[graph.detections[det].id] = track_id;
    }
  }
  return tracks;
}

std::vector<Batch> split_batches(const std::vector<Detection>& dets,
                                 const GraphParams& params) {
  if (dets.empty()) return {};
  const int width = params.batch_width.value_or(0);
  int lo = dets.front().frame, hi = dets.front().frame;
  for (const Detection& d : dets) {
    lo = std::min(lo, d.frame);
    hi = std::max(hi, d.frame);
  }
  if (width <= 0) {
    Batch all{0, lo, hi, params.d, dets};
    if (all_have_gt(dets)) all.d = distinct_gt(dets);
    return {all};
  }
  if (width <= params.delta_t) {
    throw Error("batch width must exceed delta_t");
  }

  std::vector<Batch> batches;
  for (int start = lo, index = 0; start <= hi; start += width, ++index) {
    Batch b;
    b.index = static_cast<int>(batches.size());
    b.first_frame = start;
    b.last_frame = std::min(start + width - 1, hi);
    for (const Detection& d : dets) {
      if (d.frame >= b.first_frame && d.frame <= b.last_frame) {
        b.detections.push_back(d);
      }
    }
    if (b.detections.empty()) continue;
    b.d = all_have_gt(b.detections) ? distinct_gt(b.detections) : params.d;
    batches.push_back(std::move(b));
  }
  return batches;
}

TrackSet stitch(const std::vector<Batch>& batches,
                const std::vector<TrackSet>& per_batch) {
  if (batches.size() != per_batch.size()) {
    throw Error("one track set per batch expected");
  }
  TrackSet global;
  int next_id = 0;
  // Per batch: local track id -> global id, plus the endpoint detections used
  // for similarity matching against the next batch.
  std::map<int, int> prev_global;          // local -> global (previous batch)
  std::map<int, Detection> prev_last_det;  // local -> last detection

  for (size_t bi = 0; bi < batches.size(); ++bi) {
    const Batch& batch = batches[bi];
    const TrackSet& local = per_batch[bi];
    std::map<int, Detection> first_det, last_det;
    for (const Detection& det : batch.detections) {
      auto it = local.track_of_det.find(det.id);
      if (it == local.track_of_det.end()) {
        throw Error("batch track set misses detection " + std::to_string(det.id));
      }
      const int tr = it->second;
      if (!first_det.count(tr) || det.frame < first_det.at(tr).frame) {
        first_det[tr] = det;
      }
      if (!last_det.count(tr) || det.frame > last_det.at(tr).frame) {
        last_det[tr] = det;
      }
    }

    std::map<int, int> global_of;  // local -> global for this batch
    if (bi > 0) {
      // All candidate links, greedy by descending similarity.
      struct Link {
        double sim;
        int prev_local;
        int cur_local;
      };
      std::vector<Link> links;
      for (const auto& [pl, pdet] : prev_last_det) {
        for (const auto& [cl, cdet] : first_det) {
          links.push_back({cosine_similarity(pdet.feature, cdet.feature), pl, cl});
        }
      }
      std::sort(links.begin(), links.end(), [](const Link& a, const Link& b) {
        return std::tie(b.sim, a.prev_local, a.cur_local) <
               std::tie(a.sim, b.prev_local, b.cur_local);
      });
      std::set<int> used_prev, used_cur;
      for (const Link& link : links) {
        if (used_prev.count(link.prev_local) || used_cur.count(link.cur_local)) {
          continue;
        }
        used_prev.insert(link.prev_local);
        used_cur.insert(link.cur_local);
        global_of[link.cur_local] = prev_global.at(link.prev_local);
      }
    }
    for (const auto& [local_id, det] : first_det) {
      (void)det;
      if (!global_of.count(local_id)) global_of[local_id] = ++next_id;
    }

    for (const Detection& det : batch.detections) {
      global.track_of_det[det.id] = global_of.at(local.track_of_det.at(det.id));
    }
    prev_global = std::move(global_of);
    prev_last_det = std::move(last_det);
  }
  return global;
}

}  // namespace mdflow::mot
