#pragma once

#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "mdflow/flowcore.hpp"
#include "mdflow/mot/detection.hpp"
#include "mdflow/rng.hpp"

namespace testutil {

using namespace mdflow;

// Nodes are "s", the intermediates, "t", in that order.
inline FlowNetwork make_net(
    int k, int d, const std::vector<std::string>& intermediates,
    const std::vector<std::tuple<std::string, std::string, std::vector<double>>>&
        finite_edges,
    const std::vector<std::pair<std::string, std::string>>& infinite_edges) {
  NetworkBuilder builder(k, d);
  std::vector<std::string> names;
  names.push_back("s");
  names.insert(names.end(), intermediates.begin(), intermediates.end());
  names.push_back("t");
  std::vector<NodeId> ids;
  for (const auto& n : names) ids.push_back(builder.add_node(n));
  auto id_of = [&](const std::string& n) {
    for (size_t i = 0; i < names.size(); ++i) {
      if (names[i] == n) return ids[i];
    }
    throw Error("unknown node in test fixture: " + n);
  };
  builder.set_source(id_of("s"));
  builder.set_sink(id_of("t"));
  for (const auto& [u, v, cap] : finite_edges) {
    builder.add_edge(id_of(u), id_of(v), CapVec::finite(cap));
  }
  for (const auto& [u, v] : infinite_edges) {
    builder.add_edge(id_of(u), id_of(v), CapVec::infinite());
  }
  return builder.build();
}

inline PathCover cover_by_names(
    const FlowNetwork& net,
    const std::vector<std::vector<std::string>>& paths) {
  auto id_of = [&](const std::string& n) {
    for (NodeId v = 0; v < net.num_nodes(); ++v) {
      if (net.node_name(v) == n) return v;
    }
    throw Error("unknown node: " + n);
  };
  PathCover cover;
  for (const auto& path : paths) {
    std::vector<NodeId> p;
    for (const auto& n : path) p.push_back(id_of(n));
    cover.paths.push_back(std::move(p));
  }
  return cover;
}

// Layered tracking-shaped instance: start/end node pairs per detection, the
// detection's feature as the observation capacity, infinite enter/exit edges,
// and transition edges within a random frame window, each kept with a random
// per-instance probability. Within the limits of acceptance criterion 1.
inline FlowNetwork random_instance(Rng& rng, int max_pairs = 10, int max_k = 4,
                                   int max_d = 3) {
  const int frames = rng.uniform_int(2, 4);
  std::vector<int> sizes(frames);
  int total = 0, largest = 0;
  for (int f = 0; f < frames; ++f) {
    sizes[f] = rng.uniform_int(1, 3);
    total += sizes[f];
  }
  while (total > max_pairs) {
    for (int f = 0; f < frames && total > max_pairs; ++f) {
      if (sizes[f] > 1) {
        --sizes[f];
        --total;
      }
    }
  }
  for (int s : sizes) largest = std::max(largest, s);

  const int k = rng.uniform_int(1, max_k);
  const int d = rng.uniform_int(largest, std::max(largest, std::min(max_d, total)));
  const int dt = rng.uniform_int(1, 3);
  const double keep = 1.0 - 0.4 * rng.uniform();

  NetworkBuilder builder(k, d);
  NodeId s = builder.add_node("s");
  struct Pair {
    int frame;
    NodeId start, end;
  };
  std::vector<Pair> pairs;
  int idx = 0;
  for (int f = 0; f < frames; ++f) {
    for (int i = 0; i < sizes[f]; ++i, ++idx) {
      Pair p;
      p.frame = f;
      p.start = builder.add_node("e" + std::to_string(idx));
      p.end = builder.add_node("o" + std::to_string(idx));
      pairs.push_back(p);
    }
  }
  NodeId t = builder.add_node("t");
  builder.set_source(s);
  builder.set_sink(t);

  for (const Pair& p : pairs) {
    std::vector<double> feature(k);
    for (double& x : feature) x = rng.uniform();
    builder.add_edge(s, p.start, CapVec::infinite());
    builder.add_edge(p.start, p.end, CapVec::finite(feature));
    builder.add_edge(p.end, t, CapVec::infinite());
  }
  for (size_t i = 0; i < pairs.size(); ++i) {
    for (size_t j = i + 1; j < pairs.size(); ++j) {
      const int gap = pairs[j].frame - pairs[i].frame;
      if (gap < 1 || gap > dt) continue;
      if (rng.uniform() > keep) continue;
      builder.add_edge(pairs[i].end, pairs[j].start, CapVec::infinite());
    }
  }
  return builder.build();
}

// Copy of net with every finite capacity entry multiplied by lambda.
inline FlowNetwork scale_finite(const FlowNetwork& net, double lambda) {
  NetworkBuilder builder(net.k(), net.d());
  for (NodeId v = 0; v < net.num_nodes(); ++v) builder.add_node(net.node_name(v));
  builder.set_source(net.source());
  builder.set_sink(net.sink());
  for (const Edge& e : net.edges()) {
    if (e.cap.is_infinite()) {
      builder.add_edge(e.from, e.to, CapVec::infinite());
    } else {
      std::vector<double> vals = e.cap.values();
      for (double& x : vals) x *= lambda;
      builder.add_edge(e.from, e.to, CapVec::finite(std::move(vals)));
    }
  }
  return builder.build();
}

// Simple deterministic synthetic detections for graph tests.
inline std::vector<mot::Detection> grid_detections(
    int frames, int per_frame, int k, Rng& rng, double spacing = 100.0) {
  std::vector<mot::Detection> dets;
  int id = 0;
  for (int f = 1; f <= frames; ++f) {
    for (int i = 0; i < per_frame; ++i) {
      mot::Detection det;
      det.frame = f;
      det.id = id++;
      det.gt_id = i;
      det.left = spacing * i;
      det.top = 10.0 * f;
      det.width = 20;
      det.height = 20;
      det.feature.resize(k);
      for (double& x : det.feature) x = rng.uniform();
      dets.push_back(det);
    }
  }
  return dets;
}

}  // namespace testutil
