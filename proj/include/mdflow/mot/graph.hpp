#pragma once

#include <string>
#include <vector>

#include "mdflow/flowcore.hpp"
#include "mdflow/mot/detection.hpp"

namespace mdflow::mot {

enum class EdgeRole { Observation, Enter, Exit, Transition };

// Tracking network: per detection i a node pair (e_i, o_i) whose connecting
// observation edge carries the feature vector as capacity; enter, exit and
// transition edges carry infinite capacity.
struct MotGraph {
  FlowNetwork net;
  std::vector<EdgeRole> roles;        // per edge id
  std::vector<Detection> detections;  // canonical (frame, id) order
  std::vector<NodeId> start_node;     // e_i per detection index
  std::vector<NodeId> end_node;       // o_i per detection index
  std::vector<int> det_of_node;       // node id -> detection index (-1 for s,t)
};

// Builds the tracking graph. Detections are reordered canonically by
// (frame, id); transition edges connect o_i -> e_j for frame gaps in
// [1, delta_t], optionally gated (see prune). Feature length defines k.
MotGraph build_graph(std::vector<Detection> dets, const GraphParams& params);

// Removes transition edges whose box-center distance exceeds
// gate * (frame gap). Observation, enter and exit edges always survive.
MotGraph prune(const MotGraph& graph, double gate);

// Track ids 1..d assigned by canonical path order.
TrackSet decode_tracks(const MotGraph& graph, const PathCover& cover);

struct Batch {
  int index = 0;
  int first_frame = 0;  // inclusive
  int last_frame = 0;   // inclusive
  int d = 0;            // path count for this batch
  std::vector<Detection> detections;
};

// Consecutive disjoint windows of batch_width frames. Per-batch d is the
// number of distinct ground-truth identities present when every detection
// carries one, otherwise the global params.d. Empty windows are skipped.
std::vector<Batch> split_batches(const std::vector<Detection>& dets,
                                 const GraphParams& params);

// Links tracks across consecutive batches by cosine similarity between the
// feature of the last detection of a track and the first detection of the
// next batch's tracks; greedy in descending similarity, unmatched tracks get
// fresh ids. Batch-local track sets must cover their batch's detections.
TrackSet stitch(const std::vector<Batch>& batches,
                const std::vector<TrackSet>& per_batch);

}  // namespace mdflow::mot
