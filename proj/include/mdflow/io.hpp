#pragma once

#include <map>
#include <string>
#include <vector>

#include "mdflow/flowcore.hpp"
#include "mdflow/mot/detection.hpp"
#include "mdflow/mot/features.hpp"
#include "mdflow/mot/metrics.hpp"

namespace mdflow::io {

// MOT16 ground-truth CSV, one box per row:
// frame,id,bb_left,bb_top,bb_width,bb_height,conf,class,visibility
// (the trailing three columns are optional). The file's id column is the
// ground-truth identity; detection ids are assigned canonically by
// (frame, identity). Rows must be unique per (frame, identity).
std::vector<mot::Detection> read_mot_gt_csv(const std::string& path);

// Feature CSV: frame,id,f_1,...,f_k joined on (frame, ground-truth id).
// Every detection must receive a feature row of uniform length.
void attach_features_csv(std::vector<mot::Detection>& dets,
                         const std::string& path);

// Track CSV: frame,track_id,det_id rows sorted by (frame, det_id).
void write_tracks_csv(const std::string& path,
                      const std::vector<mot::Detection>& dets,
                      const mot::TrackSet& tracks);
mot::TrackSet read_tracks_csv(const std::string& path);

// Network description JSON:
// {"k":2,"d":1,"source":"s","sink":"t","nodes":["s","a","t"],
//  "edges":[{"from":"s","to":"a","cap":"inf"},
//           {"from":"a","to":"t","cap":[0.5,0.2]}]}
FlowNetwork read_graph_json(const std::string& path);
std::string graph_to_json(const FlowNetwork& net);

// Synthetic scenario JSON; see README for the schema.
mot::SyntheticSpec read_synthetic_spec(const std::string& path);

std::string metrics_to_json(const mot::MetricsReport& report);

std::string sweep_to_csv(const std::vector<mot::SweepRow>& rows);
std::string sweep_to_json(const std::vector<mot::SweepRow>& rows);

std::string read_file(const std::string& path);

// Writes via a temporary file in the same directory plus rename, so readers
// never observe a partial file.
void atomic_write_file(const std::string& path, const std::string& content);

}  // namespace mdflow::io
