#pragma once

#include <string>
#include <vector>

#include "mdflow/mot/detection.hpp"

namespace mdflow::mot {

struct FrameCount {
  int frame = 0;
  int idsw = 0;
  int gt = 0;
};

struct MetricsReport {
  std::vector<FrameCount> per_frame;  // ascending frame order
  long total_switches = 0;
  long total_gt = 0;
  double idsw_norm = 0.0;
  int num_tracks = 0;
};

// Identity switches normalized by total ground-truth boxes. Detections are
// the ground-truth boxes themselves, so matching is the identity map: a
// switch is counted at a frame where a ground-truth identity's predicted
// track differs from the one at its previous appearance.
// pred must assign exactly the detections in gt.
MetricsReport idsw_norm(const std::vector<Detection>& gt, const TrackSet& pred);

struct SweepCell {
  std::string method;
  double sigma = 0.0;
  std::vector<double> values;  // one idsw_norm per seed
};

struct SweepRow {
  std::string method;
  double sigma = 0.0;
  double mean = 0.0;
  double stddev = 0.0;  // sample std; 0 for a single seed
  int seeds = 0;
};

// One row per (method, sigma), sorted by (method, sigma).
std::vector<SweepRow> sweep_report(const std::vector<SweepCell>& cells);

}  // namespace mdflow::mot
