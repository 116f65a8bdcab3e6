#include "mdflow/mot/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "mdflow/flowcore.hpp"

namespace mdflow::mot {

MetricsReport idsw_norm(const std::vector<Detection>& gt, const TrackSet& pred) {
  std::set<int> gt_ids;
  for (const Detection& det : gt) gt_ids.insert(det.id);
  for (const auto& [det_id, track] : pred.track_of_det) {
    (void)track;
    if (!gt_ids.count(det_id)) {
      throw InputError("prediction references unknown detection " +
                       std::to_string(det_id));
    }
  }

  std::vector<Detection> ordered = gt;
  std::sort(ordered.begin(), ordered.end(),
            [](const Detection& a, const Detection& b) {
              return std::tie(a.frame, a.id) < std::tie(b.frame, b.id);
            });

  std::map<int, FrameCount> frames;
  std::map<int, int> last_track;  // gt identity -> track at previous appearance
  std::set<int> tracks_seen;
  MetricsReport report;
  for (const Detection& det : ordered) {
    auto it = pred.track_of_det.find(det.id);
    if (it == pred.track_of_det.end()) {
      throw InputError("prediction misses detection " + std::to_string(det.id));
    }
    if (det.gt_id < 0) {
      throw Error("detection " + std::to_string(det.id) +
                  " carries no ground-truth identity");
    }
    const int track = it->second;
    tracks_seen.insert(track);
    FrameCount& fc = frames[det.frame];
    fc.frame = det.frame;
    fc.gt += 1;
    auto prev = last_track.find(det.gt_id);
    if (prev != last_track.end() && prev->second != track) {
      fc.idsw += 1;
    }
    last_track[det.gt_id] = track;
  }

  for (const auto& [frame, fc] : frames) {
    (void)frame;
    report.per_frame.push_back(fc);
    report.total_switches += fc.idsw;
    report.total_gt += fc.gt;
  }
  report.idsw_norm = report.total_gt == 0
                         ? 0.0
                         : static_cast<double>(report.total_switches) /
                               static_cast<double>(report.total_gt);
  report.num_tracks = static_cast<int>(tracks_seen.size());
  return report;
}

std::vector<SweepRow> sweep_report(const std::vector<SweepCell>& cells) {
  std::vector<SweepRow> rows;
  for (const SweepCell& cell : cells) {
    if (cell.values.empty()) throw Error("sweep cell has no seeds");
    SweepRow row;
    row.method = cell.method;
    row.sigma = cell.sigma;
    row.seeds = static_cast<int>(cell.values.size());
    double sum = 0.0;
    for (double v : cell.values) sum += v;
    row.mean = sum / row.seeds;
    if (row.seeds > 1) {
      double sq = 0.0;
      for (double v : cell.values) sq += (v - row.mean) * (v - row.mean);
      row.stddev = std::sqrt(sq / (row.seeds - 1));
    }
    rows.push_back(row);
  }
  std::sort(rows.begin(), rows.end(), [](const SweepRow& a, const SweepRow& b) {
    return std::tie(a.method, a.sigma) < std::tie(b.method, b.sigma);
  });
  return rows;
}

}  // namespace mdflow::mot
