#pragma once

#include <map>
#include <optional>
#include <vector>

namespace mdflow::mot {

// One ground-truth box with its appearance feature. `id` is unique across the
// sequence; `gt_id` is the annotated identity (-1 when unknown).
struct Detection {
  int frame = 0;
  int id = 0;
  double left = 0.0;
  double top = 0.0;
  double width = 0.0;
  double height = 0.0;
  int gt_id = -1;
  std::vector<double> feature;

  double center_x() const { return left + width / 2.0; }
  double center_y() const { return top + height / 2.0; }
};

struct GraphParams {
  int delta_t = 3;                  // max frame skip for transition edges
  std::optional<double> gate;      // px per frame of gap; none = no pruning
  std::optional<int> batch_width;  // frames per batch; none = single batch
  int d = 1;                       // trajectory count
};

// Assignment of every detection to exactly one track.
struct TrackSet {
  std::map<int, int> track_of_det;  // detection id -> track id

  int num_tracks() const {
    int n = 0;
    for (const auto& [det, track] : track_of_det) n = std::max(n, track);
    return n;
  }
};

}  // namespace mdflow::mot
