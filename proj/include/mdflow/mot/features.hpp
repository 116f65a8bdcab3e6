#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "mdflow/mot/detection.hpp"
#include "mdflow/mot/image.hpp"
#include "mdflow/rng.hpp"

namespace mdflow::mot {

struct Box {
  double left = 0.0, top = 0.0, width = 0.0, height = 0.0;
};

// Per-channel intensity histogram of the region, each channel normalized to
// sum 1, concatenated R||G||B. Output length is 3 * bins. The region is
// clipped to the image; an empty intersection is an error.
std::vector<double> color_histogram(const Image& img, const Box& region,
                                    int bins);

// Whole image.
std::vector<double> color_histogram(const Image& img, int bins);

// i.i.d. Gaussian(0, sigma^2) per entry, clamped to keep capacities
// non-negative.
std::vector<double> add_feature_noise(const std::vector<double>& feature,
                                      double sigma, Rng& rng);

// i.i.d. Gaussian(0, sigma^2) per pixel channel, clamped to [0, 255].
Image add_image_noise(const Image& img, double sigma, uint64_t seed);

struct SyntheticObject {
  int id = 0;
  std::array<double, 2> start{0.0, 0.0};
  std::array<double, 2> velocity{0.0, 0.0};  // px per frame
  double box_w = 40.0;
  double box_h = 40.0;
  // Empty => drawn per seed from the draw parameters below.
  std::vector<double> gt_feature;
  std::vector<int> stable_dims;
};

struct FeatureDraw {
  int stable_per_object = 0;        // 0 = no stable/unstable split
  bool disjoint_stable = true;      // objects get disjoint stable dims
  bool shared_unstable = false;     // one background drawn for all objects
  double stable_low = 0.75, stable_high = 1.0;
  double unstable_low = 0.2, unstable_high = 0.7;
};

struct SyntheticSpec {
  int frames = 1;
  int k = 1;
  double sigma = 0.0;
  uint64_t seed = 0;
  double stable_noise_scale = 1.0;  // noise multiplier on stable dimensions
  std::vector<SyntheticObject> objects;
  FeatureDraw draw;
};

struct SyntheticData {
  std::vector<Detection> detections;            // (frame, id) order
  std::vector<std::vector<double>> gt_features; // per object
  std::vector<std::vector<int>> stable_dims;    // per object
  std::vector<int> object_ids;
};

// Deterministic per seed: ground-truth features (when not given) are drawn
// first, then per-frame noise, so the same seed yields the same ground truth
// across different sigma values.
SyntheticData generate_synthetic(const SyntheticSpec& spec);

}  // namespace mdflow::mot
