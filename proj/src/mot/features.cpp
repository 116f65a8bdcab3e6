#include "mdflow/mot/features.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "mdflow/flowcore.hpp"

namespace mdflow::mot {

std::vector<double> color_histogram(const Image& img, const Box& region,
                                    int bins) {
  if (bins < 1) throw Error("histogram needs at least one bin per channel");
  const int x0 = std::max(0, static_cast<int>(std::floor(region.left)));
  const int y0 = std::max(0, static_cast<int>(std::floor(region.top)));
  const int x1 = std::min(img.width,
                          static_cast<int>(std::ceil(region.left + region.width)));
  const int y1 = std::min(img.height,
                          static_cast<int>(std::ceil(region.top + region.height)));
  if (x0 >= x1 || y0 >= y1) throw Error("empty image region");

  std::vector<double> hist(3 * bins, 0.0);
  for (int y = y0; y < y1; ++y) {
    for (int x = x0; x < x1; ++x) {
      const uint8_t* px = img.pixel(x, y);
      for (int c = 0; c < 3; ++c) {
        const int bin = std::min(bins - 1, px[c] * bins / 256);
        hist[c * bins + bin] += 1.0;
      }
    }
  }
  const double count = static_cast<double>(x1 - x0) * (y1 - y0);
  for (double& h : hist) h /= count;
  return hist;
}

std::vector<double> color_histogram(const Image& img, int bins) {
  return color_histogram(
      img, Box{0.0, 0.0, static_cast<double>(img.width),
               static_cast<double>(img.height)},
      bins);
}

std::vector<double> add_feature_noise(const std::vector<double>& feature,
                                      double sigma, Rng& rng) {
  if (sigma < 0) throw Error("noise sigma must be >= 0");
  std::vector<double> out(feature.size());
  for (size_t i = 0; i < feature.size(); ++i) {
    out[i] = std::max(0.0, feature[i] + sigma * rng.gaussian());
  }
  return out;
}

Image add_image_noise(const Image& img, double sigma, uint64_t seed) {
  if (sigma < 0) throw Error("noise sigma must be >= 0");
  Rng rng(seed);
  Image out = img;
  for (uint8_t& channel : out.rgb) {
    const double v = channel + sigma * rng.gaussian();
    channel = static_cast<uint8_t>(std::lround(std::clamp(v, 0.0, 255.0)));
  }
  return out;
}

namespace {

void draw_features(SyntheticSpec& spec, Rng& rng) {
  const int n = static_cast<int>(spec.objects.size());
  const FeatureDraw& draw = spec.draw;
  if (draw.stable_per_object * n > spec.k && draw.disjoint_stable) {
    throw Error("not enough dimensions for disjoint stable sets");
  }

  // Stable dimension sets first, then values, in object order. With a shared
  // background, objects differ only in their own stable dimensions.
  std::vector<double> background;
  if (draw.shared_unstable) {
    background.resize(spec.k);
    for (double& v : background) {
      v = rng.uniform(draw.unstable_low, draw.unstable_high);
    }
  }
  std::vector<int> pool(spec.k);
  for (int i = 0; i < spec.k; ++i) pool[i] = i;
  for (auto& obj : spec.objects) {
    if (!obj.gt_feature.empty()) continue;
    obj.stable_dims.clear();
    std::vector<int> local;
    std::vector<int>* source = &pool;
    if (!draw.disjoint_stable) {
      local.resize(spec.k);
      for (int i = 0; i < spec.k; ++i) local[i] = i;
      source = &local;
    }
    for (int s = 0; s < draw.stable_per_object; ++s) {
      const int pick = rng.uniform_int(0, static_cast<int>(source->size()) - 1);
      obj.stable_dims.push_back((*source)[pick]);
      source->erase(source->begin() + pick);
    }
    std::sort(obj.stable_dims.begin(), obj.stable_dims.end());

    obj.gt_feature.assign(spec.k, 0.0);
    std::set<int> stable(obj.stable_dims.begin(), obj.stable_dims.end());
    for (int dim = 0; dim < spec.k; ++dim) {
      if (stable.count(dim)) {
        obj.gt_feature[dim] = rng.uniform(draw.stable_low, draw.stable_high);
      } else if (draw.shared_unstable) {
        obj.gt_feature[dim] = background[dim];
      } else {
        obj.gt_feature[dim] = rng.uniform(draw.unstable_low, draw.unstable_high);
      }
    }
  }
}

}  // namespace

SyntheticData generate_synthetic(const SyntheticSpec& spec_in) {
  SyntheticSpec spec = spec_in;
  if (spec.frames < 1) throw Error("frame count must be positive");
  if (spec.k < 1) throw Error("dimension count must be positive");
  if (spec.sigma < 0) throw Error("noise sigma must be >= 0");
  if (spec.objects.empty()) throw Error("no objects to generate");
  {
    std::set<int> ids;
    for (const auto& obj : spec.objects) {
      if (!ids.insert(obj.id).second) {
        throw Error("duplicate object id " + std::to_string(obj.id));
      }
    }
  }

  Rng rng(spec.seed);
  draw_features(spec, rng);

  SyntheticData data;
  for (const auto& obj : spec.objects) {
    if (static_cast<int>(obj.gt_feature.size()) != spec.k) {
      throw Error("object " + std::to_string(obj.id) +
                  " feature length differs from k");
    }
    for (double v : obj.gt_feature) {
      if (v < 0.0 || v > 1.0) {
        throw Error("ground-truth feature entries must lie in [0, 1]");
      }
    }
    data.gt_features.push_back(obj.gt_feature);
    data.stable_dims.push_back(obj.stable_dims);
    data.object_ids.push_back(obj.id);
  }

  int det_id = 0;
  for (int frame = 1; frame <= spec.frames; ++frame) {
    for (const auto& obj : spec.objects) {
      std::set<int> stable(obj.stable_dims.begin(), obj.stable_dims.end());
      Detection det;
      det.frame = frame;
      det.id = det_id++;
      det.gt_id = obj.id;
      det.left = obj.start[0] + obj.velocity[0] * (frame - 1);
      det.top = obj.start[1] + obj.velocity[1] * (frame - 1);
      det.width = obj.box_w;
      det.height = obj.box_h;
      det.feature.resize(spec.k);
      for (int dim = 0; dim < spec.k; ++dim) {
        const double scale = stable.count(dim) ? spec.stable_noise_scale : 1.0;
        det.feature[dim] = std::max(
            0.0, obj.gt_feature[dim] + spec.sigma * scale * rng.gaussian());
      }
      data.detections.push_back(std::move(det));
    }
  }
  return data;
}

}  // namespace mdflow::mot
