#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace mdflow::mot {

// Interleaved 8-bit RGB raster.
struct Image {
  int width = 0;
  int height = 0;
  std::vector<uint8_t> rgb;

  uint8_t* pixel(int x, int y) { return rgb.data() + 3 * (y * width + x); }
  const uint8_t* pixel(int x, int y) const {
    return rgb.data() + 3 * (y * width + x);
  }
};

Image load_ppm(const std::string& path);
void save_ppm(const Image& img, const std::string& path);

Image load_png(const std::string& path);

// Dispatches on file extension (.ppm / .png).
Image load_image(const std::string& path);

}  // namespace mdflow::mot
