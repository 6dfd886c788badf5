#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace fidget {

// Tightly packed 8-bit image, row-major, 1 (gray) or 3 (RGB) channels.
struct Image {
  int width = 0;
  int height = 0;
  int channels = 3;
  std::vector<std::uint8_t> pixels;

  static Image filled(int width, int height, int channels,
                      std::uint8_t value);

  std::uint8_t& at(int x, int y, int c) {
    return pixels[static_cast<std::size_t>(y * width + x) * channels + c];
  }
  std::uint8_t at(int x, int y, int c) const {
    return pixels[static_cast<std::size_t>(y * width + x) * channels + c];
  }
  bool same_shape(const Image& o) const {
    return width == o.width && height == o.height && channels == o.channels;
  }
};

// desired_channels must be 1 or 3; palette/alpha/16-bit inputs are converted.
Image read_png(const std::string& path, int desired_channels);

// Fixed encoder settings, so identical pixel data produces identical bytes.
void write_png(const Image& image, const std::string& path);

}  // namespace fidget
