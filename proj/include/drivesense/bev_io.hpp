#pragma once

#include "drivesense/bev.hpp"

namespace drivesense {

/// 8-bit RGB raster, row-major, 3 bytes per pixel.
struct Rgb8Image {
  int width = 0;
  int height = 0;
  std::vector<unsigned char> pixels;
};

std::string encode_png(const Rgb8Image& image);
Rgb8Image decode_png(std::string_view png_bytes);

/// Maps (height, intensity, density) to (R, G, B), quantized to 8 bits,
/// row 0 = forward edge.
Rgb8Image map_to_rgb8(const BevMap& map);

/// PNG bytes of a map.
std::string map_to_png(const BevMap& map);

/// Sidecar metadata record as a key-value text object (one `key=value` pair
/// per line).
std::string map_sidecar_text(const BevMap& map);

/// Rebuilds a map from its PNG bytes and sidecar record. Channel values are
/// the 8-bit quantized ones.
BevMap map_from_png(std::string_view png_bytes, std::string_view sidecar_text);

/// Assembles a map from an already decoded raster plus its metadata.
BevMap map_from_rgb8(const Rgb8Image& image, const GridConfig& config,
                     std::int64_t timestamp_us, const std::string& frame_id,
                     MapOrigin origin);

}  // namespace drivesense
