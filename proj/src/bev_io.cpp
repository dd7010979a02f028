#include "drivesense/bev_io.hpp"

#include <png.h>

#include <cstring>
#include <map>
#include <sstream>

namespace drivesense {

namespace {

void png_write_to_string(png_structp png, png_bytep data, png_size_t len) {
  auto* out = static_cast<std::string*>(png_get_io_ptr(png));
  out->append(reinterpret_cast<const char*>(data), len);
}

struct PngReadState {
  const unsigned char* data;
  size_t size;
  size_t pos;
};

void png_read_from_memory(png_structp png, png_bytep out, png_size_t len) {
  auto* st = static_cast<PngReadState*>(png_get_io_ptr(png));
  if (st->pos + len > st->size) {
    png_error(png, "unexpected end of PNG stream");
  }
  std::memcpy(out, st->data + st->pos, len);
  st->pos += len;
}

}  // namespace

std::string encode_png(const Rgb8Image& image) {
  if (image.width <= 0 || image.height <= 0 ||
      image.pixels.size() != static_cast<size_t>(image.width) * image.height * 3) {
    throw std::invalid_argument("encode_png: inconsistent image dimensions");
  }
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!png) throw std::runtime_error("encode_png: png_create_write_struct failed");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_write_struct(&png, nullptr);
    throw std::runtime_error("encode_png: png_create_info_struct failed");
  }
  std::string out;
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw std::runtime_error("encode_png: libpng error");
  }
  png_set_write_fn(png, &out, png_write_to_string, nullptr);
  png_set_IHDR(png, info, image.width, image.height, 8, PNG_COLOR_TYPE_RGB,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  for (int r = 0; r < image.height; ++r) {
    png_write_row(png, const_cast<png_bytep>(
                           image.pixels.data() + static_cast<size_t>(r) * image.width * 3));
  }
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  return out;
}

Rgb8Image decode_png(std::string_view png_bytes) {
  if (png_bytes.size() < 8 ||
      png_sig_cmp(reinterpret_cast<png_const_bytep>(png_bytes.data()), 0, 8) != 0) {
    throw ParseError("decode_png: not a PNG stream");
  }
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!png) throw std::runtime_error("decode_png: png_create_read_struct failed");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    throw std::runtime_error("decode_png: png_create_info_struct failed");
  }
  Rgb8Image image;
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw ParseError("decode_png: malformed PNG stream");
  }
  PngReadState state{reinterpret_cast<const unsigned char*>(png_bytes.data()),
                     png_bytes.size(), 0};
  png_set_read_fn(png, &state, png_read_from_memory);
  png_read_info(png, info);
  image.width = static_cast<int>(png_get_image_width(png, info));
  image.height = static_cast<int>(png_get_image_height(png, info));
  // normalize to 8-bit RGB
  png_set_expand(png);
  png_set_strip_16(png);
  png_set_strip_alpha(png);
  if (png_get_color_type(png, info) == PNG_COLOR_TYPE_GRAY ||
      png_get_color_type(png, info) == PNG_COLOR_TYPE_GRAY_ALPHA) {
    png_set_gray_to_rgb(png);
  }
  png_read_update_info(png, info);
  if (png_get_rowbytes(png, info) != static_cast<size_t>(image.width) * 3) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw ParseError("decode_png: unsupported pixel layout");
  }
  image.pixels.resize(static_cast<size_t>(image.width) * image.height * 3);
  for (int r = 0; r < image.height; ++r) {
    png_read_row(png, image.pixels.data() + static_cast<size_t>(r) * image.width * 3,
                 nullptr);
  }
  png_destroy_read_struct(&png, &info, nullptr);
  return image;
}

Rgb8Image map_to_rgb8(const BevMap& map) {
  Rgb8Image img;
  img.width = map.cols;
  img.height = map.rows;
  img.pixels.resize(static_cast<size_t>(map.rows) * map.cols * 3);
  auto q = [](float v) {
    return static_cast<unsigned char>(std::lround(std::clamp(v, 0.0f, 1.0f) * 255.0f));
  };
  for (int r = 0; r < map.rows; ++r) {
    for (int c = 0; c < map.cols; ++c) {
      const size_t px = (static_cast<size_t>(r) * map.cols + c) * 3;
      img.pixels[px + 0] = q(map.h(r, c));
      img.pixels[px + 1] = q(map.i(r, c));
      img.pixels[px + 2] = q(map.d(r, c));
    }
  }
  return img;
}

std::string map_to_png(const BevMap& map) { return encode_png(map_to_rgb8(map)); }

std::string map_sidecar_text(const BevMap& map) {
  std::ostringstream out;
  char buf[64];
  auto num = [&](double v) {
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return std::string(buf);
  };
  out << "extent_m=" << num(map.config.extent_m) << "\n";
  out << "cells_per_side=" << map.config.cells_per_side << "\n";
  out << "z_min=" << num(map.config.z_min) << "\n";
  out << "z_max=" << num(map.config.z_max) << "\n";
  out << "timestamp_us=" << map.timestamp_us << "\n";
  out << "frame_id=" << map.frame_id << "\n";
  out << "origin=" << to_string(map.origin) << "\n";
  return out.str();
}

BevMap map_from_rgb8(const Rgb8Image& img, const GridConfig& config,
                     std::int64_t timestamp_us, const std::string& frame_id,
                     MapOrigin origin) {
  config.validate();
  BevMap map;
  map.config = config;
  map.timestamp_us = timestamp_us;
  map.frame_id = frame_id;
  map.origin = origin;
  map.view_rotation_rad = origin == MapOrigin::rear ? M_PI : 0.0;
  map.rows = img.height;
  map.cols = img.width;
  if (map.cols != config.cells_per_side || map.rows > map.cols || map.rows < 1) {
    throw SchemaError("map metadata/raster mismatch: unexpected dimensions");
  }
  const size_t cells = static_cast<size_t>(map.rows) * map.cols;
  map.height.resize(cells);
  map.intensity.resize(cells);
  map.density.resize(cells);
  for (size_t i = 0; i < cells; ++i) {
    map.height[i] = img.pixels[i * 3 + 0] / 255.0f;
    map.intensity[i] = img.pixels[i * 3 + 1] / 255.0f;
    map.density[i] = img.pixels[i * 3 + 2] / 255.0f;
  }
  return map;
}

BevMap map_from_png(std::string_view png_bytes, std::string_view sidecar_text) {
  std::map<std::string, std::string> kv;
  std::istringstream in{std::string(sidecar_text)};
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw SchemaError("sidecar: expected key=value, got '" + line + "'");
    kv[line.substr(0, eq)] = line.substr(eq + 1);
  }
  for (const char* req : {"extent_m", "cells_per_side", "z_min", "z_max",
                          "timestamp_us", "frame_id"}) {
    if (!kv.count(req)) throw SchemaError(std::string("sidecar: missing key '") + req + "'");
  }
  GridConfig config;
  config.extent_m = std::stod(kv["extent_m"]);
  config.cells_per_side = std::stoi(kv["cells_per_side"]);
  config.z_min = std::stod(kv["z_min"]);
  config.z_max = std::stod(kv["z_max"]);
  const MapOrigin origin =
      kv.count("origin") ? map_origin_from_string(kv["origin"]) : MapOrigin::full;
  return map_from_rgb8(decode_png(png_bytes), config, std::stoll(kv["timestamp_us"]),
                       kv["frame_id"], origin);
}

}  // namespace drivesense
