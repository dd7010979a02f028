#include "drivesense/wire.hpp"

#include "drivesense/bev_io.hpp"

namespace drivesense {

namespace {

constexpr char kB64Alphabet[] =
    "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";

double require_number(const json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_number()) {
    throw SchemaError(std::string("payload: missing numeric field '") + key + "'");
  }
  return j[key].get<double>();
}

std::string require_string(const json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_string()) {
    throw SchemaError(std::string("payload: missing string field '") + key + "'");
  }
  return j[key].get<std::string>();
}

}  // namespace

std::string base64_encode(std::string_view bytes) {
  std::string out;
  out.reserve((bytes.size() + 2) / 3 * 4);
  size_t i = 0;
  while (i + 3 <= bytes.size()) {
    const unsigned v = (static_cast<unsigned char>(bytes[i]) << 16) |
                       (static_cast<unsigned char>(bytes[i + 1]) << 8) |
                       static_cast<unsigned char>(bytes[i + 2]);
    out.push_back(kB64Alphabet[(v >> 18) & 63]);
    out.push_back(kB64Alphabet[(v >> 12) & 63]);
    out.push_back(kB64Alphabet[(v >> 6) & 63]);
    out.push_back(kB64Alphabet[v & 63]);
    i += 3;
  }
  const size_t rem = bytes.size() - i;
  if (rem == 1) {
    const unsigned v = static_cast<unsigned char>(bytes[i]) << 16;
    out.push_back(kB64Alphabet[(v >> 18) & 63]);
    out.push_back(kB64Alphabet[(v >> 12) & 63]);
    out.append("==");
  } else if (rem == 2) {
    const unsigned v = (static_cast<unsigned char>(bytes[i]) << 16) |
                       (static_cast<unsigned char>(bytes[i + 1]) << 8);
    out.push_back(kB64Alphabet[(v >> 18) & 63]);
    out.push_back(kB64Alphabet[(v >> 12) & 63]);
    out.push_back(kB64Alphabet[(v >> 6) & 63]);
    out.push_back('=');
  }
  return out;
}

std::string base64_decode(std::string_view text) {
  static int lut[256];
  static bool init = [] {
    for (int& v : lut) v = -1;
    for (int i = 0; i < 64; ++i) lut[static_cast<unsigned char>(kB64Alphabet[i])] = i;
    return true;
  }();
  (void)init;
  std::string out;
  int acc = 0, bits = 0;
  for (char c : text) {
    if (c == '=' || c == '\n' || c == '\r') continue;
    const int v = lut[static_cast<unsigned char>(c)];
    if (v < 0) throw ParseError("base64: invalid character");
    acc = (acc << 6) | v;
    bits += 6;
    if (bits >= 8) {
      bits -= 8;
      out.push_back(static_cast<char>((acc >> bits) & 0xff));
    }
  }
  return out;
}

json detection_to_json(const Detection& d) {
  return json{{"cls", to_string(d.cls)}, {"cx", d.box.cx},   {"cy", d.box.cy},
              {"w", d.box.w},            {"l", d.box.l},     {"yaw", d.box.yaw},
              {"score", d.score}};
}

Detection detection_from_json(const json& j) {
  Detection d;
  d.cls = object_class_from_string(require_string(j, "cls"));
  d.box.cx = require_number(j, "cx");
  d.box.cy = require_number(j, "cy");
  d.box.w = require_number(j, "w");
  d.box.l = require_number(j, "l");
  d.box.yaw = normalize_angle(require_number(j, "yaw"));
  d.score = require_number(j, "score");
  if (!(d.box.w > 0.0) || !(d.box.l > 0.0)) throw SchemaError("detection: extents must be > 0");
  if (d.score < 0.0 || d.score > 1.0) throw SchemaError("detection: score outside [0, 1]");
  return d;
}

json tracked_box_to_json(const TrackedBox& b) {
  json j = detection_to_json(Detection{b.box, b.cls, b.score});
  j["id"] = b.id;
  j["vx"] = b.vx;
  j["vy"] = b.vy;
  j["status"] = to_string(b.status);
  return j;
}

TrackedBox tracked_box_from_json(const json& j) {
  const Detection d = detection_from_json(j);
  TrackedBox b;
  b.box = d.box;
  b.cls = d.cls;
  b.score = d.score;
  if (!j.contains("id")) throw SchemaError("tracked box: missing 'id'");
  b.id = j["id"].get<std::int64_t>();
  b.vx = require_number(j, "vx");
  b.vy = require_number(j, "vy");
  b.status = track_status_from_string(require_string(j, "status"));
  return b;
}

json detection_frame_to_json(const DetectionFrame& f) {
  json boxes = json::array();
  for (const Detection& d : f.boxes) boxes.push_back(detection_to_json(d));
  return json{{"frame_id", f.frame_id},
              {"timestamp_us", f.timestamp_us},
              {"boxes", std::move(boxes)}};
}

DetectionFrame detection_frame_from_json(const json& j) {
  DetectionFrame f;
  f.frame_id = require_string(j, "frame_id");
  if (!j.contains("timestamp_us") || !j["timestamp_us"].is_number_integer()) {
    throw SchemaError("frame: missing integer 'timestamp_us'");
  }
  f.timestamp_us = j["timestamp_us"].get<std::int64_t>();
  if (!j.contains("boxes") || !j["boxes"].is_array()) {
    throw SchemaError("frame: missing 'boxes' array");
  }
  for (const json& b : j["boxes"]) f.boxes.push_back(detection_from_json(b));
  return f;
}

json tracked_frame_to_json(const TrackedFrame& f) {
  json boxes = json::array();
  for (const TrackedBox& b : f.boxes) boxes.push_back(tracked_box_to_json(b));
  return json{{"frame_id", f.frame_id},
              {"timestamp_us", f.timestamp_us},
              {"boxes", std::move(boxes)}};
}

TrackedFrame tracked_frame_from_json(const json& j) {
  TrackedFrame f;
  f.frame_id = require_string(j, "frame_id");
  f.timestamp_us = j.at("timestamp_us").get<std::int64_t>();
  if (!j.contains("boxes") || !j["boxes"].is_array()) {
    throw SchemaError("frame: missing 'boxes' array");
  }
  for (const json& b : j["boxes"]) f.boxes.push_back(tracked_box_from_json(b));
  return f;
}

json tracker_config_to_json(const TrackerConfig& cfg) {
  return json{{"confirm_hits", cfg.confirm_hits},
              {"max_misses", cfg.max_misses},
              {"gate_iou", cfg.gate_iou},
              {"process_noise_accel_sigma", cfg.process_noise_accel_sigma},
              {"meas_noise_sigma", cfg.meas_noise_sigma},
              {"extents_smoothing_alpha", cfg.extents_smoothing_alpha}};
}

TrackerConfig tracker_config_from_json(const json& j) {
  TrackerConfig cfg;
  if (j.contains("confirm_hits")) cfg.confirm_hits = j["confirm_hits"].get<int>();
  if (j.contains("max_misses")) cfg.max_misses = j["max_misses"].get<int>();
  if (j.contains("gate_iou")) cfg.gate_iou = j["gate_iou"].get<double>();
  if (j.contains("process_noise_accel_sigma")) {
    cfg.process_noise_accel_sigma = j["process_noise_accel_sigma"].get<double>();
  }
  if (j.contains("meas_noise_sigma")) cfg.meas_noise_sigma = j["meas_noise_sigma"].get<double>();
  if (j.contains("extents_smoothing_alpha")) {
    cfg.extents_smoothing_alpha = j["extents_smoothing_alpha"].get<double>();
  }
  cfg.validate();
  return cfg;
}

json map_payload_to_json(const BevMap& map) {
  return json{{"frame_id", map.frame_id},
              {"timestamp_us", map.timestamp_us},
              {"meta",
               {{"extent_m", map.config.extent_m},
                {"cells_per_side", map.config.cells_per_side},
                {"z_min", map.config.z_min},
                {"z_max", map.config.z_max},
                {"origin", to_string(map.origin)}}},
              {"png_b64", base64_encode(map_to_png(map))}};
}

BevMap map_payload_from_json(const json& j) {
  if (!j.contains("meta") || !j["meta"].is_object()) {
    throw SchemaError("map payload: missing 'meta' object");
  }
  const json& meta = j["meta"];
  GridConfig config;
  config.extent_m = require_number(meta, "extent_m");
  config.cells_per_side = static_cast<int>(require_number(meta, "cells_per_side"));
  config.z_min = require_number(meta, "z_min");
  config.z_max = require_number(meta, "z_max");
  const MapOrigin origin = meta.contains("origin")
                               ? map_origin_from_string(meta["origin"].get<std::string>())
                               : MapOrigin::full;
  if (!j.contains("timestamp_us") || !j["timestamp_us"].is_number_integer()) {
    throw SchemaError("map payload: missing integer 'timestamp_us'");
  }
  return map_from_rgb8(decode_png(base64_decode(require_string(j, "png_b64"))), config,
                       j["timestamp_us"].get<std::int64_t>(), require_string(j, "frame_id"),
                       origin);
}

}  // namespace drivesense
