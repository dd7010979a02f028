#pragma once

#include <nlohmann/json.hpp>

#include "drivesense/bev.hpp"
#include "drivesense/tracking.hpp"

namespace drivesense {

// Canonical object encoding shared by the detection and tracking services
// and the line-delimited artifact files. ordered_json keeps serialization
// deterministic.
using json = nlohmann::ordered_json;

std::string base64_encode(std::string_view bytes);
std::string base64_decode(std::string_view text);

json detection_to_json(const Detection& d);
Detection detection_from_json(const json& j);

json tracked_box_to_json(const TrackedBox& b);
TrackedBox tracked_box_from_json(const json& j);

json detection_frame_to_json(const DetectionFrame& f);
DetectionFrame detection_frame_from_json(const json& j);

json tracked_frame_to_json(const TrackedFrame& f);
TrackedFrame tracked_frame_from_json(const json& j);

json tracker_config_to_json(const TrackerConfig& cfg);
TrackerConfig tracker_config_from_json(const json& j);

/// Request body of the detection service: frame identity, the sidecar grid
/// metadata, and the PNG-encoded map.
json map_payload_to_json(const BevMap& map);
BevMap map_payload_from_json(const json& j);

}  // namespace drivesense
