#pragma once

#include "drivesense/types.hpp"

namespace drivesense {

/// Intersection-over-union of two oriented boxes, computed by clipping one
/// rectangle against the half-planes of the other (both are convex).
/// Symmetric, in [0, 1]. Throws std::domain_error on zero-area boxes.
double iou_oriented(const OrientedBox& a, const OrientedBox& b);

/// Area of the intersection polygon of two oriented boxes.
double intersection_area(const OrientedBox& a, const OrientedBox& b);

}  // namespace drivesense
