#pragma once

#include <algorithm>
#include <cmath>
#include <string>

#include "pollwir/errors.hpp"

namespace pollwir {

/// Axis-aligned box in continuous pixel coordinates.
struct BoundingBox {
    double x_min = 0.0;
    double y_min = 0.0;
    double x_max = 0.0;
    double y_max = 0.0;

    double width() const { return x_max - x_min; }
    double height() const { return y_max - y_min; }
    double area() const { return width() * height(); }

    void validate(const std::string& what = "bounding box") const {
        if (!std::isfinite(x_min) || !std::isfinite(y_min) || !std::isfinite(x_max) ||
            !std::isfinite(y_max)) {
            throw ValidationError(what + " has non-finite coordinates");
        }
        if (!(x_max > x_min) || !(y_max > y_min)) {
            throw ValidationError(what + " must have positive area, got [" +
                                  std::to_string(x_min) + "," + std::to_string(y_min) + "," +
                                  std::to_string(x_max) + "," + std::to_string(y_max) + "]");
        }
    }

    friend bool operator==(const BoundingBox&, const BoundingBox&) = default;
};

/// Intersection over union of two valid boxes; 0 when disjoint.
inline double iou(const BoundingBox& a, const BoundingBox& b) {
    const double ix = std::min(a.x_max, b.x_max) - std::max(a.x_min, b.x_min);
    const double iy = std::min(a.y_max, b.y_max) - std::max(a.y_min, b.y_min);
    if (ix <= 0.0 || iy <= 0.0) return 0.0;
    const double inter = ix * iy;
    return inter / (a.area() + b.area() - inter);
}

struct Detection {
    std::string frame_id;
    std::string class_label;
    BoundingBox box;
    double score = 0.0;
};

struct GroundTruth {
    std::string frame_id;
    std::string class_label;
    BoundingBox box;
};

}  // namespace pollwir
