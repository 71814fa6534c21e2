#pragma once

#include <cmath>

namespace cgtrack {

// Axis-aligned box in (left, top, width, height) form, following the
// MOT-Challenge file convention. Width and height are non-negative.
struct BBox {
    double left = 0.0;
    double top = 0.0;
    double width = 0.0;
    double height = 0.0;

    double area() const { return width * height; }
    double right() const { return left + width; }
    double bottom() const { return top + height; }
    double center_x() const { return left + 0.5 * width; }
    double center_y() const { return top + 0.5 * height; }

    bool valid() const {
        return std::isfinite(left) && std::isfinite(top) &&
               std::isfinite(width) && std::isfinite(height) &&
               width >= 0.0 && height >= 0.0;
    }
};

// Intersection over union in [0, 1]. Zero-area boxes have IoU 0 against
// everything, including themselves, so the 0/0 case never arises.
double iou(const BBox& a, const BBox& b);

}  // namespace cgtrack
