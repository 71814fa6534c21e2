#include <cgtrack/geometry.hpp>

#include <algorithm>

namespace cgtrack {

double iou(const BBox& a, const BBox& b) {
    if (a.area() <= 0.0 || b.area() <= 0.0) {
        return 0.0;
    }
    const double ix = std::min(a.right(), b.right()) - std::max(a.left, b.left);
    const double iy = std::min(a.bottom(), b.bottom()) - std::max(a.top, b.top);
    if (ix <= 0.0 || iy <= 0.0) {
        return 0.0;
    }
    const double inter = ix * iy;
    const double uni = a.area() + b.area() - inter;
    return inter / uni;
}

}  // namespace cgtrack
