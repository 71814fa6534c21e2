#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include <cgtrack/geometry.hpp>

namespace cgtrack {

// One detector output. The classification confidence scores the class
// decision; the localization confidence scores how well the box fits the
// object. The two channels fail independently, which is what the cascade
// levels exploit.
struct Detection {
    BBox box;
    double cls_conf = 0.0;
    double loc_conf = 0.0;
    std::optional<std::vector<double>> embedding;  // unit length when present
};

// Combined detection confidence, cls_conf * loc_conf.
double det_conf(const Detection& d);

// Partition of the (loc_conf, cls_conf) unit square by the two thresholds.
// "High" includes the boundary, so confidence-1.0 detections stay high even
// under threshold-1.0 configurations.
enum class ConfidenceQuadrant {
    HighLocHighCls,
    HighLocLowCls,
    LowLocHighCls,
    LowLocLowCls,
};

ConfidenceQuadrant classify(const Detection& d, double theta_loc, double theta_cls);

const char* to_string(ConfidenceQuadrant q);

struct FrameInput {
    std::int64_t frame_index = 0;          // positive, strictly increasing across steps
    std::vector<Detection> detections;     // file order; kept stable for tie-breaking
};

}  // namespace cgtrack
