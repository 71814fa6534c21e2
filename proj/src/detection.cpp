#include <cgtrack/detection.hpp>

namespace cgtrack {

double det_conf(const Detection& d) {
    return d.cls_conf * d.loc_conf;
}

ConfidenceQuadrant classify(const Detection& d, double theta_loc, double theta_cls) {
    const bool high_loc = d.loc_conf >= theta_loc;
    const bool high_cls = d.cls_conf >= theta_cls;
    if (high_loc) {
        return high_cls ? ConfidenceQuadrant::HighLocHighCls
                        : ConfidenceQuadrant::HighLocLowCls;
    }
    return high_cls ? ConfidenceQuadrant::LowLocHighCls
                    : ConfidenceQuadrant::LowLocLowCls;
}

const char* to_string(ConfidenceQuadrant q) {
    switch (q) {
        case ConfidenceQuadrant::HighLocHighCls: return "HighLocHighCls";
        case ConfidenceQuadrant::HighLocLowCls: return "HighLocLowCls";
        case ConfidenceQuadrant::LowLocHighCls: return "LowLocHighCls";
        case ConfidenceQuadrant::LowLocLowCls: return "LowLocLowCls";
    }
    return "?";
}

}  // namespace cgtrack
