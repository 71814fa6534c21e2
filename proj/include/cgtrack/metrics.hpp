#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <cgtrack/geometry.hpp>

namespace cgtrack {

struct GtBox {
    std::int64_t id = 0;
    BBox box;
    double visibility = 1.0;
};

// frame -> annotated boxes; ids unique within a frame.
using GroundTruth = std::map<std::int64_t, std::vector<GtBox>>;

struct TrackedBox {
    std::int64_t id = 0;
    BBox box;
};

// frame -> reported boxes; ids unique within a frame.
using TrackingResult = std::map<std::int64_t, std::vector<TrackedBox>>;

struct EvalOptions {
    double iou_threshold = 0.5;
    // Ground-truth boxes below this visibility are excluded entirely
    // (MOT-Challenge convention). 0 counts everything.
    double min_visibility = 0.0;
};

struct SequenceStats {
    std::int64_t gt_count = 0;    // ground-truth boxes after visibility filtering
    std::int64_t pred_count = 0;  // reported boxes
    std::int64_t fp = 0;
    std::int64_t fn = 0;
    std::int64_t idsw = 0;
    std::int64_t idtp = 0;        // identity true positives of the global matching
    double mota = 0.0;            // 1 - (fn + fp + idsw) / gt_count
    bool mota_valid = false;      // false when gt_count == 0
    double idf1 = 0.0;            // 2*idtp / (gt_count + pred_count)
};

struct EvalReport {
    SequenceStats total;
    std::vector<std::pair<std::string, SequenceStats>> sequences;
};

// CLEAR-style evaluation of one sequence. Per frame, correspondences from
// the previous frame are retained while still above the IoU threshold, the
// remainder is matched by maximum-IoU assignment, and FP/FN/IDSW accumulate.
// Identity F1 comes from one global gt-id x track-id matching that maximizes
// the number of identity-consistent frame matches.
//
// Throws ValidationError when the results contain frames outside the
// ground-truth frame range. An empty ground truth yields a report with
// mota_valid = false rather than an error.
SequenceStats evaluate(const GroundTruth& gt, const TrackingResult& results,
                       const EvalOptions& options = {});

// Merges per-sequence stats into one report; the merge is associative, so
// sequences may be evaluated in parallel and combined in any grouping.
EvalReport make_report(const std::vector<std::pair<std::string, SequenceStats>>& sequences);

}  // namespace cgtrack
