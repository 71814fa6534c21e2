#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <cgtrack/detection.hpp>
#include <cgtrack/metrics.hpp>
#include <cgtrack/tracker.hpp>

namespace cgtrack {

// Detection file: one record per line,
//   frame,left,top,width,height,cls_conf,loc_conf
// frames non-decreasing, order within a frame preserved. The legacy flag
// instead accepts the single-confidence MOT det layout
//   frame,id,left,top,width,height,conf,...
// and splits conf as loc = cls = sqrt(conf).
struct DetectionFileContent {
    std::vector<std::int64_t> frames;   // per line
    std::vector<Detection> detections;  // per line, embeddings not yet attached
};

DetectionFileContent read_detection_file(const std::filesystem::path& path, bool legacy = false);
void write_detection_file(const std::filesystem::path& path, const std::vector<FrameInput>& frames);

// Embedding sidecar: one line per detection line, dim comma-separated values.
// Vectors are brought to unit length on load; zero vectors are rejected.
std::vector<std::vector<double>> read_embedding_file(const std::filesystem::path& path);
void write_embedding_file(const std::filesystem::path& path, const std::vector<FrameInput>& frames);

// Pairs the sidecar with the detections; the counts must agree.
void attach_embeddings(DetectionFileContent& content,
                       std::vector<std::vector<double>> embeddings);

// Groups parsed lines into per-frame inputs (frames ascending; gaps allowed
// here, the pipeline fills them).
std::vector<FrameInput> group_into_frames(const DetectionFileContent& content);

// MOT-Challenge result rows: frame,id,left,top,width,height,conf,-1,-1,-1.
struct ResultRow {
    std::int64_t frame = 0;
    std::int64_t id = 0;
    BBox box;
    double conf = 0.0;
};

std::vector<ResultRow> read_result_file(const std::filesystem::path& path);
void write_result_file(const std::filesystem::path& path, const std::vector<ResultRow>& rows);

TrackingResult rows_to_result(const std::vector<ResultRow>& rows);

// MOT-Challenge ground truth: frame,id,left,top,width,height,mark,class,visibility.
// Rows with mark 0 are ignored; the trailing columns default to 1,1,1.0.
GroundTruth read_gt_file(const std::filesystem::path& path);
void write_gt_file(const std::filesystem::path& path, const GroundTruth& gt);

// Flat "key = value" configuration. Unknown keys are rejected; absent keys
// keep their defaults.
TrackerConfig read_config_file(const std::filesystem::path& path);
std::string config_to_text(const TrackerConfig& config);

void write_report_file(const std::filesystem::path& path, const EvalReport& report,
                       double iou_threshold);
std::string report_to_text(const EvalReport& report, double iou_threshold);

}  // namespace cgtrack
