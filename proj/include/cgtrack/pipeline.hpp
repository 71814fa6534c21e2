#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <cgtrack/io.hpp>
#include <cgtrack/metrics.hpp>
#include <cgtrack/tracker.hpp>

namespace cgtrack {

struct RunOutcome {
    std::vector<ResultRow> rows;
    std::vector<StepLog> log;
};

// Fills frame gaps with empty inputs so track ages follow video time, then
// streams every frame through one tracker. Frames run from 1 through the
// last input frame.
RunOutcome run_tracking(const std::vector<FrameInput>& frames, const TrackerConfig& config);

// File-level run: parses, validates the embeddings-vs-appearance pairing,
// tracks, and writes the result file.
RunOutcome run_files(const std::filesystem::path& dets_path,
                     const std::optional<std::filesystem::path>& embeds_path,
                     const TrackerConfig& config, const std::filesystem::path& out_path,
                     bool legacy = false);

// Human-readable per-frame association log (per-level match counts).
std::string format_run_log(const std::vector<StepLog>& log);

EvalReport eval_files(const std::filesystem::path& gt_path,
                      const std::filesystem::path& results_path, const EvalOptions& options,
                      const std::string& sequence_name = "seq");

// In-memory result rows from a tracker pass over in-memory frames.
std::vector<ResultRow> track_to_rows(const std::vector<FrameInput>& frames,
                                     const TrackerConfig& config);

}  // namespace cgtrack
