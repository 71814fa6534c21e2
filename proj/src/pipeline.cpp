#include <cgtrack/pipeline.hpp>

#include <sstream>

#include <cgtrack/errors.hpp>
#include <cgtrack/format.hpp>

namespace cgtrack {

RunOutcome run_tracking(const std::vector<FrameInput>& frames, const TrackerConfig& config) {
    RunOutcome out;
    Tracker tracker(config);
    std::size_t next = 0;
    const std::int64_t last =
        frames.empty() ? 0 : frames.back().frame_index;
    for (std::int64_t f = 1; f <= last; ++f) {
        if (next < frames.size() && frames[next].frame_index == f) {
            const FrameOutput emitted = tracker.step(frames[next]);
            ++next;
            for (const TrackOutput& t : emitted) {
                out.rows.push_back({f, t.id, t.box, quantize(t.det_conf)});
            }
        } else {
            tracker.step({f, {}});
        }
    }
    out.log = tracker.log();
    return out;
}

std::vector<ResultRow> track_to_rows(const std::vector<FrameInput>& frames,
                                     const TrackerConfig& config) {
    return run_tracking(frames, config).rows;
}

RunOutcome run_files(const std::filesystem::path& dets_path,
                     const std::optional<std::filesystem::path>& embeds_path,
                     const TrackerConfig& config, const std::filesystem::path& out_path,
                     bool legacy) {
    config.validate();
    if (config.appearance && !embeds_path.has_value()) {
        throw ValidationError("appearance is on but no embedding file was given");
    }
    if (!config.appearance && embeds_path.has_value()) {
        throw ValidationError("an embedding file was given but appearance is off");
    }
    DetectionFileContent content = read_detection_file(dets_path, legacy);
    if (embeds_path.has_value()) {
        attach_embeddings(content, read_embedding_file(*embeds_path));
    }
    RunOutcome outcome = run_tracking(group_into_frames(content), config);
    write_result_file(out_path, outcome.rows);
    return outcome;
}

std::string format_run_log(const std::vector<StepLog>& log) {
    std::ostringstream out;
    for (const StepLog& step : log) {
        out << "frame=" << step.frame;
        std::size_t total = 0;
        for (int level = 0; level < 4; ++level) {
            out << " l" << (level + 1) << "=" << step.level_matches[level].size();
            total += step.level_matches[level].size();
        }
        out << " matched=" << total << " spawned=" << step.spawned.size()
            << " discarded=" << step.discarded.size() << '\n';
    }
    return out.str();
}

EvalReport eval_files(const std::filesystem::path& gt_path,
                      const std::filesystem::path& results_path, const EvalOptions& options,
                      const std::string& sequence_name) {
    const GroundTruth gt = read_gt_file(gt_path);
    const TrackingResult results = rows_to_result(read_result_file(results_path));
    const SequenceStats stats = evaluate(gt, results, options);
    return make_report({{sequence_name, stats}});
}

}  // namespace cgtrack
