#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include <cgtrack/assignment.hpp>
#include <cgtrack/costs.hpp>
#include <cgtrack/detection.hpp>
#include <cgtrack/kalman.hpp>

namespace cgtrack {

enum class TrackState { New, Tracked, Lost, Removed };

const char* to_string(TrackState s);

// Matrix family a cascade level can use.
enum class LevelCost { Motion, Appearance };

struct TrackerConfig {
    double theta_loc = 0.55;   // localization confidence split
    double theta_cls = 0.75;   // classification confidence split
    std::array<double, 4> gates{0.65, 0.65, 0.5, 0.55};  // max admissible cost per level
    double alpha = 0.5;        // motion weight in the level-4 blend
    double s_low = 0.1;        // spawn floor on det_conf
    int t_max_confirm = 2;     // consecutive matched frames to confirm a track
    int l_max_lost = 30;       // unmatched frames before a lost track is removed
    double ema_momentum = 0.9;
    bool appearance = true;    // embeddings available and used
    // A new track unmatched at level 1 is removed immediately. Off, it stays
    // eligible through the later levels and is removed only if the whole
    // frame leaves it unmatched.
    bool strict_new_removal = true;
    ConfidenceSource c1_confidence = ConfidenceSource::Localization;
    LevelCost level2_cost = LevelCost::Motion;
    LevelCost level3_cost = LevelCost::Appearance;
    std::array<bool, 4> level_enabled{true, true, true, true};
    KalmanParams kalman;

    void validate() const;  // throws ValidationError
};

struct Track {
    std::int64_t id = 0;       // positive, never reused
    TrackState state = TrackState::New;
    KalmanState kalman;
    std::optional<std::vector<double>> embedding;  // EMA-smoothed, unit length
    int consecutive_hits = 0;
    int frames_since_update = 0;
    BBox last_box;
    double last_det_conf = 0.0;
    std::int64_t start_frame = 0;

    BBox predicted_box() const { return state_to_box(kalman); }
};

struct TrackOutput {
    std::int64_t id = 0;
    BBox box;             // the matched detection's box, not the filter posterior
    double det_conf = 0.0;
};

using FrameOutput = std::vector<TrackOutput>;  // sorted by id

struct LevelMatch {
    int det = -1;                // detection index within the frame
    std::int64_t track_id = 0;
    double similarity = 0.0;
};

struct StateTransition {
    std::int64_t track_id = 0;
    TrackState from = TrackState::New;
    TrackState to = TrackState::New;
};

// Per-step diagnostics: which detection matched at which level, what was
// spawned or discarded, and every lifecycle transition.
struct StepLog {
    std::int64_t frame = 0;
    std::array<std::vector<LevelMatch>, 4> level_matches;
    std::vector<std::pair<int, std::int64_t>> spawned;  // (det index, track id)
    std::vector<int> discarded;                         // det indices below the spawn floor
    std::vector<StateTransition> transitions;
};

// Smoothed track embedding. Falls back to the previous embedding when the
// blend cancels to zero (antipodal inputs at momentum 0.5).
std::vector<double> ema_update(const std::vector<double>& track_emb,
                               const std::vector<double>& det_emb,
                               double momentum);

// Four-level confidence-guided association over a stream of frames.
//
// Per step: predict every live track, split detections by confidence
// quadrant, then associate level by level --
//   1: high-loc/high-cls detections vs all live tracks, motion matrix;
//   2: high-loc/low-cls plus level-1 leftovers vs still-unmatched tracks,
//      motion matrix (the boxes are trustworthy, the appearance is not);
//   3: low-loc/high-cls vs still-unmatched tracks, appearance matrix
//      (the appearance is trustworthy, the boxes are not);
//   4: low-loc/low-cls plus levels 2-3 leftovers vs unmatched Tracked
//      tracks, blended matrix.
// Matched tracks update their filter and embedding; unmatched Tracked
// tracks go Lost, stale Lost tracks are removed, and leftover detections
// above the spawn floor seed new tracks.
//
// Single-threaded: step() calls must arrive in strictly increasing frame
// order. Independent instances may run in parallel.
class Tracker {
public:
    explicit Tracker(TrackerConfig config);

    FrameOutput step(const FrameInput& frame);

    const std::vector<Track>& tracks() const { return tracks_; }
    const std::vector<StepLog>& log() const { return log_; }
    const TrackerConfig& config() const { return config_; }

private:
    struct LevelOutcome {
        std::vector<int> unmatched_dets;    // frame detection indices
        std::vector<int> unmatched_tracks;  // indices into tracks_
    };

    LevelOutcome run_level(int level, const FrameInput& frame,
                           const std::vector<int>& det_pool,
                           const std::vector<int>& track_pool, StepLog& log);
    void apply_match(const FrameInput& frame, int det_index, int track_index, StepLog& log);
    void transition(Track& t, TrackState to, StepLog& log);

    TrackerConfig config_;
    std::vector<Track> tracks_;
    std::vector<StepLog> log_;
    std::int64_t next_id_ = 1;
    std::int64_t last_frame_ = 0;
    std::vector<char> matched_this_frame_;
    int embedding_dim_ = -1;
};

}  // namespace cgtrack
