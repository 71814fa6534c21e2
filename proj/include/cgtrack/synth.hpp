#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include <cgtrack/detection.hpp>
#include <cgtrack/metrics.hpp>

namespace cgtrack {

struct ObjectSpec {
    BBox start;         // positive area
    double vx = 0.0;    // pixels per frame
    double vy = 0.0;
};

// A window in which one object's detections degrade. Severity corrupts the
// classification confidence and the embedding; jitter_boost corrupts the box
// and hence the localization confidence. The two knobs are independent so a
// scenario can stage either failure mode alone. A drop window suppresses the
// detections entirely (full occlusion); the ground truth is unaffected.
struct OcclusionEvent {
    std::int64_t first_frame = 0;
    std::int64_t last_frame = 0;
    int object = 0;             // index into objects
    double severity = 0.0;      // in [0, 1]
    double jitter_boost = 0.0;  // extra jitter magnitude, pixels
    bool drop = false;
};

struct ScenarioSpec {
    std::uint64_t seed = 1;
    std::int64_t n_frames = 100;
    double arena_w = 1920.0;
    double arena_h = 1080.0;
    std::vector<ObjectSpec> objects;
    std::vector<OcclusionEvent> occlusions;

    // Noise model. A detection's box is displaced by a vector of magnitude
    // ~ jitter_std (+ any event boost); the localization confidence falls
    // linearly with that magnitude relative to the box height, and the
    // classification confidence falls linearly with occlusion severity:
    //   loc = clamp(base_loc * (1 - k_loc * |jitter| / h) * (1 + noise), 0, 1)
    //   cls = clamp(base_cls * (1 - k_cls * severity)     * (1 + noise), 0, 1)
    double jitter_std = 0.0;      // typical jitter magnitude, pixels
    double jitter_spread = 0.25;  // relative std of the magnitude around its mean
    double k_loc = 3.0;
    double k_cls = 1.0;
    double conf_noise = 0.0;      // multiplicative confidence noise amplitude
    double base_loc = 1.0;
    double base_cls = 1.0;

    double miss_rate = 0.0;       // per-object per-frame drop probability
    double clutter_rate = 0.0;    // expected clutter boxes per frame

    bool with_embeddings = true;
    int embedding_dim = 16;
    double emb_noise_base = 0.0;      // gaussian noise std at severity 0
    double emb_noise_severity = 0.0;  // additional std per unit severity
};

struct Scenario {
    std::vector<FrameInput> frames;  // one entry per frame, 1..n_frames
    GroundTruth gt;                  // noiseless boxes, ids are object index + 1
};

// Deterministic function of the spec (the seed is part of it): the same spec
// yields a byte-identical stream. Ground truth follows the linear motion
// exactly; objects leave the ground truth when their box exits the arena.
Scenario generate(const ScenarioSpec& spec);

// Canned four-object scene. Tracks burn in on clean high/high detections;
// at the designated frame each object's detection lands in a distinct
// confidence quadrant while still overlapping its own track, so under the
// default configuration detection k must match at level k+1.
struct QuadrantFixture {
    Scenario scenario;
    std::int64_t designated_frame = 0;
    // detection index (== object index) expected to match at each level
    std::array<int, 4> det_for_level{0, 1, 2, 3};
    std::array<ConfidenceQuadrant, 4> quadrants{
        ConfidenceQuadrant::HighLocHighCls, ConfidenceQuadrant::HighLocLowCls,
        ConfidenceQuadrant::LowLocHighCls, ConfidenceQuadrant::LowLocLowCls};
};

QuadrantFixture quadrant_fixture();

// Unit base embedding for each object under this spec; orthonormal whenever
// the object count fits the embedding dimension.
std::vector<std::vector<double>> identity_bases(const ScenarioSpec& spec);

}  // namespace cgtrack
