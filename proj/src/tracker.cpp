#include <cgtrack/tracker.hpp>

#include <algorithm>
#include <cmath>
#include <string>

#include <cgtrack/errors.hpp>

namespace cgtrack {

const char* to_string(TrackState s) {
    switch (s) {
        case TrackState::New: return "New";
        case TrackState::Tracked: return "Tracked";
        case TrackState::Lost: return "Lost";
        case TrackState::Removed: return "Removed";
    }
    return "?";
}

void TrackerConfig::validate() const {
    auto in_unit = [](double v) { return v >= 0.0 && v <= 1.0; };
    if (!in_unit(theta_loc) || !in_unit(theta_cls)) {
        throw ValidationError("config: confidence thresholds must lie in [0, 1]");
    }
    for (double g : gates) {
        if (!in_unit(g)) throw ValidationError("config: gates must lie in [0, 1]");
    }
    if (!in_unit(alpha)) throw ValidationError("config: alpha must lie in [0, 1]");
    if (!in_unit(s_low)) throw ValidationError("config: s_low must lie in [0, 1]");
    if (!in_unit(ema_momentum)) throw ValidationError("config: ema_momentum must lie in [0, 1]");
    if (t_max_confirm < 1) throw ValidationError("config: t_max_confirm must be >= 1");
    if (l_max_lost < 1) throw ValidationError("config: l_max_lost must be >= 1");
    if (kalman.std_pos < 0.0 || kalman.std_vel < 0.0 ||
        kalman.init_pos_factor < 0.0 || kalman.init_vel_factor < 0.0) {
        throw ValidationError("config: kalman noise parameters must be non-negative");
    }
}

std::vector<double> ema_update(const std::vector<double>& track_emb,
                               const std::vector<double>& det_emb,
                               double momentum) {
    if (track_emb.size() != det_emb.size()) {
        throw ValidationError("ema_update: dimension mismatch");
    }
    std::vector<double> blended(track_emb.size());
    double norm_sq = 0.0;
    for (std::size_t i = 0; i < blended.size(); ++i) {
        blended[i] = momentum * track_emb[i] + (1.0 - momentum) * det_emb[i];
        norm_sq += blended[i] * blended[i];
    }
    const double norm = std::sqrt(norm_sq);
    if (norm <= 1e-12) {
        return track_emb;
    }
    for (double& v : blended) v /= norm;
    return blended;
}

Tracker::Tracker(TrackerConfig config) : config_(config) {
    config_.validate();
}

void Tracker::transition(Track& t, TrackState to, StepLog& log) {
    log.transitions.push_back({t.id, t.state, to});
    t.state = to;
}

void Tracker::apply_match(const FrameInput& frame, int det_index, int track_index,
                          StepLog& log) {
    Track& t = tracks_[track_index];
    const Detection& d = frame.detections[det_index];

    t.kalman = update(t.kalman, d.box, config_.kalman);
    if (config_.appearance && d.embedding.has_value()) {
        t.embedding = t.embedding.has_value()
                          ? ema_update(*t.embedding, *d.embedding, config_.ema_momentum)
                          : *d.embedding;
    }
    t.consecutive_hits += 1;
    t.frames_since_update = 0;
    t.last_box = d.box;
    t.last_det_conf = det_conf(d);

    if (t.state == TrackState::Lost) {
        transition(t, TrackState::Tracked, log);
    } else if (t.state == TrackState::New && t.consecutive_hits >= config_.t_max_confirm) {
        transition(t, TrackState::Tracked, log);
    }
    matched_this_frame_[track_index] = 1;
}

Tracker::LevelOutcome Tracker::run_level(int level, const FrameInput& frame,
                                         const std::vector<int>& det_pool,
                                         const std::vector<int>& track_pool,
                                         StepLog& log) {
    LevelOutcome out;
    if (!config_.level_enabled[level] || det_pool.empty() || track_pool.empty()) {
        out.unmatched_dets = det_pool;
        out.unmatched_tracks = track_pool;
        return out;
    }

    std::vector<Detection> dets;
    dets.reserve(det_pool.size());
    for (int di : det_pool) dets.push_back(frame.detections[di]);

    const bool want_appearance_matrix =
        (level == 1 && config_.level2_cost == LevelCost::Appearance) ||
        (level == 2 && config_.level3_cost == LevelCost::Appearance);

    SimilarityMatrix sim;
    if (level == 3) {
        // Blend of the motion and appearance matrices; with appearance off
        // the blend degenerates to the motion matrix.
        std::vector<BBox> boxes;
        boxes.reserve(track_pool.size());
        for (int ti : track_pool) boxes.push_back(tracks_[ti].predicted_box());
        SimilarityMatrix c1 = motion_similarity(dets, boxes, config_.c1_confidence);
        if (config_.appearance) {
            std::vector<std::vector<double>> embs;
            embs.reserve(track_pool.size());
            for (int ti : track_pool) embs.push_back(*tracks_[ti].embedding);
            sim = cost_c4(c1, cost_c3(dets, embs), config_.alpha);
        } else {
            sim = std::move(c1);
        }
    } else if (want_appearance_matrix && config_.appearance) {
        std::vector<std::vector<double>> embs;
        embs.reserve(track_pool.size());
        for (int ti : track_pool) embs.push_back(*tracks_[ti].embedding);
        sim = cost_c3(dets, embs);
    } else {
        std::vector<BBox> boxes;
        boxes.reserve(track_pool.size());
        for (int ti : track_pool) boxes.push_back(tracks_[ti].predicted_box());
        sim = motion_similarity(dets, boxes, config_.c1_confidence);
    }

    const AssignmentResult res = solve(sim, config_.gates[level]);
    for (const AssignmentMatch& m : res.matches) {
        const int det_index = det_pool[m.det];
        const int track_index = track_pool[m.track];
        apply_match(frame, det_index, track_index, log);
        log.level_matches[level].push_back({det_index, tracks_[track_index].id, m.similarity});
    }
    for (int i : res.unmatched_detections) out.unmatched_dets.push_back(det_pool[i]);
    for (int j : res.unmatched_tracks) out.unmatched_tracks.push_back(track_pool[j]);
    return out;
}

FrameOutput Tracker::step(const FrameInput& frame) {
    if (frame.frame_index <= last_frame_ || frame.frame_index < 1) {
        throw ValidationError("step: frame index " + std::to_string(frame.frame_index) +
                              " is not greater than the previous frame " +
                              std::to_string(last_frame_));
    }
    const int n_dets = static_cast<int>(frame.detections.size());
    for (int i = 0; i < n_dets; ++i) {
        const Detection& d = frame.detections[i];
        if (!d.box.valid() || d.cls_conf < 0.0 || d.cls_conf > 1.0 || d.loc_conf < 0.0 ||
            d.loc_conf > 1.0) {
            throw ValidationError("step: detection " + std::to_string(i) +
                                  " has an invalid box or confidence");
        }
        if (config_.appearance) {
            if (!d.embedding.has_value()) {
                throw ValidationError("step: appearance is on but detection " +
                                      std::to_string(i) + " carries no embedding");
            }
            if (embedding_dim_ < 0) embedding_dim_ = static_cast<int>(d.embedding->size());
            if (static_cast<int>(d.embedding->size()) != embedding_dim_) {
                throw ValidationError("step: embedding dimension changed mid-stream");
            }
        }
    }
    last_frame_ = frame.frame_index;

    StepLog log;
    log.frame = frame.frame_index;

    // Predict every live track so each level sees a current box.
    for (Track& t : tracks_) {
        if (t.state != TrackState::Removed) {
            t.kalman = predict(t.kalman, config_.kalman);
        }
    }

    std::vector<ConfidenceQuadrant> quadrant(n_dets);
    for (int i = 0; i < n_dets; ++i) {
        quadrant[i] = classify(frame.detections[i], config_.theta_loc, config_.theta_cls);
    }
    auto dets_in = [&](ConfidenceQuadrant q) {
        std::vector<int> ids;
        for (int i = 0; i < n_dets; ++i) {
            if (quadrant[i] == q) ids.push_back(i);
        }
        return ids;
    };

    matched_this_frame_.assign(tracks_.size(), 0);

    // Level 1: high/high detections against every live track.
    std::vector<int> pool1;
    for (int ti = 0; ti < static_cast<int>(tracks_.size()); ++ti) {
        if (tracks_[ti].state != TrackState::Removed) pool1.push_back(ti);
    }
    LevelOutcome l1 =
        run_level(0, frame, dets_in(ConfidenceQuadrant::HighLocHighCls), pool1, log);

    // New tracks that level 1 left unmatched die immediately; survivors of
    // any other state move on.
    std::vector<int> pool2;
    for (int ti : l1.unmatched_tracks) {
        Track& t = tracks_[ti];
        if (t.state == TrackState::New && config_.strict_new_removal &&
            config_.level_enabled[0]) {
            transition(t, TrackState::Removed, log);
            continue;
        }
        pool2.push_back(ti);
    }

    // Level 2: high-loc/low-cls plus level-1 leftovers.
    std::vector<int> dets2 = dets_in(ConfidenceQuadrant::HighLocLowCls);
    dets2.insert(dets2.end(), l1.unmatched_dets.begin(), l1.unmatched_dets.end());
    std::sort(dets2.begin(), dets2.end());
    LevelOutcome l2 = run_level(1, frame, dets2, pool2, log);

    // Level 3: low-loc/high-cls only; level-2 leftovers skip to level 4.
    LevelOutcome l3 =
        run_level(2, frame, dets_in(ConfidenceQuadrant::LowLocHighCls), l2.unmatched_tracks, log);

    // Level 4: low/low plus everything still unmatched, against the
    // remaining Tracked tracks only.
    std::vector<int> dets4 = dets_in(ConfidenceQuadrant::LowLocLowCls);
    dets4.insert(dets4.end(), l2.unmatched_dets.begin(), l2.unmatched_dets.end());
    dets4.insert(dets4.end(), l3.unmatched_dets.begin(), l3.unmatched_dets.end());
    std::sort(dets4.begin(), dets4.end());
    std::vector<int> pool4;
    for (int ti : l3.unmatched_tracks) {
        if (tracks_[ti].state == TrackState::Tracked) pool4.push_back(ti);
    }
    LevelOutcome l4 = run_level(3, frame, dets4, pool4, log);

    // Lifecycle for tracks the whole cascade left unmatched.
    for (int ti = 0; ti < static_cast<int>(tracks_.size()); ++ti) {
        Track& t = tracks_[ti];
        if (t.state == TrackState::Removed || matched_this_frame_[ti]) continue;
        t.consecutive_hits = 0;
        t.frames_since_update += 1;
        if (t.state == TrackState::New) {
            transition(t, TrackState::Removed, log);
        } else if (t.state == TrackState::Tracked) {
            transition(t, TrackState::Lost, log);
            if (t.frames_since_update >= config_.l_max_lost) {
                transition(t, TrackState::Removed, log);
            }
        } else if (t.state == TrackState::Lost) {
            if (t.frames_since_update >= config_.l_max_lost) {
                transition(t, TrackState::Removed, log);
            }
        }
    }

    // Spawn from the final leftovers. Zero-area boxes cannot seed a filter
    // state and are discarded alongside the low-confidence remainder.
    for (int di : l4.unmatched_dets) {
        const Detection& d = frame.detections[di];
        if (det_conf(d) > config_.s_low && d.box.area() > 0.0) {
            Track t;
            t.id = next_id_++;
            t.state = TrackState::New;
            t.kalman = initiate(d.box, config_.kalman);
            if (config_.appearance && d.embedding.has_value()) {
                t.embedding = *d.embedding;
            }
            t.consecutive_hits = 1;  // the spawning detection is the first hit
            t.frames_since_update = 0;
            t.last_box = d.box;
            t.last_det_conf = det_conf(d);
            t.start_frame = frame.frame_index;
            if (t.consecutive_hits >= config_.t_max_confirm) {
                transition(t, TrackState::Tracked, log);
            }
            log.spawned.push_back({di, t.id});
            tracks_.push_back(std::move(t));
        } else {
            log.discarded.push_back(di);
        }
    }

    FrameOutput out;
    for (int ti = 0; ti < static_cast<int>(matched_this_frame_.size()); ++ti) {
        const Track& t = tracks_[ti];
        if (matched_this_frame_[ti] && t.state == TrackState::Tracked) {
            out.push_back({t.id, t.last_box, t.last_det_conf});
        }
    }
    std::sort(out.begin(), out.end(),
              [](const TrackOutput& a, const TrackOutput& b) { return a.id < b.id; });

    log_.push_back(std::move(log));
    return out;
}

}  // namespace cgtrack
