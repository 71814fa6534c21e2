#include <cgtrack/metrics.hpp>

#include <algorithm>
#include <set>

#include <cgtrack/assignment.hpp>
#include <cgtrack/errors.hpp>

namespace cgtrack {

namespace {

void finalize(SequenceStats& s) {
    s.mota_valid = s.gt_count > 0;
    s.mota = s.mota_valid
                 ? 1.0 - static_cast<double>(s.fn + s.fp + s.idsw) / static_cast<double>(s.gt_count)
                 : 0.0;
    const std::int64_t denom = s.gt_count + s.pred_count;
    s.idf1 = denom > 0 ? 2.0 * static_cast<double>(s.idtp) / static_cast<double>(denom) : 1.0;
}

}  // namespace

SequenceStats evaluate(const GroundTruth& gt, const TrackingResult& results,
                       const EvalOptions& options) {
    GroundTruth filtered;
    for (const auto& [frame, boxes] : gt) {
        std::vector<GtBox> kept;
        for (const GtBox& b : boxes) {
            if (b.visibility >= options.min_visibility) kept.push_back(b);
        }
        if (!kept.empty()) filtered[frame] = std::move(kept);
    }

    SequenceStats stats;
    for (const auto& [frame, boxes] : filtered) stats.gt_count += boxes.size();
    for (const auto& [frame, boxes] : results) stats.pred_count += boxes.size();

    if (!filtered.empty() && !results.empty()) {
        const std::int64_t lo = filtered.begin()->first;
        const std::int64_t hi = filtered.rbegin()->first;
        const std::int64_t rlo = results.begin()->first;
        const std::int64_t rhi = results.rbegin()->first;
        if (rlo < lo || rhi > hi) {
            throw ValidationError("evaluate: result frames [" + std::to_string(rlo) + ", " +
                                  std::to_string(rhi) + "] fall outside the ground-truth range [" +
                                  std::to_string(lo) + ", " + std::to_string(hi) + "]");
        }
    } else if (filtered.empty() && !results.empty()) {
        throw ValidationError("evaluate: results present but the ground truth is empty");
    }

    std::set<std::int64_t> frames;
    for (const auto& [f, _] : filtered) frames.insert(f);
    for (const auto& [f, _] : results) frames.insert(f);

    // gt id -> track id of the most recent match; persists across gaps so a
    // switch is counted only when the identity actually changes hands.
    std::map<std::int64_t, std::int64_t> last_match;

    // Per-(gt id, track id) count of frames matched above threshold, for the
    // identity matching.
    std::map<std::pair<std::int64_t, std::int64_t>, std::int64_t> overlap;

    static const std::vector<GtBox> no_gt;
    static const std::vector<TrackedBox> no_results;
    for (std::int64_t frame : frames) {
        auto git = filtered.find(frame);
        auto rit = results.find(frame);
        const std::vector<GtBox>& gt_boxes = git != filtered.end() ? git->second : no_gt;
        const std::vector<TrackedBox>& res_boxes =
            rit != results.end() ? rit->second : no_results;

        for (const GtBox& g : gt_boxes) {
            for (const TrackedBox& r : res_boxes) {
                if (iou(g.box, r.box) >= options.iou_threshold) {
                    overlap[{g.id, r.id}] += 1;
                }
            }
        }

        std::vector<char> gt_used(gt_boxes.size(), 0), res_used(res_boxes.size(), 0);
        std::vector<std::pair<std::int64_t, std::int64_t>> matches;

        // Continuity first: keep last frame's pairing while it stays valid.
        for (std::size_t i = 0; i < gt_boxes.size(); ++i) {
            auto prev = last_match.find(gt_boxes[i].id);
            if (prev == last_match.end()) continue;
            for (std::size_t j = 0; j < res_boxes.size(); ++j) {
                if (res_used[j] || res_boxes[j].id != prev->second) continue;
                if (iou(gt_boxes[i].box, res_boxes[j].box) >= options.iou_threshold) {
                    gt_used[i] = 1;
                    res_used[j] = 1;
                    matches.push_back({gt_boxes[i].id, res_boxes[j].id});
                }
                break;
            }
        }

        // Fresh pairs among the remainder by maximum-IoU assignment.
        std::vector<int> free_gt, free_res;
        for (std::size_t i = 0; i < gt_boxes.size(); ++i) {
            if (!gt_used[i]) free_gt.push_back(static_cast<int>(i));
        }
        for (std::size_t j = 0; j < res_boxes.size(); ++j) {
            if (!res_used[j]) free_res.push_back(static_cast<int>(j));
        }
        if (!free_gt.empty() && !free_res.empty()) {
            Eigen::MatrixXd w(free_gt.size(), free_res.size());
            for (std::size_t a = 0; a < free_gt.size(); ++a) {
                for (std::size_t b = 0; b < free_res.size(); ++b) {
                    const double v = iou(gt_boxes[free_gt[a]].box, res_boxes[free_res[b]].box);
                    w(a, b) = v >= options.iou_threshold ? v : 0.0;
                }
            }
            const std::vector<int> sol = max_weight_assignment(w);
            for (std::size_t a = 0; a < free_gt.size(); ++a) {
                const int b = sol[a];
                if (b < 0 || w(a, b) < options.iou_threshold) continue;
                gt_used[free_gt[a]] = 1;
                res_used[free_res[b]] = 1;
                matches.push_back({gt_boxes[free_gt[a]].id, res_boxes[free_res[b]].id});
            }
        }

        for (const auto& [gid, tid] : matches) {
            auto prev = last_match.find(gid);
            if (prev != last_match.end() && prev->second != tid) {
                stats.idsw += 1;
            }
            last_match[gid] = tid;
        }
        for (std::size_t i = 0; i < gt_boxes.size(); ++i) {
            if (!gt_used[i]) stats.fn += 1;
        }
        for (std::size_t j = 0; j < res_boxes.size(); ++j) {
            if (!res_used[j]) stats.fp += 1;
        }
    }

    // Global identity matching: assign each gt id to at most one track id,
    // maximizing the total number of identity-consistent frame matches.
    if (!overlap.empty()) {
        std::vector<std::int64_t> gt_ids, track_ids;
        for (const auto& [key, _] : overlap) {
            gt_ids.push_back(key.first);
            track_ids.push_back(key.second);
        }
        std::sort(gt_ids.begin(), gt_ids.end());
        gt_ids.erase(std::unique(gt_ids.begin(), gt_ids.end()), gt_ids.end());
        std::sort(track_ids.begin(), track_ids.end());
        track_ids.erase(std::unique(track_ids.begin(), track_ids.end()), track_ids.end());

        Eigen::MatrixXd w = Eigen::MatrixXd::Zero(gt_ids.size(), track_ids.size());
        for (const auto& [key, count] : overlap) {
            const auto gi = std::lower_bound(gt_ids.begin(), gt_ids.end(), key.first) - gt_ids.begin();
            const auto ti =
                std::lower_bound(track_ids.begin(), track_ids.end(), key.second) - track_ids.begin();
            w(gi, ti) = static_cast<double>(count);
        }
        const std::vector<int> sol = max_weight_assignment(w);
        for (std::size_t a = 0; a < gt_ids.size(); ++a) {
            if (sol[a] >= 0) stats.idtp += static_cast<std::int64_t>(w(a, sol[a]));
        }
    }

    finalize(stats);
    return stats;
}

EvalReport make_report(const std::vector<std::pair<std::string, SequenceStats>>& sequences) {
    EvalReport report;
    report.sequences = sequences;
    for (const auto& [name, s] : sequences) {
        report.total.gt_count += s.gt_count;
        report.total.pred_count += s.pred_count;
        report.total.fp += s.fp;
        report.total.fn += s.fn;
        report.total.idsw += s.idsw;
        report.total.idtp += s.idtp;
    }
    finalize(report.total);
    return report;
}

}  // namespace cgtrack
