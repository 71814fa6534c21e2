#include "doctest.h"

#include <cmath>

#include <cgtrack/errors.hpp>
#include <cgtrack/synth.hpp>

using namespace cgtrack;

namespace {

double box_distance(const BBox& a, const BBox& b) {
    return std::abs(a.left - b.left) + std::abs(a.top - b.top) +
           std::abs(a.width - b.width) + std::abs(a.height - b.height);
}

double correlation(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0, sxx = 0, syy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
    }
    return sxy / std::sqrt(sxx * syy);
}

}  // namespace

TEST_CASE("noiseless generation reproduces the ground truth exactly") {
    ScenarioSpec spec;
    spec.seed = 5;
    spec.n_frames = 40;
    spec.objects = {{{100, 100, 50, 100}, 2, 0}, {{600, 300, 50, 100}, -1, 1}};
    spec.with_embeddings = false;

    const Scenario sc = generate(spec);
    REQUIRE(sc.frames.size() == 40);
    for (const FrameInput& frame : sc.frames) {
        const auto& gt_boxes = sc.gt.at(frame.frame_index);
        REQUIRE(frame.detections.size() == gt_boxes.size());
        for (std::size_t i = 0; i < gt_boxes.size(); ++i) {
            CHECK(box_distance(frame.detections[i].box, gt_boxes[i].box) == 0.0);
            CHECK(frame.detections[i].loc_conf == 1.0);
            CHECK(frame.detections[i].cls_conf == 1.0);
        }
    }
}

TEST_CASE("linear motion: constant velocity per frame from the start box") {
    ScenarioSpec spec;
    spec.seed = 6;
    spec.n_frames = 20;
    spec.objects = {{{100, 50, 40, 80}, 2, 0}};
    spec.with_embeddings = false;
    const Scenario sc = generate(spec);
    CHECK(sc.gt.at(1)[0].box.left == 100.0);
    for (int f = 2; f <= 20; ++f) {
        CHECK(sc.gt.at(f)[0].box.left - sc.gt.at(f - 1)[0].box.left == doctest::Approx(2.0));
        CHECK(sc.gt.at(f)[0].box.top == 50.0);
    }
}

TEST_CASE("objects leaving the arena truncate their ground-truth track") {
    ScenarioSpec spec;
    spec.seed = 7;
    spec.n_frames = 50;
    spec.arena_w = 300.0;
    spec.arena_h = 300.0;
    spec.objects = {{{200, 100, 40, 80}, 5, 0}};  // right edge hits 300 at frame 13
    spec.with_embeddings = false;
    const Scenario sc = generate(spec);
    CHECK(sc.gt.count(1) == 1);
    CHECK(sc.gt.count(13) == 1);
    CHECK(sc.gt.count(14) == 0);
    // No detections after the exit either.
    for (const FrameInput& frame : sc.frames) {
        if (frame.frame_index >= 14) CHECK(frame.detections.empty());
    }
}

TEST_CASE("same spec generates byte-identical streams") {
    ScenarioSpec spec;
    spec.seed = 99;
    spec.n_frames = 60;
    spec.objects = {{{50, 100, 60, 120}, 4, 1}, {{700, 300, 60, 120}, -2, 0}};
    spec.jitter_std = 4.0;
    spec.miss_rate = 0.2;
    spec.clutter_rate = 1.0;
    spec.conf_noise = 0.1;
    spec.with_embeddings = true;
    spec.emb_noise_base = 0.2;

    const Scenario a = generate(spec);
    const Scenario b = generate(spec);
    REQUIRE(a.frames.size() == b.frames.size());
    for (std::size_t f = 0; f < a.frames.size(); ++f) {
        REQUIRE(a.frames[f].detections.size() == b.frames[f].detections.size());
        for (std::size_t i = 0; i < a.frames[f].detections.size(); ++i) {
            const Detection& da = a.frames[f].detections[i];
            const Detection& db = b.frames[f].detections[i];
            CHECK(da.box.left == db.box.left);
            CHECK(da.cls_conf == db.cls_conf);
            CHECK(da.loc_conf == db.loc_conf);
            REQUIRE(da.embedding.has_value());
            CHECK(*da.embedding == *db.embedding);
        }
    }

    ScenarioSpec other = spec;
    other.seed = 100;
    const Scenario c = generate(other);
    bool any_difference = false;
    for (std::size_t f = 0; f < a.frames.size() && !any_difference; ++f) {
        if (a.frames[f].detections.size() != c.frames[f].detections.size()) {
            any_difference = true;
            break;
        }
        for (std::size_t i = 0; i < a.frames[f].detections.size(); ++i) {
            any_difference = any_difference ||
                             a.frames[f].detections[i].box.left != c.frames[f].detections[i].box.left;
        }
    }
    CHECK(any_difference);
}

TEST_CASE("localization confidence anti-correlates with realized jitter") {
    ScenarioSpec spec;
    spec.seed = 11;
    spec.n_frames = 200;
    spec.objects = {{{200, 200, 60, 120}, 1, 0}};
    spec.jitter_std = 6.0;
    spec.jitter_spread = 0.8;
    spec.k_loc = 2.0;
    spec.with_embeddings = false;

    const Scenario sc = generate(spec);
    std::vector<double> jitter, loc;
    for (const FrameInput& frame : sc.frames) {
        const auto& gt = sc.gt.at(frame.frame_index)[0].box;
        for (const Detection& d : frame.detections) {
            jitter.push_back(box_distance(d.box, gt));
            loc.push_back(d.loc_conf);
        }
    }
    REQUIRE(jitter.size() >= 100);
    CHECK(correlation(jitter, loc) < -0.5);
}

TEST_CASE("classification confidence anti-correlates with occlusion severity") {
    ScenarioSpec spec;
    spec.seed = 12;
    spec.n_frames = 150;
    spec.objects = {{{200, 200, 60, 120}, 1, 0}};
    spec.k_cls = 1.0;
    spec.conf_noise = 0.05;
    spec.with_embeddings = false;
    for (std::int64_t f = 10; f < 150; f += 30) {
        spec.occlusions.push_back({f, f + 9, 0, 0.1 + 0.05 * static_cast<double>(f % 7), 0.0});
    }

    const Scenario sc = generate(spec);
    std::vector<double> severity, cls;
    for (const FrameInput& frame : sc.frames) {
        double s = 0.0;
        for (const OcclusionEvent& ev : spec.occlusions) {
            if (frame.frame_index >= ev.first_frame && frame.frame_index <= ev.last_frame) {
                s = std::max(s, ev.severity);
            }
        }
        for (const Detection& d : frame.detections) {
            severity.push_back(s);
            cls.push_back(d.cls_conf);
        }
    }
    REQUIRE(severity.size() >= 100);
    CHECK(correlation(severity, cls) < -0.5);
}

TEST_CASE("drop windows suppress detections but not ground truth") {
    ScenarioSpec spec;
    spec.seed = 13;
    spec.n_frames = 30;
    spec.objects = {{{100, 100, 40, 80}, 2, 0}};
    spec.occlusions = {{10, 14, 0, 0.0, 0.0, true}};
    spec.with_embeddings = false;
    const Scenario sc = generate(spec);
    for (const FrameInput& frame : sc.frames) {
        const bool dropped = frame.frame_index >= 10 && frame.frame_index <= 14;
        CHECK(frame.detections.size() == (dropped ? 0 : 1));
        CHECK(sc.gt.at(frame.frame_index).size() == 1);
    }
}

TEST_CASE("clutter and misses happen at roughly the configured rates") {
    ScenarioSpec spec;
    spec.seed = 14;
    spec.n_frames = 400;
    spec.objects = {{{200, 200, 60, 120}, 1, 0}};
    spec.miss_rate = 0.25;
    spec.clutter_rate = 0.5;
    spec.with_embeddings = false;
    const Scenario sc = generate(spec);
    int present = 0, clutter = 0;
    for (const FrameInput& frame : sc.frames) {
        // The object's detection, when present, comes first and overlaps gt.
        const auto& gt = sc.gt.at(frame.frame_index)[0].box;
        bool object_seen = false;
        for (const Detection& d : frame.detections) {
            if (!object_seen && box_distance(d.box, gt) < 40.0) {
                object_seen = true;
            } else {
                ++clutter;
                CHECK(det_conf(d) <= 0.1225);  // low confidence by construction
            }
        }
        present += object_seen;
    }
    CHECK(present > 400 * 0.65);
    CHECK(present < 400 * 0.85);
    CHECK(clutter > 400 * 0.35);
    CHECK(clutter < 400 * 0.65);
}

TEST_CASE("degenerate specs are rejected") {
    ScenarioSpec spec;
    spec.objects = {{{0, 0, 0, 10}, 1, 0}};
    CHECK_THROWS_AS(generate(spec), ValidationError);

    ScenarioSpec bad_dim;
    bad_dim.objects = {{{0, 0, 10, 10}, 1, 0}};
    bad_dim.with_embeddings = true;
    bad_dim.embedding_dim = 0;
    CHECK_THROWS_AS(generate(bad_dim), ValidationError);
}

TEST_CASE("identity bases are orthonormal when they fit the dimension") {
    ScenarioSpec spec;
    spec.seed = 15;
    spec.embedding_dim = 16;
    for (int k = 0; k < 4; ++k) spec.objects.push_back({{10.0 + 100 * k, 10, 20, 40}, 0, 0});
    const auto bases = identity_bases(spec);
    REQUIRE(bases.size() == 4);
    for (std::size_t i = 0; i < bases.size(); ++i) {
        for (std::size_t j = 0; j < bases.size(); ++j) {
            double dot = 0.0;
            for (int d = 0; d < 16; ++d) dot += bases[i][d] * bases[j][d];
            CHECK(dot == doctest::Approx(i == j ? 1.0 : 0.0).epsilon(1e-5));
        }
    }
}

TEST_CASE("the quadrant fixture is noiseless and self-consistent") {
    const QuadrantFixture fx = quadrant_fixture();
    REQUIRE(fx.scenario.frames.size() >= static_cast<std::size_t>(fx.designated_frame));
    for (const FrameInput& frame : fx.scenario.frames) {
        const auto& gt_boxes = fx.scenario.gt.at(frame.frame_index);
        REQUIRE(frame.detections.size() == gt_boxes.size());
        for (std::size_t i = 0; i < gt_boxes.size(); ++i) {
            CHECK(box_distance(frame.detections[i].box, gt_boxes[i].box) == 0.0);
        }
    }
    const FrameInput& frame = fx.scenario.frames[fx.designated_frame - 1];
    CHECK(classify(frame.detections[0], 0.55, 0.75) == ConfidenceQuadrant::HighLocHighCls);
    CHECK(classify(frame.detections[1], 0.55, 0.75) == ConfidenceQuadrant::HighLocLowCls);
    CHECK(classify(frame.detections[2], 0.55, 0.75) == ConfidenceQuadrant::LowLocHighCls);
    CHECK(classify(frame.detections[3], 0.55, 0.75) == ConfidenceQuadrant::LowLocLowCls);
}
