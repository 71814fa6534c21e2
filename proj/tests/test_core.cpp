#include "doctest.h"

#include <cmath>

#include <cgtrack/detection.hpp>
#include <cgtrack/geometry.hpp>
#include <cgtrack/random.hpp>

using namespace cgtrack;

namespace {

// Independent IoU oracle for integer-coordinate boxes: count unit cells
// covered by both boxes and by either box.
double rasterized_iou(const BBox& a, const BBox& b, int grid) {
    long long inter = 0, uni = 0;
    for (int y = 0; y < grid; ++y) {
        for (int x = 0; x < grid; ++x) {
            const double cx = x + 0.5, cy = y + 0.5;
            const bool in_a = cx > a.left && cx < a.right() && cy > a.top && cy < a.bottom();
            const bool in_b = cx > b.left && cx < b.right() && cy > b.top && cy < b.bottom();
            inter += in_a && in_b;
            uni += in_a || in_b;
        }
    }
    return uni == 0 ? 0.0 : static_cast<double>(inter) / static_cast<double>(uni);
}

BBox random_int_box(Rng& rng, int grid) {
    const int w = rng.uniform_int(1, grid / 2);
    const int h = rng.uniform_int(1, grid / 2);
    const int left = rng.uniform_int(0, grid - w);
    const int top = rng.uniform_int(0, grid - h);
    return {static_cast<double>(left), static_cast<double>(top), static_cast<double>(w),
            static_cast<double>(h)};
}

}  // namespace

TEST_CASE("iou identity, disjoint and hand-counted overlap") {
    const BBox unit{0, 0, 10, 10};
    CHECK(iou(unit, unit) == doctest::Approx(1.0));
    CHECK(iou({0, 0, 1, 1}, {5, 5, 1, 1}) == 0.0);
    // Unit-grid count: intersection 2 cells, union 6 cells.
    CHECK(iou({0, 0, 2, 2}, {1, 0, 2, 2}) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    CHECK(rasterized_iou({0, 0, 2, 2}, {1, 0, 2, 2}, 10) == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("iou of degenerate boxes is zero, even against themselves") {
    const BBox flat{0, 0, 0, 5};
    CHECK(iou(flat, flat) == 0.0);
    CHECK(iou(flat, {0, 0, 10, 10}) == 0.0);
}

TEST_CASE("iou is symmetric and 1 on self for positive boxes") {
    Rng rng(11);
    for (int trial = 0; trial < 500; ++trial) {
        const BBox a{rng.uniform(0, 100), rng.uniform(0, 100), rng.uniform(0.1, 50),
                     rng.uniform(0.1, 50)};
        const BBox b{rng.uniform(0, 100), rng.uniform(0, 100), rng.uniform(0.1, 50),
                     rng.uniform(0.1, 50)};
        CHECK(iou(a, b) == iou(b, a));
        CHECK(iou(a, a) == doctest::Approx(1.0).epsilon(1e-12));
        const double v = iou(a, b);
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
    }
}

TEST_CASE("iou agrees with the rasterization oracle on integer boxes") {
    Rng rng(17);
    for (int trial = 0; trial < 200; ++trial) {
        const BBox a = random_int_box(rng, 100);
        const BBox b = random_int_box(rng, 100);
        CHECK(iou(a, b) == doctest::Approx(rasterized_iou(a, b, 100)).epsilon(1e-9));
    }
}

TEST_CASE("classify uses inclusive thresholds") {
    auto det = [](double loc, double cls) {
        Detection d;
        d.box = {0, 0, 10, 10};
        d.loc_conf = loc;
        d.cls_conf = cls;
        return d;
    };
    CHECK(classify(det(0.80, 0.90), 0.55, 0.75) == ConfidenceQuadrant::HighLocHighCls);
    CHECK(classify(det(0.80, 0.60), 0.55, 0.75) == ConfidenceQuadrant::HighLocLowCls);
    CHECK(classify(det(0.55, 0.75), 0.55, 0.75) == ConfidenceQuadrant::HighLocHighCls);
    CHECK(classify(det(0.30, 0.90), 0.55, 0.75) == ConfidenceQuadrant::LowLocHighCls);
    CHECK(classify(det(0.30, 0.50), 0.55, 0.75) == ConfidenceQuadrant::LowLocLowCls);
}

TEST_CASE("classify partitions the unit square and is monotone in loc_conf") {
    Rng rng(23);
    for (int trial = 0; trial < 1000; ++trial) {
        Detection d;
        d.box = {0, 0, 1, 1};
        d.loc_conf = rng.uniform();
        d.cls_conf = rng.uniform();
        const ConfidenceQuadrant q = classify(d, 0.55, 0.75);
        const bool high_loc = q == ConfidenceQuadrant::HighLocHighCls ||
                              q == ConfidenceQuadrant::HighLocLowCls;
        const bool high_cls = q == ConfidenceQuadrant::HighLocHighCls ||
                              q == ConfidenceQuadrant::LowLocHighCls;
        CHECK(high_loc == (d.loc_conf >= 0.55));
        CHECK(high_cls == (d.cls_conf >= 0.75));

        // Raising loc_conf can never flip high -> low.
        Detection raised = d;
        raised.loc_conf = std::min(1.0, d.loc_conf + rng.uniform());
        const ConfidenceQuadrant q2 = classify(raised, 0.55, 0.75);
        const bool high_loc2 = q2 == ConfidenceQuadrant::HighLocHighCls ||
                               q2 == ConfidenceQuadrant::HighLocLowCls;
        if (high_loc) CHECK(high_loc2);
    }
}

TEST_CASE("det_conf is the product and never exceeds either channel") {
    Detection d;
    d.box = {0, 0, 5, 5};
    d.cls_conf = 1.0;
    d.loc_conf = 1.0;
    CHECK(det_conf(d) == 1.0);
    d.cls_conf = 0.9;
    d.loc_conf = 0.8;
    CHECK(det_conf(d) == doctest::Approx(0.72).epsilon(1e-12));
    d.cls_conf = 0.0;
    d.loc_conf = 0.7;
    CHECK(det_conf(d) == 0.0);

    Rng rng(31);
    for (int trial = 0; trial < 200; ++trial) {
        d.cls_conf = rng.uniform();
        d.loc_conf = rng.uniform();
        CHECK(det_conf(d) <= std::min(d.cls_conf, d.loc_conf));
    }
}
