#include <cgtrack/synth.hpp>

#include <algorithm>
#include <cmath>
#include <string>

#include <cgtrack/errors.hpp>
#include <cgtrack/format.hpp>
#include <cgtrack/random.hpp>

namespace cgtrack {

namespace {

constexpr std::uint64_t kBasesTag = 0xb45e5eedULL;
constexpr std::uint64_t kClutterTag = 0xc1a77e3ULL;

BBox quantize_box(const BBox& b) {
    return {quantize(b.left), quantize(b.top), quantize(b.width), quantize(b.height)};
}

double clamp01(double v) { return std::clamp(v, 0.0, 1.0); }

std::vector<double> random_unit_vector(Rng& rng, int dim) {
    std::vector<double> v(dim);
    double norm_sq = 0.0;
    do {
        norm_sq = 0.0;
        for (double& x : v) {
            x = rng.gaussian();
            norm_sq += x * x;
        }
    } while (norm_sq < 1e-12);
    const double inv = 1.0 / std::sqrt(norm_sq);
    for (double& x : v) x *= inv;
    return v;
}

// Quantized to file precision while staying unit within 1e-6.
std::vector<double> quantize_unit(std::vector<double> v) {
    for (int pass = 0; pass < 4; ++pass) {
        double norm_sq = 0.0;
        for (double x : v) norm_sq += x * x;
        const double norm = std::sqrt(norm_sq);
        if (std::abs(norm - 1.0) <= 1e-6) return v;
        for (double& x : v) x = quantize(x / norm, 9);
    }
    throw ValidationError("internal: embedding quantization failed to converge");
}

std::vector<double> noisy_embedding(Rng& rng, const std::vector<double>& base, double sigma) {
    std::vector<double> v(base.size());
    double norm_sq = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        v[i] = base[i] + sigma * rng.gaussian();
        norm_sq += v[i] * v[i];
    }
    if (norm_sq < 1e-12) return base;
    const double inv = 1.0 / std::sqrt(norm_sq);
    for (double& x : v) x = quantize(x * inv, 9);
    return quantize_unit(std::move(v));
}

void validate(const ScenarioSpec& spec) {
    if (spec.n_frames < 1) throw ValidationError("scenario: n_frames must be >= 1");
    if (spec.arena_w <= 0.0 || spec.arena_h <= 0.0) {
        throw ValidationError("scenario: arena must have positive size");
    }
    for (std::size_t k = 0; k < spec.objects.size(); ++k) {
        if (!spec.objects[k].start.valid() || spec.objects[k].start.area() <= 0.0) {
            throw ValidationError("scenario: object " + std::to_string(k) +
                                  " has a degenerate start box");
        }
    }
    if (spec.with_embeddings && spec.embedding_dim < 1) {
        throw ValidationError("scenario: embeddings demanded with dimension 0");
    }
    if (spec.miss_rate < 0.0 || spec.miss_rate > 1.0 || spec.clutter_rate < 0.0) {
        throw ValidationError("scenario: rates out of range");
    }
}

}  // namespace

std::vector<std::vector<double>> identity_bases(const ScenarioSpec& spec) {
    const int n = static_cast<int>(spec.objects.size());
    const int d = spec.embedding_dim;
    Rng rng = substream(spec.seed, 0, kBasesTag);
    std::vector<std::vector<double>> bases;
    bases.reserve(n);
    for (int k = 0; k < n; ++k) {
        std::vector<double> v = random_unit_vector(rng, d);
        if (n <= d) {
            // Gram-Schmidt against earlier identities: distinct objects get
            // exactly orthogonal appearance.
            for (const auto& prev : bases) {
                double dot = 0.0;
                for (int i = 0; i < d; ++i) dot += v[i] * prev[i];
                for (int i = 0; i < d; ++i) v[i] -= dot * prev[i];
            }
            double norm_sq = 0.0;
            for (double x : v) norm_sq += x * x;
            const double inv = 1.0 / std::sqrt(norm_sq);
            for (double& x : v) x *= inv;
        }
        bases.push_back(quantize_unit(std::move(v)));
    }
    return bases;
}

Scenario generate(const ScenarioSpec& spec) {
    validate(spec);
    Scenario out;
    const std::vector<std::vector<double>> bases =
        spec.with_embeddings ? identity_bases(spec) : std::vector<std::vector<double>>{};

    for (std::int64_t f = 1; f <= spec.n_frames; ++f) {
        FrameInput frame;
        frame.frame_index = f;
        for (int k = 0; k < static_cast<int>(spec.objects.size()); ++k) {
            const ObjectSpec& obj = spec.objects[k];
            BBox truth{obj.start.left + obj.vx * static_cast<double>(f - 1),
                       obj.start.top + obj.vy * static_cast<double>(f - 1), obj.start.width,
                       obj.start.height};
            if (truth.left < 0.0 || truth.top < 0.0 || truth.right() > spec.arena_w ||
                truth.bottom() > spec.arena_h) {
                continue;  // exited: the ground-truth track truncates here
            }
            truth = quantize_box(truth);

            double severity = 0.0;
            double boost = 0.0;
            bool dropped = false;
            for (const OcclusionEvent& ev : spec.occlusions) {
                if (ev.object == k && f >= ev.first_frame && f <= ev.last_frame) {
                    severity = std::max(severity, ev.severity);
                    boost = std::max(boost, ev.jitter_boost);
                    dropped = dropped || ev.drop;
                }
            }
            out.gt[f].push_back({k + 1, truth, 1.0 - severity});

            Rng rng = substream(spec.seed, static_cast<std::uint64_t>(f), k);
            if (dropped || rng.uniform() < spec.miss_rate) {
                continue;
            }

            // Displacement of controlled magnitude in a random direction over
            // (left, top, width, height).
            const double scale = spec.jitter_std + boost;
            const double magnitude =
                std::abs(scale * (1.0 + spec.jitter_spread * rng.gaussian()));
            double dir[4];
            double dir_norm_sq = 0.0;
            for (double& x : dir) {
                x = rng.gaussian();
                dir_norm_sq += x * x;
            }
            const double dir_inv = dir_norm_sq > 0.0 ? 1.0 / std::sqrt(dir_norm_sq) : 0.0;

            Detection det;
            det.box = truth;
            if (magnitude > 0.0) {
                det.box.left += magnitude * dir[0] * dir_inv;
                det.box.top += magnitude * dir[1] * dir_inv;
                det.box.width = std::max(0.0, det.box.width + magnitude * dir[2] * dir_inv);
                det.box.height = std::max(0.0, det.box.height + magnitude * dir[3] * dir_inv);
            }
            det.box = quantize_box(det.box);

            const double jitter_rel = magnitude / truth.height;
            const double u_loc = 2.0 * rng.uniform() - 1.0;
            const double u_cls = 2.0 * rng.uniform() - 1.0;
            det.loc_conf = quantize(clamp01(spec.base_loc * (1.0 - spec.k_loc * jitter_rel) *
                                            (1.0 + spec.conf_noise * u_loc)));
            det.cls_conf = quantize(clamp01(spec.base_cls * (1.0 - spec.k_cls * severity) *
                                            (1.0 + spec.conf_noise * u_cls)));
            if (spec.with_embeddings) {
                const double sigma =
                    spec.emb_noise_base + spec.emb_noise_severity * severity;
                det.embedding = noisy_embedding(rng, bases[k], sigma);
            }
            frame.detections.push_back(std::move(det));
        }

        if (spec.clutter_rate > 0.0) {
            Rng rng = substream(spec.seed, static_cast<std::uint64_t>(f), kClutterTag);
            const double whole = std::floor(spec.clutter_rate);
            int count = static_cast<int>(whole);
            if (rng.uniform() < spec.clutter_rate - whole) count += 1;
            for (int c = 0; c < count; ++c) {
                Detection det;
                const double w = rng.uniform(15.0, 80.0);
                const double h = rng.uniform(30.0, 160.0);
                det.box = quantize_box({rng.uniform(0.0, spec.arena_w - w),
                                        rng.uniform(0.0, spec.arena_h - h), w, h});
                det.loc_conf = quantize(rng.uniform(0.05, 0.35));
                det.cls_conf = quantize(rng.uniform(0.05, 0.35));
                if (spec.with_embeddings) {
                    det.embedding =
                        quantize_unit(random_unit_vector(rng, spec.embedding_dim));
                }
                frame.detections.push_back(std::move(det));
            }
        }
        out.frames.push_back(std::move(frame));
    }
    return out;
}

QuadrantFixture quadrant_fixture() {
    ScenarioSpec spec;
    spec.seed = 424242;
    spec.n_frames = 30;
    spec.arena_w = 1920.0;
    spec.arena_h = 1080.0;
    spec.base_loc = 0.90;
    spec.base_cls = 0.90;
    spec.with_embeddings = true;
    spec.embedding_dim = 16;
    for (int k = 0; k < 4; ++k) {
        spec.objects.push_back({{100.0 + 450.0 * k, 200.0, 80.0, 160.0}, 3.0, 1.0});
    }

    QuadrantFixture fx;
    fx.scenario = generate(spec);
    fx.designated_frame = 20;

    // Confidence schedule at the designated frame; chosen so each detection
    // sits in its quadrant and still clears that level's gate.
    const double loc[4] = {0.90, 0.90, 0.53, 0.54};
    const double cls[4] = {0.90, 0.50, 0.98, 0.74};
    FrameInput& frame = fx.scenario.frames[fx.designated_frame - 1];
    for (int k = 0; k < 4; ++k) {
        frame.detections[k].loc_conf = quantize(loc[k]);
        frame.detections[k].cls_conf = quantize(cls[k]);
    }
    return fx;
}

}  // namespace cgtrack
