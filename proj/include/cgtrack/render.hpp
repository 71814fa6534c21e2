#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

#include <cgtrack/io.hpp>
#include <cgtrack/metrics.hpp>

namespace cgtrack {

struct RenderOptions {
    int width = 0;   // image size in pixels; must be positive
    int height = 0;
    std::optional<std::int64_t> n_frames;  // default: last frame seen in the inputs
};

struct Color {
    std::uint8_t r = 0, g = 0, b = 0;
};

// Stable per-identity color: the same id maps to the same color in every
// frame and every run.
Color color_for_id(std::int64_t id);

// One binary PPM per frame (frame_000001.ppm, ...): track boxes in their id
// colors with id labels, ground truth as gray outlines when given.
void render_results(const std::vector<ResultRow>& rows, const std::optional<GroundTruth>& gt,
                    const std::filesystem::path& out_dir, const RenderOptions& options);

}  // namespace cgtrack
