#include <cgtrack/render.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>

#include <cgtrack/errors.hpp>
#include <cgtrack/random.hpp>

namespace cgtrack {

namespace {

class Canvas {
public:
    Canvas(int w, int h) : w_(w), h_(h), pixels_(static_cast<std::size_t>(w) * h * 3, 20) {}

    void set(int x, int y, Color c) {
        if (x < 0 || y < 0 || x >= w_ || y >= h_) return;
        const std::size_t i = 3 * (static_cast<std::size_t>(y) * w_ + x);
        pixels_[i] = c.r;
        pixels_[i + 1] = c.g;
        pixels_[i + 2] = c.b;
    }

    void rect_outline(const BBox& box, Color c, int thickness) {
        const int x0 = static_cast<int>(std::lround(box.left));
        const int y0 = static_cast<int>(std::lround(box.top));
        const int x1 = static_cast<int>(std::lround(box.right()));
        const int y1 = static_cast<int>(std::lround(box.bottom()));
        for (int t = 0; t < thickness; ++t) {
            for (int x = x0; x <= x1; ++x) {
                set(x, y0 + t, c);
                set(x, y1 - t, c);
            }
            for (int y = y0; y <= y1; ++y) {
                set(x0 + t, y, c);
                set(x1 - t, y, c);
            }
        }
    }

    // 3x5 digit glyphs, doubled to 6x10.
    void draw_number(std::int64_t value, int x, int y, Color c) {
        static const std::uint16_t glyphs[10] = {
            0b111101101101111, 0b010110010010111, 0b111001111100111, 0b111001111001111,
            0b101101111001001, 0b111100111001111, 0b111100111101111, 0b111001001001001,
            0b111101111101111, 0b111101111001111};
        const std::string digits = std::to_string(value);
        for (std::size_t d = 0; d < digits.size(); ++d) {
            if (digits[d] < '0' || digits[d] > '9') continue;
            const std::uint16_t g = glyphs[digits[d] - '0'];
            for (int row = 0; row < 5; ++row) {
                for (int col = 0; col < 3; ++col) {
                    if (g & (1 << (14 - (row * 3 + col)))) {
                        const int px = x + static_cast<int>(d) * 8 + col * 2;
                        const int py = y + row * 2;
                        set(px, py, c);
                        set(px + 1, py, c);
                        set(px, py + 1, c);
                        set(px + 1, py + 1, c);
                    }
                }
            }
        }
    }

    void write_ppm(const std::filesystem::path& path) const {
        std::ofstream out(path, std::ios::binary);
        if (!out) throw ValidationError("cannot write " + path.string());
        out << "P6\n" << w_ << ' ' << h_ << "\n255\n";
        out.write(reinterpret_cast<const char*>(pixels_.data()),
                  static_cast<std::streamsize>(pixels_.size()));
    }

private:
    int w_, h_;
    std::vector<std::uint8_t> pixels_;
};

}  // namespace

Color color_for_id(std::int64_t id) {
    // Hash to a hue, then a bright HSV -> RGB conversion.
    const std::uint64_t h = splitmix64(static_cast<std::uint64_t>(id) * 0x9e3779b97f4a7c15ULL);
    const double hue = 6.0 * static_cast<double>(h >> 11) * 0x1.0p-53;
    const double x = 1.0 - std::abs(std::fmod(hue, 2.0) - 1.0);
    double r = 0, g = 0, b = 0;
    switch (static_cast<int>(hue)) {
        case 0: r = 1; g = x; break;
        case 1: r = x; g = 1; break;
        case 2: g = 1; b = x; break;
        case 3: g = x; b = 1; break;
        case 4: r = x; b = 1; break;
        default: r = 1; b = x; break;
    }
    auto to8 = [](double v) { return static_cast<std::uint8_t>(std::lround(64.0 + 191.0 * v)); };
    return {to8(r), to8(g), to8(b)};
}

void render_results(const std::vector<ResultRow>& rows, const std::optional<GroundTruth>& gt,
                    const std::filesystem::path& out_dir, const RenderOptions& options) {
    if (options.width <= 0 || options.height <= 0) {
        throw ValidationError("render: image size must be positive");
    }
    std::filesystem::create_directories(out_dir);

    std::map<std::int64_t, std::vector<ResultRow>> by_frame;
    std::int64_t last = options.n_frames.value_or(0);
    for (const ResultRow& r : rows) {
        by_frame[r.frame].push_back(r);
        last = std::max(last, r.frame);
    }
    if (gt.has_value() && !gt->empty() && !options.n_frames.has_value()) {
        last = std::max(last, gt->rbegin()->first);
    }

    const Color gt_color{120, 120, 120};
    for (std::int64_t f = 1; f <= last; ++f) {
        Canvas canvas(options.width, options.height);
        if (gt.has_value()) {
            auto it = gt->find(f);
            if (it != gt->end()) {
                for (const GtBox& g : it->second) {
                    canvas.rect_outline(g.box, gt_color, 1);
                }
            }
        }
        auto it = by_frame.find(f);
        if (it != by_frame.end()) {
            for (const ResultRow& r : it->second) {
                const Color c = color_for_id(r.id);
                canvas.rect_outline(r.box, c, 2);
                canvas.draw_number(r.id, static_cast<int>(std::lround(r.box.left)) + 3,
                                   static_cast<int>(std::lround(r.box.top)) + 3, c);
            }
        }
        char name[32];
        std::snprintf(name, sizeof name, "frame_%06lld.ppm", static_cast<long long>(f));
        canvas.write_ppm(out_dir / name);
    }
}

}  // namespace cgtrack
