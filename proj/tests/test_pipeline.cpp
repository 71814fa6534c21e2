#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <set>

#include <cgtrack/ablate.hpp>
#include <cgtrack/errors.hpp>
#include <cgtrack/pipeline.hpp>
#include <cgtrack/render.hpp>
#include <cgtrack/synth.hpp>

using namespace cgtrack;
namespace fs = std::filesystem;

namespace {

fs::path test_dir() {
    const fs::path dir = fs::temp_directory_path() / "cgtrack_pipeline_tests";
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), {});
}

ScenarioSpec clean_spec() {
    ScenarioSpec spec;
    spec.seed = 2024;
    spec.n_frames = 50;
    spec.objects = {{{50, 100, 60, 120}, 3, 0},
                    {{500, 300, 60, 120}, 2, 1},
                    {{1000, 600, 60, 120}, -2, -1}};
    spec.base_loc = 0.95;
    spec.base_cls = 0.95;
    spec.with_embeddings = true;
    return spec;
}

}  // namespace

TEST_CASE("a noiseless run reproduces ground truth after the confirmation delay") {
    const Scenario sc = generate(clean_spec());
    const RunOutcome outcome = run_tracking(sc.frames, TrackerConfig{});

    std::map<std::int64_t, std::map<std::int64_t, BBox>> by_frame;  // frame -> id -> box
    for (const ResultRow& r : outcome.rows) by_frame[r.frame][r.id] = r.box;

    // Frames 2.. report every object at exactly its ground-truth box.
    for (const auto& [frame, gt_boxes] : sc.gt) {
        if (frame < 2) continue;
        REQUIRE(by_frame.count(frame) == 1);
        REQUIRE(by_frame[frame].size() == gt_boxes.size());
        for (const GtBox& g : gt_boxes) {
            bool found = false;
            for (const auto& [id, box] : by_frame[frame]) {
                found = found || (box.left == g.box.left && box.top == g.box.top &&
                                  box.width == g.box.width && box.height == g.box.height);
            }
            CHECK(found);
        }
    }
    CHECK(by_frame.count(1) == 0);  // nothing confirmed on the first frame
}

TEST_CASE("per-level match counts sum to the per-frame match total") {
    ScenarioSpec spec = clean_spec();
    spec.jitter_std = 4.0;
    spec.conf_noise = 0.1;
    spec.base_loc = 0.85;
    spec.base_cls = 0.85;
    spec.miss_rate = 0.1;
    spec.clutter_rate = 0.5;
    spec.emb_noise_base = 0.1;
    const Scenario sc = generate(spec);
    const RunOutcome outcome = run_tracking(sc.frames, TrackerConfig{});
    const std::string log_text = format_run_log(outcome.log);
    for (const StepLog& log : outcome.log) {
        std::size_t total = 0;
        std::set<int> dets;
        for (int level = 0; level < 4; ++level) {
            total += log.level_matches[level].size();
            for (const LevelMatch& m : log.level_matches[level]) dets.insert(m.det);
        }
        CHECK(dets.size() == total);
        const std::string expect = "frame=" + std::to_string(log.frame) + " ";
        CHECK(log_text.find(expect) != std::string::npos);
    }
}

TEST_CASE("file-level run is deterministic byte for byte") {
    const Scenario sc = generate(clean_spec());
    const fs::path dir = test_dir();
    write_detection_file(dir / "dets.txt", sc.frames);
    write_embedding_file(dir / "embeds.txt", sc.frames);
    write_gt_file(dir / "gt.txt", sc.gt);

    TrackerConfig config;
    run_files(dir / "dets.txt", dir / "embeds.txt", config, dir / "r1.txt");
    run_files(dir / "dets.txt", dir / "embeds.txt", config, dir / "r2.txt");
    CHECK(slurp(dir / "r1.txt") == slurp(dir / "r2.txt"));
    CHECK(!slurp(dir / "r1.txt").empty());

    const EvalReport e1 = eval_files(dir / "gt.txt", dir / "r1.txt", {});
    const EvalReport e2 = eval_files(dir / "gt.txt", dir / "r2.txt", {});
    write_report_file(dir / "rep1.txt", e1, 0.5);
    write_report_file(dir / "rep2.txt", e2, 0.5);
    CHECK(slurp(dir / "rep1.txt") == slurp(dir / "rep2.txt"));
    CHECK(e1.total.mota >= 0.98);  // noiseless scenario tracks nearly perfectly
    CHECK(e1.total.idsw == 0);
}

TEST_CASE("appearance and embeddings must be paired") {
    const Scenario sc = generate(clean_spec());
    const fs::path dir = test_dir();
    write_detection_file(dir / "p_dets.txt", sc.frames);
    write_embedding_file(dir / "p_embeds.txt", sc.frames);

    TrackerConfig on;  // appearance defaults to on
    CHECK_THROWS_AS(run_files(dir / "p_dets.txt", std::nullopt, on, dir / "p_out.txt"),
                    ValidationError);
    TrackerConfig off;
    off.appearance = false;
    CHECK_THROWS_AS(
        run_files(dir / "p_dets.txt", fs::path(dir / "p_embeds.txt"), off, dir / "p_out.txt"),
        ValidationError);
    // The valid pairings both work.
    run_files(dir / "p_dets.txt", fs::path(dir / "p_embeds.txt"), on, dir / "p_out.txt");
    run_files(dir / "p_dets.txt", std::nullopt, off, dir / "p_out2.txt");
}

TEST_CASE("frame gaps in the detection file still age the tracks") {
    // Detections at frames 1, 2 and 40 only: the track born at 1-2 dies
    // during the 37-frame silence (default retention 30).
    std::vector<FrameInput> frames;
    Detection d;
    d.box = {100, 100, 40, 80};
    d.cls_conf = d.loc_conf = 0.9;
    frames.push_back({1, {d}});
    frames.push_back({2, {d}});
    frames.push_back({40, {d}});
    const RunOutcome outcome = run_tracking(frames, [] {
        TrackerConfig c;
        c.appearance = false;
        return c;
    }());
    CHECK(outcome.log.size() == 40);  // every frame stepped
    std::set<std::int64_t> ids;
    for (const ResultRow& r : outcome.rows) ids.insert(r.id);
    CHECK(ids.size() == 1);  // only the first track ever confirmed
    // The reappearance at frame 40 spawns a fresh id rather than reviving.
    bool spawned_late = false;
    for (const StepLog& log : outcome.log) {
        if (log.frame == 40) spawned_late = !log.spawned.empty();
    }
    CHECK(spawned_late);
}

TEST_CASE("eval of the ground truth against itself is perfect") {
    const Scenario sc = generate(clean_spec());
    const fs::path dir = test_dir();
    write_gt_file(dir / "e_gt.txt", sc.gt);
    std::vector<ResultRow> rows;
    for (const auto& [frame, boxes] : sc.gt) {
        for (const GtBox& b : boxes) rows.push_back({frame, b.id, b.box, 1.0});
    }
    write_result_file(dir / "e_res.txt", rows);
    const EvalReport report = eval_files(dir / "e_gt.txt", dir / "e_res.txt", {});
    CHECK(report.total.mota == 1.0);
    CHECK(report.total.idf1 == 1.0);
    CHECK(report.total.idsw == 0);
}

TEST_CASE("render writes one stable-color frame per index") {
    const fs::path dir = test_dir() / "render";
    fs::remove_all(dir);

    const Color c1 = color_for_id(42);
    CHECK(color_for_id(42).r == c1.r);
    CHECK(color_for_id(42).g == c1.g);
    CHECK(color_for_id(42).b == c1.b);
    const Color c2 = color_for_id(43);
    CHECK((c1.r != c2.r || c1.g != c2.g || c1.b != c2.b));

    std::vector<ResultRow> rows = {{1, 1, {10, 10, 30, 60}, 1.0},
                                   {2, 1, {14, 10, 30, 60}, 1.0},
                                   {3, 1, {18, 10, 30, 60}, 1.0}};
    RenderOptions options;
    options.width = 160;
    options.height = 120;
    render_results(rows, std::nullopt, dir, options);
    CHECK(fs::exists(dir / "frame_000001.ppm"));
    CHECK(fs::exists(dir / "frame_000003.ppm"));

    // Empty results with a frame override produce blank frames.
    const fs::path blank_dir = test_dir() / "render_blank";
    fs::remove_all(blank_dir);
    options.n_frames = 2;
    render_results({}, std::nullopt, blank_dir, options);
    CHECK(fs::exists(blank_dir / "frame_000002.ppm"));
    const std::string ppm = slurp(blank_dir / "frame_000001.ppm");
    CHECK(ppm.substr(0, 2) == "P6");
    CHECK(ppm.size() > 160 * 120 * 3);

    RenderOptions bad;
    bad.width = 0;
    bad.height = 10;
    CHECK_THROWS_AS(render_results(rows, std::nullopt, dir, bad), ValidationError);
}

TEST_CASE("ablation tables have the advertised shape and are deterministic") {
    const AblateTable t1 = run_levels_suite(3);
    REQUIRE(t1.rows.size() == 5);
    CHECK(t1.rows[0].variant == "l1-only");
    CHECK(t1.rows[4].variant == "full");
    const AblateTable t2 = run_levels_suite(3);
    CHECK(format_table(t1) == format_table(t2));
    CHECK(format_table(t1).find("# seed = 3") != std::string::npos);

    CHECK_THROWS_AS(run_suite("nope", 1), ValidationError);
    CHECK(run_suite("levels", 3).rows.size() == 5);
}
