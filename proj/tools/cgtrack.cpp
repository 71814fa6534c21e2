#include <clocale>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include <cgtrack/ablate.hpp>
#include <cgtrack/errors.hpp>
#include <cgtrack/io.hpp>
#include <cgtrack/pipeline.hpp>
#include <cgtrack/render.hpp>
#include <cgtrack/synth.hpp>

namespace fs = std::filesystem;
using namespace cgtrack;

namespace {

struct RunArgs {
    std::string dets;
    std::string embeds;
    std::string config;
    std::string out = "results.txt";
    bool legacy = false;
    bool quiet = false;
};

struct EvalArgs {
    std::string gt;
    std::string results;
    std::string report;
    std::string name = "seq";
    double iou_threshold = 0.5;
    double min_visibility = 0.0;
};

struct SynthArgs {
    std::string preset = "clean";
    std::string out_dir = ".";
    std::uint64_t seed = 1;
    std::int64_t frames = 100;
    int objects = 10;
    double jitter = 0.0;
    double miss_rate = 0.0;
    double clutter_rate = 0.0;
    double base_conf = 1.0;
    bool no_embeddings = false;
};

struct AblateArgs {
    std::string suite;
    std::string out_dir = ".";
    std::uint64_t seed = 7;
};

struct RenderArgs {
    std::string results;
    std::string gt;
    std::string out_dir = "render";
    int width = 0;
    int height = 0;
    std::int64_t frames = 0;
};

// Evenly spaced objects in horizontal lanes, velocities small enough to stay
// inside the arena for the whole scenario.
ScenarioSpec preset_scenario(const SynthArgs& args) {
    ScenarioSpec spec;
    spec.seed = args.seed;
    spec.n_frames = args.frames;
    spec.arena_w = 1920.0;
    spec.arena_h = 1080.0;
    spec.base_loc = args.base_conf;
    spec.base_cls = args.base_conf;
    spec.jitter_std = args.jitter;
    spec.miss_rate = args.miss_rate;
    spec.clutter_rate = args.clutter_rate;
    spec.with_embeddings = !args.no_embeddings;
    if (args.preset == "clean") {
        const int per_row = 5;
        for (int k = 0; k < args.objects; ++k) {
            const double x0 = 40.0 + 370.0 * (k % per_row);
            const double y0 = 60.0 + 210.0 * (k / per_row);
            const double travel_room = spec.arena_w - x0 - 80.0;
            const double vx = std::min(3.0, travel_room / std::max<double>(spec.n_frames, 1));
            spec.objects.push_back({{x0, y0, 64.0, 128.0}, vx, 0.0});
        }
        return spec;
    }
    throw ValidationError("unknown synth preset '" + args.preset +
                          "'; expected clean, crossing, fusion, mixed or quadrant");
}

int do_run(const RunArgs& args) {
    TrackerConfig config =
        args.config.empty() ? TrackerConfig{} : read_config_file(args.config);
    std::optional<fs::path> embeds;
    if (!args.embeds.empty()) embeds = fs::path(args.embeds);

    if (!args.quiet) {
        std::cout << "# cgtrack run\n# dets = " << args.dets << "\n";
        if (embeds) std::cout << "# embeds = " << args.embeds << "\n";
        std::cout << "# out = " << args.out << "\n# --- config ---\n";
        std::istringstream cfg(config_to_text(config));
        for (std::string line; std::getline(cfg, line);) std::cout << "# " << line << "\n";
        std::cout << "# ---------------\n";
    }
    const RunOutcome outcome = run_files(args.dets, embeds, config, args.out, args.legacy);
    if (!args.quiet) {
        std::cout << format_run_log(outcome.log);
        std::cout << "# wrote " << outcome.rows.size() << " rows to " << args.out << "\n";
    }
    return 0;
}

int do_eval(const EvalArgs& args) {
    EvalOptions options;
    options.iou_threshold = args.iou_threshold;
    options.min_visibility = args.min_visibility;
    const EvalReport report = eval_files(args.gt, args.results, options, args.name);
    std::cout << report_to_text(report, args.iou_threshold);
    if (!args.report.empty()) {
        write_report_file(args.report, report, args.iou_threshold);
    }
    return 0;
}

int do_synth(const SynthArgs& args) {
    Scenario scenario;
    if (args.preset == "quadrant") {
        scenario = quadrant_fixture().scenario;
    } else if (args.preset == "crossing") {
        scenario = generate(crossing_suite(args.seed).front());
    } else if (args.preset == "fusion") {
        scenario = generate(fusion_suite(args.seed).front());
    } else if (args.preset == "mixed") {
        scenario = generate(mixed_quadrant_suite(args.seed).front());
    } else {
        scenario = generate(preset_scenario(args));
    }
    fs::create_directories(args.out_dir);
    const fs::path dir(args.out_dir);
    write_detection_file(dir / "dets.txt", scenario.frames);
    write_gt_file(dir / "gt.txt", scenario.gt);
    bool has_embeddings = true;
    for (const FrameInput& f : scenario.frames) {
        for (const Detection& d : f.detections) {
            has_embeddings = has_embeddings && d.embedding.has_value();
        }
    }
    if (has_embeddings && !args.no_embeddings) {
        write_embedding_file(dir / "embeds.txt", scenario.frames);
        std::cout << "wrote " << (dir / "dets.txt").string() << ", "
                  << (dir / "embeds.txt").string() << ", " << (dir / "gt.txt").string() << "\n";
    } else {
        std::cout << "wrote " << (dir / "dets.txt").string() << ", "
                  << (dir / "gt.txt").string() << "\n";
    }
    return 0;
}

int do_ablate(const AblateArgs& args) {
    const AblateTable table = run_suite(args.suite, args.seed);
    const std::string text = format_table(table);
    fs::create_directories(args.out_dir);
    const fs::path out = fs::path(args.out_dir) / (args.suite + ".csv");
    std::ofstream file(out);
    if (!file) throw ValidationError("cannot write " + out.string());
    file << text;
    std::cout << text << "wrote " << out.string() << "\n";
    return 0;
}

int do_render(const RenderArgs& args) {
    const std::vector<ResultRow> rows = read_result_file(args.results);
    std::optional<GroundTruth> gt;
    if (!args.gt.empty()) gt = read_gt_file(args.gt);
    RenderOptions options;
    options.width = args.width;
    options.height = args.height;
    if (args.frames > 0) options.n_frames = args.frames;
    render_results(rows, gt, args.out_dir, options);
    std::cout << "rendered frames into " << args.out_dir << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    std::setlocale(LC_NUMERIC, "C");

    CLI::App app{"Detector-agnostic multi-object tracker with a confidence-guided "
                 "four-level association cascade"};
    app.require_subcommand(1);

    RunArgs run_args;
    CLI::App* run = app.add_subcommand("run", "Track a recorded detection stream");
    run->add_option("--dets", run_args.dets, "Detection file")->required();
    run->add_option("--embeds", run_args.embeds, "Embedding sidecar file");
    run->add_option("--config", run_args.config, "Configuration file");
    run->add_option("--out", run_args.out, "Result file to write");
    run->add_flag("--legacy", run_args.legacy,
                  "Detections use the single-confidence MOT det layout");
    run->add_flag("--quiet", run_args.quiet, "Suppress the per-frame association log");

    EvalArgs eval_args;
    CLI::App* eval = app.add_subcommand("eval", "Score a result file against ground truth");
    eval->add_option("--gt", eval_args.gt, "Ground-truth file")->required();
    eval->add_option("--results", eval_args.results, "Result file")->required();
    eval->add_option("--report", eval_args.report, "Machine-readable report file to write");
    eval->add_option("--name", eval_args.name, "Sequence name used in the report");
    eval->add_option("--iou-threshold", eval_args.iou_threshold, "Match threshold");
    eval->add_option("--min-visibility", eval_args.min_visibility,
                     "Exclude ground truth below this visibility");

    SynthArgs synth_args;
    CLI::App* synth = app.add_subcommand("synth", "Generate a synthetic scenario");
    synth->add_option("--preset", synth_args.preset,
                      "clean, crossing, fusion, mixed or quadrant");
    synth->add_option("--out-dir", synth_args.out_dir, "Output directory");
    synth->add_option("--seed", synth_args.seed, "Scenario seed");
    synth->add_option("--frames", synth_args.frames, "Frame count (clean preset)");
    synth->add_option("--objects", synth_args.objects, "Object count (clean preset)");
    synth->add_option("--jitter", synth_args.jitter, "Box jitter magnitude, pixels");
    synth->add_option("--miss-rate", synth_args.miss_rate, "Detection drop probability");
    synth->add_option("--clutter-rate", synth_args.clutter_rate, "Clutter boxes per frame");
    synth->add_option("--base-conf", synth_args.base_conf, "Confidence ceiling");
    synth->add_flag("--no-embeddings", synth_args.no_embeddings, "Skip the embedding sidecar");

    AblateArgs ablate_args;
    CLI::App* ablate = app.add_subcommand("ablate", "Run an ablation suite");
    ablate->add_option("--suite", ablate_args.suite, "cost-matrix, fusion or levels")->required();
    ablate->add_option("--out-dir", ablate_args.out_dir, "Output directory");
    ablate->add_option("--seed", ablate_args.seed, "Suite seed");

    RenderArgs render_args;
    CLI::App* render = app.add_subcommand("render", "Draw per-frame track overlays");
    render->add_option("--results", render_args.results, "Result file")->required();
    render->add_option("--gt", render_args.gt, "Ground-truth overlay file");
    render->add_option("--out-dir", render_args.out_dir, "Output directory");
    render->add_option("--width", render_args.width, "Image width")->required();
    render->add_option("--height", render_args.height, "Image height")->required();
    render->add_option("--frames", render_args.frames, "Frame count override");

    try {
        app.parse(argc, argv);
        if (run->parsed()) return do_run(run_args);
        if (eval->parsed()) return do_eval(eval_args);
        if (synth->parsed()) return do_synth(synth_args);
        if (ablate->parsed()) return do_ablate(ablate_args);
        if (render->parsed()) return do_render(render_args);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return 1;
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
