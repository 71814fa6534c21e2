#include <cgtrack/io.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <cgtrack/errors.hpp>
#include <cgtrack/format.hpp>

namespace cgtrack {

namespace {

std::ifstream open_input(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ValidationError("cannot open " + path.string());
    }
    return in;
}

std::ofstream open_output(const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) {
        throw ValidationError("cannot write " + path.string());
    }
    return out;
}

[[noreturn]] void line_error(const std::filesystem::path& path, std::size_t line_no,
                             const std::string& what) {
    throw ValidationError(path.string() + ":" + std::to_string(line_no) + ": " + what);
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) {
        fields.push_back(field);
    }
    if (!line.empty() && line.back() == ',') fields.push_back("");
    return fields;
}

double parse_real(const std::filesystem::path& path, std::size_t line_no,
                  const std::string& s, const char* what) {
    std::size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &pos);
    } catch (const std::exception&) {
        line_error(path, line_no, std::string("cannot parse ") + what + " from '" + s + "'");
    }
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    if (pos != s.size() || !std::isfinite(v)) {
        line_error(path, line_no, std::string("cannot parse ") + what + " from '" + s + "'");
    }
    return v;
}

std::int64_t parse_int(const std::filesystem::path& path, std::size_t line_no,
                       const std::string& s, const char* what) {
    std::size_t pos = 0;
    std::int64_t v = 0;
    try {
        v = std::stoll(s, &pos);
    } catch (const std::exception&) {
        line_error(path, line_no, std::string("cannot parse ") + what + " from '" + s + "'");
    }
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    if (pos != s.size()) {
        line_error(path, line_no, std::string("cannot parse ") + what + " from '" + s + "'");
    }
    return v;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

}  // namespace

DetectionFileContent read_detection_file(const std::filesystem::path& path, bool legacy) {
    std::ifstream in = open_input(path);
    DetectionFileContent out;
    std::string line;
    std::size_t line_no = 0;
    std::int64_t prev_frame = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string t = trim(line);
        if (t.empty()) continue;
        const std::vector<std::string> f = split_csv(t);
        Detection det;
        std::int64_t frame = 0;
        if (legacy) {
            if (f.size() < 7) {
                line_error(path, line_no, "expected at least 7 comma-separated fields");
            }
            frame = parse_int(path, line_no, f[0], "frame");
            det.box = {parse_real(path, line_no, f[2], "left"),
                       parse_real(path, line_no, f[3], "top"),
                       parse_real(path, line_no, f[4], "width"),
                       parse_real(path, line_no, f[5], "height")};
            const double conf = parse_real(path, line_no, f[6], "conf");
            if (conf < 0.0 || conf > 1.0) {
                line_error(path, line_no, "confidence outside [0, 1]");
            }
            det.cls_conf = det.loc_conf = std::sqrt(conf);
        } else {
            if (f.size() != 7) {
                line_error(path, line_no, "expected 7 comma-separated fields, got " +
                                              std::to_string(f.size()));
            }
            frame = parse_int(path, line_no, f[0], "frame");
            det.box = {parse_real(path, line_no, f[1], "left"),
                       parse_real(path, line_no, f[2], "top"),
                       parse_real(path, line_no, f[3], "width"),
                       parse_real(path, line_no, f[4], "height")};
            det.cls_conf = parse_real(path, line_no, f[5], "cls_conf");
            det.loc_conf = parse_real(path, line_no, f[6], "loc_conf");
        }
        if (frame < 1) line_error(path, line_no, "frame must be a positive integer");
        if (frame < prev_frame) line_error(path, line_no, "frames must be non-decreasing");
        if (det.cls_conf < 0.0 || det.cls_conf > 1.0 || det.loc_conf < 0.0 || det.loc_conf > 1.0) {
            line_error(path, line_no, "confidence outside [0, 1]");
        }
        if (det.box.width < 0.0 || det.box.height < 0.0 || !det.box.valid()) {
            line_error(path, line_no, "box has negative or non-finite extent");
        }
        prev_frame = frame;
        out.frames.push_back(frame);
        out.detections.push_back(std::move(det));
    }
    return out;
}

void write_detection_file(const std::filesystem::path& path,
                          const std::vector<FrameInput>& frames) {
    std::ofstream out = open_output(path);
    for (const FrameInput& fr : frames) {
        for (const Detection& d : fr.detections) {
            out << fr.frame_index << ',' << format_fixed(d.box.left) << ','
                << format_fixed(d.box.top) << ',' << format_fixed(d.box.width) << ','
                << format_fixed(d.box.height) << ',' << format_fixed(d.cls_conf) << ','
                << format_fixed(d.loc_conf) << '\n';
        }
    }
}

std::vector<std::vector<double>> read_embedding_file(const std::filesystem::path& path) {
    std::ifstream in = open_input(path);
    std::vector<std::vector<double>> out;
    std::string line;
    std::size_t line_no = 0;
    std::size_t dim = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string t = trim(line);
        if (t.empty()) continue;
        const std::vector<std::string> f = split_csv(t);
        std::vector<double> v(f.size());
        double norm_sq = 0.0;
        for (std::size_t i = 0; i < f.size(); ++i) {
            v[i] = parse_real(path, line_no, f[i], "embedding component");
            norm_sq += v[i] * v[i];
        }
        if (dim == 0) {
            dim = v.size();
        } else if (v.size() != dim) {
            line_error(path, line_no, "embedding dimension changed from " + std::to_string(dim) +
                                          " to " + std::to_string(v.size()));
        }
        if (norm_sq < 1e-12) {
            line_error(path, line_no, "zero embedding vector");
        }
        const double norm = std::sqrt(norm_sq);
        if (std::abs(norm - 1.0) > 1e-6) {
            for (double& x : v) x /= norm;
        }
        out.push_back(std::move(v));
    }
    return out;
}

void write_embedding_file(const std::filesystem::path& path,
                          const std::vector<FrameInput>& frames) {
    std::ofstream out = open_output(path);
    for (const FrameInput& fr : frames) {
        for (const Detection& d : fr.detections) {
            if (!d.embedding.has_value()) {
                throw ValidationError("write_embedding_file: a detection has no embedding");
            }
            const std::vector<double>& v = *d.embedding;
            for (std::size_t i = 0; i < v.size(); ++i) {
                if (i) out << ',';
                out << format_fixed(v[i], 9);
            }
            out << '\n';
        }
    }
}

void attach_embeddings(DetectionFileContent& content,
                       std::vector<std::vector<double>> embeddings) {
    if (embeddings.size() != content.detections.size()) {
        throw ValidationError("embedding file has " + std::to_string(embeddings.size()) +
                              " lines but the detection file has " +
                              std::to_string(content.detections.size()));
    }
    for (std::size_t i = 0; i < embeddings.size(); ++i) {
        content.detections[i].embedding = std::move(embeddings[i]);
    }
}

std::vector<FrameInput> group_into_frames(const DetectionFileContent& content) {
    std::vector<FrameInput> out;
    for (std::size_t i = 0; i < content.detections.size(); ++i) {
        if (out.empty() || out.back().frame_index != content.frames[i]) {
            out.push_back({content.frames[i], {}});
        }
        out.back().detections.push_back(content.detections[i]);
    }
    return out;
}

std::vector<ResultRow> read_result_file(const std::filesystem::path& path) {
    std::ifstream in = open_input(path);
    std::vector<ResultRow> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string t = trim(line);
        if (t.empty()) continue;
        const std::vector<std::string> f = split_csv(t);
        if (f.size() < 7) {
            line_error(path, line_no, "expected at least 7 comma-separated fields");
        }
        ResultRow row;
        row.frame = parse_int(path, line_no, f[0], "frame");
        row.id = parse_int(path, line_no, f[1], "id");
        row.box = {parse_real(path, line_no, f[2], "left"),
                   parse_real(path, line_no, f[3], "top"),
                   parse_real(path, line_no, f[4], "width"),
                   parse_real(path, line_no, f[5], "height")};
        row.conf = parse_real(path, line_no, f[6], "conf");
        if (row.frame < 1) line_error(path, line_no, "frame must be a positive integer");
        if (row.id < 1) line_error(path, line_no, "id must be a positive integer");
        out.push_back(row);
    }
    return out;
}

void write_result_file(const std::filesystem::path& path, const std::vector<ResultRow>& rows) {
    std::vector<ResultRow> sorted = rows;
    std::stable_sort(sorted.begin(), sorted.end(), [](const ResultRow& a, const ResultRow& b) {
        return a.frame != b.frame ? a.frame < b.frame : a.id < b.id;
    });
    std::ofstream out = open_output(path);
    for (const ResultRow& r : sorted) {
        out << r.frame << ',' << r.id << ',' << format_fixed(r.box.left) << ','
            << format_fixed(r.box.top) << ',' << format_fixed(r.box.width) << ','
            << format_fixed(r.box.height) << ',' << format_fixed(r.conf) << ",-1,-1,-1\n";
    }
}

TrackingResult rows_to_result(const std::vector<ResultRow>& rows) {
    TrackingResult out;
    for (const ResultRow& r : rows) {
        out[r.frame].push_back({r.id, r.box});
    }
    return out;
}

GroundTruth read_gt_file(const std::filesystem::path& path) {
    std::ifstream in = open_input(path);
    GroundTruth out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string t = trim(line);
        if (t.empty()) continue;
        const std::vector<std::string> f = split_csv(t);
        if (f.size() < 6) {
            line_error(path, line_no, "expected at least 6 comma-separated fields");
        }
        const std::int64_t frame = parse_int(path, line_no, f[0], "frame");
        const std::int64_t id = parse_int(path, line_no, f[1], "id");
        BBox box{parse_real(path, line_no, f[2], "left"), parse_real(path, line_no, f[3], "top"),
                 parse_real(path, line_no, f[4], "width"),
                 parse_real(path, line_no, f[5], "height")};
        const std::int64_t mark =
            f.size() > 6 ? parse_int(path, line_no, f[6], "mark") : 1;
        const double visibility =
            f.size() > 8 ? parse_real(path, line_no, f[8], "visibility") : 1.0;
        if (frame < 1) line_error(path, line_no, "frame must be a positive integer");
        if (mark == 0) continue;
        out[frame].push_back({id, box, visibility});
    }
    return out;
}

void write_gt_file(const std::filesystem::path& path, const GroundTruth& gt) {
    std::ofstream out = open_output(path);
    for (const auto& [frame, boxes] : gt) {
        for (const GtBox& b : boxes) {
            out << frame << ',' << b.id << ',' << format_fixed(b.box.left) << ','
                << format_fixed(b.box.top) << ',' << format_fixed(b.box.width) << ','
                << format_fixed(b.box.height) << ",1,1," << format_fixed(b.visibility) << '\n';
        }
    }
}

namespace {

const char* to_string(LevelCost c) {
    return c == LevelCost::Motion ? "c1" : "c3";
}

const char* to_string(ConfidenceSource s) {
    switch (s) {
        case ConfidenceSource::Localization: return "loc";
        case ConfidenceSource::Classification: return "cls";
        case ConfidenceSource::Combined: return "det";
    }
    return "loc";
}

bool parse_bool(const std::string& v, const std::string& key) {
    if (v == "on" || v == "true" || v == "1") return true;
    if (v == "off" || v == "false" || v == "0") return false;
    throw ValidationError("config: cannot parse boolean '" + v + "' for key " + key);
}

double parse_config_real(const std::string& v, const std::string& key) {
    std::size_t pos = 0;
    double d = 0.0;
    try {
        d = std::stod(v, &pos);
    } catch (const std::exception&) {
        throw ValidationError("config: cannot parse number '" + v + "' for key " + key);
    }
    if (pos != v.size() || !std::isfinite(d)) {
        throw ValidationError("config: cannot parse number '" + v + "' for key " + key);
    }
    return d;
}

int parse_config_int(const std::string& v, const std::string& key) {
    std::size_t pos = 0;
    int i = 0;
    try {
        i = std::stoi(v, &pos);
    } catch (const std::exception&) {
        throw ValidationError("config: cannot parse integer '" + v + "' for key " + key);
    }
    if (pos != v.size()) {
        throw ValidationError("config: cannot parse integer '" + v + "' for key " + key);
    }
    return i;
}

LevelCost parse_level_cost(const std::string& v, const std::string& key) {
    if (v == "c1") return LevelCost::Motion;
    if (v == "c3") return LevelCost::Appearance;
    throw ValidationError("config: expected c1 or c3 for key " + key);
}

}  // namespace

TrackerConfig read_config_file(const std::filesystem::path& path) {
    std::ifstream in = open_input(path);
    TrackerConfig cfg;
    std::string line;
    std::size_t line_no = 0;
    std::vector<std::string> seen;
    while (std::getline(in, line)) {
        ++line_no;
        std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos) {
            line_error(path, line_no, "expected 'key = value'");
        }
        const std::string key = trim(t.substr(0, eq));
        const std::string value = trim(t.substr(eq + 1));
        if (key.empty() || value.empty()) {
            line_error(path, line_no, "expected 'key = value'");
        }
        if (std::find(seen.begin(), seen.end(), key) != seen.end()) {
            line_error(path, line_no, "duplicate key " + key);
        }
        seen.push_back(key);

        if (key == "theta_loc") cfg.theta_loc = parse_config_real(value, key);
        else if (key == "theta_cls") cfg.theta_cls = parse_config_real(value, key);
        else if (key == "gate_level1") cfg.gates[0] = parse_config_real(value, key);
        else if (key == "gate_level2") cfg.gates[1] = parse_config_real(value, key);
        else if (key == "gate_level3") cfg.gates[2] = parse_config_real(value, key);
        else if (key == "gate_level4") cfg.gates[3] = parse_config_real(value, key);
        else if (key == "alpha") cfg.alpha = parse_config_real(value, key);
        else if (key == "s_low") cfg.s_low = parse_config_real(value, key);
        else if (key == "t_max_confirm") cfg.t_max_confirm = parse_config_int(value, key);
        else if (key == "l_max_lost") cfg.l_max_lost = parse_config_int(value, key);
        else if (key == "ema_momentum") cfg.ema_momentum = parse_config_real(value, key);
        else if (key == "appearance") cfg.appearance = parse_bool(value, key);
        else if (key == "strict_new_removal") cfg.strict_new_removal = parse_bool(value, key);
        else if (key == "c1_confidence") {
            if (value == "loc") cfg.c1_confidence = ConfidenceSource::Localization;
            else if (value == "cls") cfg.c1_confidence = ConfidenceSource::Classification;
            else if (value == "det") cfg.c1_confidence = ConfidenceSource::Combined;
            else line_error(path, line_no, "expected loc, cls or det for key " + key);
        } else if (key == "level2_cost") cfg.level2_cost = parse_level_cost(value, key);
        else if (key == "level3_cost") cfg.level3_cost = parse_level_cost(value, key);
        else if (key == "level1_enabled") cfg.level_enabled[0] = parse_bool(value, key);
        else if (key == "level2_enabled") cfg.level_enabled[1] = parse_bool(value, key);
        else if (key == "level3_enabled") cfg.level_enabled[2] = parse_bool(value, key);
        else if (key == "level4_enabled") cfg.level_enabled[3] = parse_bool(value, key);
        else if (key == "kf_std_pos") cfg.kalman.std_pos = parse_config_real(value, key);
        else if (key == "kf_std_vel") cfg.kalman.std_vel = parse_config_real(value, key);
        else if (key == "kf_init_pos_factor") cfg.kalman.init_pos_factor = parse_config_real(value, key);
        else if (key == "kf_init_vel_factor") cfg.kalman.init_vel_factor = parse_config_real(value, key);
        else line_error(path, line_no, "unknown key " + key);
    }
    cfg.validate();
    return cfg;
}

std::string config_to_text(const TrackerConfig& c) {
    std::ostringstream out;
    out << "theta_loc = " << format_fixed(c.theta_loc) << '\n';
    out << "theta_cls = " << format_fixed(c.theta_cls) << '\n';
    for (int i = 0; i < 4; ++i) {
        out << "gate_level" << (i + 1) << " = " << format_fixed(c.gates[i]) << '\n';
    }
    out << "alpha = " << format_fixed(c.alpha) << '\n';
    out << "s_low = " << format_fixed(c.s_low) << '\n';
    out << "t_max_confirm = " << c.t_max_confirm << '\n';
    out << "l_max_lost = " << c.l_max_lost << '\n';
    out << "ema_momentum = " << format_fixed(c.ema_momentum) << '\n';
    out << "appearance = " << (c.appearance ? "on" : "off") << '\n';
    out << "strict_new_removal = " << (c.strict_new_removal ? "on" : "off") << '\n';
    out << "c1_confidence = " << to_string(c.c1_confidence) << '\n';
    out << "level2_cost = " << to_string(c.level2_cost) << '\n';
    out << "level3_cost = " << to_string(c.level3_cost) << '\n';
    for (int i = 0; i < 4; ++i) {
        out << "level" << (i + 1) << "_enabled = " << (c.level_enabled[i] ? "on" : "off") << '\n';
    }
    out << "kf_std_pos = " << format_fixed(c.kalman.std_pos) << '\n';
    out << "kf_std_vel = " << format_fixed(c.kalman.std_vel) << '\n';
    out << "kf_init_pos_factor = " << format_fixed(c.kalman.init_pos_factor) << '\n';
    out << "kf_init_vel_factor = " << format_fixed(c.kalman.init_vel_factor) << '\n';
    return out.str();
}

namespace {

void append_stats(std::ostringstream& out, const std::string& prefix, const SequenceStats& s) {
    out << prefix << "gt_count = " << s.gt_count << '\n';
    out << prefix << "pred_count = " << s.pred_count << '\n';
    out << prefix << "fp = " << s.fp << '\n';
    out << prefix << "fn = " << s.fn << '\n';
    out << prefix << "idsw = " << s.idsw << '\n';
    out << prefix << "idtp = " << s.idtp << '\n';
    out << prefix << "mota_valid = " << (s.mota_valid ? "true" : "false") << '\n';
    out << prefix << "mota = " << format_fixed(s.mota) << '\n';
    out << prefix << "idf1 = " << format_fixed(s.idf1) << '\n';
}

}  // namespace

std::string report_to_text(const EvalReport& report, double iou_threshold) {
    std::ostringstream out;
    out << "iou_threshold = " << format_fixed(iou_threshold) << '\n';
    append_stats(out, "", report.total);
    out << "sequences = " << report.sequences.size() << '\n';
    for (std::size_t i = 0; i < report.sequences.size(); ++i) {
        const std::string prefix = "seq." + std::to_string(i) + ".";
        out << prefix << "name = " << report.sequences[i].first << '\n';
        append_stats(out, prefix, report.sequences[i].second);
    }
    return out.str();
}

void write_report_file(const std::filesystem::path& path, const EvalReport& report,
                       double iou_threshold) {
    std::ofstream out = open_output(path);
    out << report_to_text(report, iou_threshold);
}

}  // namespace cgtrack
