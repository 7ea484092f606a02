#include "gmphd/io.hpp"

#include "gmphd/association.hpp"
#include "gmphd/errors.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

namespace gmphd {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, ',')) out.push_back(trim(field));
    return out;
}

bool to_double(const std::string& s, double& v) {
    const char* b = s.data();
    const char* e = b + s.size();
    auto [p, ec] = std::from_chars(b, e, v);
    return ec == std::errc() && p == e && std::isfinite(v);
}

bool to_int(const std::string& s, int& v) {
    // MOT files sometimes write integers as "1.0"; accept integral decimals.
    double d = 0.0;
    if (!to_double(s, d) || d != std::floor(d) || std::abs(d) > 2e9) return false;
    v = static_cast<int>(d);
    return true;
}

[[noreturn]] void line_error(const std::string& source, int lineno, const std::string& why) {
    throw InputError(source + ":" + std::to_string(lineno) + ": " + why);
}

std::ifstream open_in(const std::filesystem::path& path, const char* what) {
    std::ifstream in(path);
    if (!in) throw InputError(std::string("cannot open ") + what + " " + path.string());
    return in;
}

std::ofstream open_out(const std::filesystem::path& path, const char* what) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError(std::string("cannot write ") + what + " " + path.string());
    return out;
}

std::string box_fields(const Box& b) {
    const TopLeftBox t = b.to_top_left();
    return format_number(t.left) + "," + format_number(t.top) + "," + format_number(t.width) + "," +
           format_number(t.height);
}

} // namespace

std::string format_number(double v) {
    if (v == 0.0) return "0";
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::size_t DetectionFrameSet::total() const {
    return std::accumulate(frames.begin(), frames.end(), std::size_t{0},
                           [](std::size_t acc, const auto& f) { return acc + f.size(); });
}

DetectionFrameSet parse_detections(std::istream& in, const std::string& source, int min_frames) {
    struct Row {
        int frame;
        Detection det;
    };
    std::vector<Row> rows;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        const auto f = split_csv(t);
        if (f.size() < 7) line_error(source, lineno, "expected at least 7 comma-separated fields");
        int frame = 0;
        TopLeftBox tl;
        double score = 0.0;
        if (!to_int(f[0], frame) || frame < 1) line_error(source, lineno, "bad frame number '" + f[0] + "'");
        if (!to_double(f[2], tl.left) || !to_double(f[3], tl.top) || !to_double(f[4], tl.width) ||
            !to_double(f[5], tl.height)) {
            line_error(source, lineno, "bad box coordinates");
        }
        if (!to_double(f[6], score)) line_error(source, lineno, "bad confidence '" + f[6] + "'");
        if (tl.width <= 0.0 || tl.height <= 0.0) line_error(source, lineno, "nonpositive box size");
        rows.push_back({frame, Detection{Box::from_top_left(tl), score, std::nullopt}});
    }
    if (rows.empty()) throw InputError(source + ": no detections");

    const auto [lo, hi] = std::minmax_element(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
        return a.det.score < b.det.score;
    });
    const double smin = lo->det.score;
    const double smax = hi->det.score;
    if (smin < 0.0 || smax > 1.0) {
        for (auto& r : rows) {
            r.det.score = smax > smin ? (r.det.score - smin) / (smax - smin) : 1.0;
        }
    }

    int last = min_frames;
    for (const auto& r : rows) last = std::max(last, r.frame);
    DetectionFrameSet out;
    out.frames.resize(static_cast<std::size_t>(last));
    for (auto& r : rows) {
        r.det.score = std::clamp(r.det.score, 0.0, 1.0);
        out.at(r.frame).push_back(std::move(r.det));
    }
    return out;
}

DetectionFrameSet read_detections(const std::filesystem::path& path, int min_frames) {
    auto in = open_in(path, "detection file");
    return parse_detections(in, path.string(), min_frames);
}

void write_detections(const std::filesystem::path& path, const DetectionFrameSet& dets) {
    auto out = open_out(path, "detection file");
    for (int k = 1; k <= dets.frame_count(); ++k) {
        for (const auto& d : dets.at(k)) {
            out << k << ",-1," << box_fields(d.box) << "," << format_number(d.score) << ",-1,-1,-1\n";
        }
    }
}

GroundTruth parse_ground_truth(std::istream& in, const std::string& source, int min_frames) {
    std::vector<std::pair<int, GtEntry>> rows;
    std::set<std::pair<int, int>> seen;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        const auto f = split_csv(t);
        if (f.size() < 6) line_error(source, lineno, "expected at least 6 comma-separated fields");
        int frame = 0;
        GtEntry e;
        TopLeftBox tl;
        if (!to_int(f[0], frame) || frame < 1) line_error(source, lineno, "bad frame number");
        if (!to_int(f[1], e.id)) line_error(source, lineno, "bad track id");
        if (!to_double(f[2], tl.left) || !to_double(f[3], tl.top) || !to_double(f[4], tl.width) ||
            !to_double(f[5], tl.height) || tl.width <= 0.0 || tl.height <= 0.0) {
            line_error(source, lineno, "bad box");
        }
        e.box = Box::from_top_left(tl);
        if (f.size() > 6) {
            int considered = 1;
            if (!to_int(f[6], considered)) line_error(source, lineno, "bad considered flag");
            e.considered = considered != 0;
        }
        if (f.size() > 8 && !to_double(f[8], e.visibility)) line_error(source, lineno, "bad visibility");
        if (!seen.insert({frame, e.id}).second) {
            line_error(source, lineno, "duplicate (frame, id) = (" + std::to_string(frame) + ", " +
                                           std::to_string(e.id) + ")");
        }
        rows.emplace_back(frame, e);
    }
    int last = min_frames;
    for (const auto& r : rows) last = std::max(last, r.first);
    GroundTruth gt;
    gt.frames.resize(static_cast<std::size_t>(last));
    for (auto& [frame, e] : rows) gt.frames[static_cast<std::size_t>(frame - 1)].push_back(e);
    for (auto& frame : gt.frames) {
        std::sort(frame.begin(), frame.end(), [](const GtEntry& a, const GtEntry& b) { return a.id < b.id; });
    }
    return gt;
}

GroundTruth read_ground_truth(const std::filesystem::path& path, int min_frames) {
    auto in = open_in(path, "ground-truth file");
    return parse_ground_truth(in, path.string(), min_frames);
}

void write_ground_truth(const std::filesystem::path& path, const GroundTruth& gt) {
    auto out = open_out(path, "ground-truth file");
    for (int k = 1; k <= gt.frame_count(); ++k) {
        auto entries = gt.frames[static_cast<std::size_t>(k - 1)];
        std::sort(entries.begin(), entries.end(), [](const GtEntry& a, const GtEntry& b) { return a.id < b.id; });
        for (const auto& e : entries) {
            out << k << "," << e.id << "," << box_fields(e.box) << "," << (e.considered ? 1 : 0) << ",1,"
                << format_number(e.visibility) << "\n";
        }
    }
}

std::vector<Detection> nms(std::span<const Detection> detections, double iou_threshold) {
    if (!(iou_threshold > 0.0) || iou_threshold > 1.0) {
        throw InputError("NMS threshold must be in (0, 1]");
    }
    std::vector<std::size_t> order(detections.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return detections[a].score > detections[b].score;
    });
    std::vector<Detection> kept;
    for (std::size_t i : order) {
        const bool suppressed = std::any_of(kept.begin(), kept.end(), [&](const Detection& k) {
            return iou(k.box, detections[i].box) >= iou_threshold;
        });
        if (!suppressed) kept.push_back(detections[i]);
    }
    return kept;
}

std::string format_results(std::span<const FrameResult> results) {
    std::vector<const FrameResult*> frames;
    for (const auto& r : results) frames.push_back(&r);
    std::stable_sort(frames.begin(), frames.end(), [](auto* a, auto* b) { return a->frame < b->frame; });
    std::ostringstream os;
    for (const FrameResult* fr : frames) {
        std::vector<TrackOutput> tracks = fr->tracks;
        std::stable_sort(tracks.begin(), tracks.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
        for (const auto& t : tracks) {
            os << fr->frame << "," << t.id << "," << box_fields(t.box) << "," << format_number(t.confidence)
               << ",-1,-1,-1\n";
        }
    }
    return os.str();
}

void write_results(const std::filesystem::path& path, std::span<const FrameResult> results) {
    auto out = open_out(path, "results file");
    out << format_results(results);
}

std::vector<FrameResult> parse_results(std::istream& in, const std::string& source, int min_frames) {
    std::map<int, FrameResult> by_frame;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        const auto f = split_csv(t);
        if (f.size() < 6) line_error(source, lineno, "expected at least 6 comma-separated fields");
        int frame = 0;
        TrackOutput o;
        TopLeftBox tl;
        if (!to_int(f[0], frame) || frame < 1) line_error(source, lineno, "bad frame number");
        if (!to_int(f[1], o.id)) line_error(source, lineno, "bad track id");
        if (!to_double(f[2], tl.left) || !to_double(f[3], tl.top) || !to_double(f[4], tl.width) ||
            !to_double(f[5], tl.height) || tl.width <= 0.0 || tl.height <= 0.0) {
            line_error(source, lineno, "bad box");
        }
        o.box = Box::from_top_left(tl);
        if (f.size() > 6 && !to_double(f[6], o.confidence)) line_error(source, lineno, "bad confidence");
        auto& fr = by_frame[frame];
        fr.frame = frame;
        fr.tracks.push_back(o);
    }
    int last = min_frames;
    if (!by_frame.empty()) last = std::max(last, by_frame.rbegin()->first);
    std::vector<FrameResult> out(static_cast<std::size_t>(last));
    for (int k = 1; k <= last; ++k) out[static_cast<std::size_t>(k - 1)].frame = k;
    for (auto& [k, fr] : by_frame) out[static_cast<std::size_t>(k - 1)] = std::move(fr);
    return out;
}

std::vector<FrameResult> read_results(const std::filesystem::path& path, int min_frames) {
    auto in = open_in(path, "results file");
    return parse_results(in, path.string(), min_frames);
}

TrackerConfig parse_config(std::istream& in, const std::string& source) {
    TrackerConfig cfg = default_config();
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        const std::string t = trim(hash == std::string::npos ? line : line.substr(0, hash));
        if (t.empty()) continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos) line_error(source, lineno, "expected 'key = value'");
        const std::string key = trim(t.substr(0, eq));
        const std::string value = trim(t.substr(eq + 1));
        try {
            set_config_value(cfg, key, value);
        } catch (const InputError& e) {
            line_error(source, lineno, e.what());
        }
    }
    return cfg;
}

TrackerConfig read_config(const std::filesystem::path& path) {
    auto in = open_in(path, "config file");
    return parse_config(in, path.string());
}

TrackerConfig read_config_or_default(const std::filesystem::path& path) {
    if (path.empty()) return default_config();
    return read_config(path);
}

void write_config(const std::filesystem::path& path, const TrackerConfig& cfg) {
    auto out = open_out(path, "config file");
    for (const auto& [k, v] : config_to_pairs(cfg)) out << k << " = " << v << "\n";
}

SeqInfo read_seqinfo(const std::filesystem::path& path) {
    auto in = open_in(path, "sequence info");
    SeqInfo info;
    bool have_w = false, have_h = false, have_len = false;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty() || t[0] == ';' || t[0] == '#' || t[0] == '[') continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos) line_error(path.string(), lineno, "expected key=value");
        const std::string key = trim(t.substr(0, eq));
        const std::string value = trim(t.substr(eq + 1));
        int iv = 0;
        if (key == "name") {
            info.name = value;
        } else if (key == "imWidth") {
            if (!to_int(value, iv) || iv <= 0) line_error(path.string(), lineno, "imWidth must be a positive integer");
            info.width = iv;
            have_w = true;
        } else if (key == "imHeight") {
            if (!to_int(value, iv) || iv <= 0) line_error(path.string(), lineno, "imHeight must be a positive integer");
            info.height = iv;
            have_h = true;
        } else if (key == "seqLength") {
            if (!to_int(value, iv) || iv <= 0) line_error(path.string(), lineno, "seqLength must be a positive integer");
            info.length = iv;
            have_len = true;
        }
    }
    if (!have_w || !have_h || !have_len) {
        throw InputError(path.string() + ": imWidth, imHeight and seqLength are required");
    }
    return info;
}

void write_seqinfo(const std::filesystem::path& path, const SeqInfo& info) {
    auto out = open_out(path, "sequence info");
    out << "[Sequence]\nname=" << info.name << "\nimWidth=" << format_number(info.width)
        << "\nimHeight=" << format_number(info.height) << "\nseqLength=" << info.length << "\n";
}

} // namespace gmphd
