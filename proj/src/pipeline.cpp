#include "gmphd/pipeline.hpp"

#include "gmphd/errors.hpp"
#include "gmphd/image.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <numeric>
#include <ostream>
#include <sstream>

namespace gmphd {

namespace {

template <class Body>
int guarded(std::ostream& err, Body&& body) {
    std::string stage = "startup";
    try {
        body(stage);
        return exit_ok;
    } catch (const NumericalError& e) {
        err << "error [" << stage << "]: " << e.what() << "\n";
        return exit_numerical;
    } catch (const std::exception& e) {
        err << "error [" << stage << "]: " << e.what() << "\n";
        return exit_input;
    }
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write " + path.string());
    out << text;
    if (!out) throw InputError("failed writing " + path.string());
}

} // namespace

TrackerConfig resolve_config(const std::filesystem::path& config_path,
                             std::span<const std::pair<std::string, std::string>> overrides,
                             std::optional<std::uint64_t> seed) {
    TrackerConfig cfg = read_config_or_default(config_path);
    for (const auto& [key, value] : overrides) set_config_value(cfg, key, value);
    if (seed) cfg.rng_seed = *seed;
    validate(cfg);
    return cfg;
}

EvalReport run_scenario(const synth::Generated& g, const TrackerConfig& cfg, std::vector<FrameLog>* log) {
    const auto results = run_sequence(g.detections, g.seqinfo, cfg, log);
    return evaluate(g.gt, results);
}

std::vector<AblationRow> run_ablation(const synth::Generated& g, const TrackerConfig& base,
                                      std::span<const int> tp_values) {
    std::vector<AblationRow> rows;
    auto add = [&](std::string label, bool appearance, int t_ts) {
        TrackerConfig cfg = base;
        cfg.use_appearance = appearance;
        cfg.use_reid = appearance;
        cfg.t_ts = t_ts;
        rows.push_back({std::move(label), appearance, appearance, t_ts, run_scenario(g, cfg)});
    };
    add("motion_only", false, 0);
    add("appearance_reid", true, 0);
    add("appearance_reid_addon", true, 3);
    for (int tp : tp_values) add("sweep_tp_" + std::to_string(tp), true, tp);
    return rows;
}

std::string ablation_csv(std::span<const AblationRow> rows) {
    std::ostringstream os;
    os << "row,appearance,reid,t_ts,mota,idf1,idsw,frag,fp,fn,mt,ml\n";
    for (const auto& r : rows) {
        os << r.label << "," << r.appearance << "," << r.reid << "," << r.t_ts << ","
           << format_number(r.report.mota) << "," << format_number(r.report.idf1) << "," << r.report.idsw << ","
           << r.report.frag << "," << r.report.fp << "," << r.report.fn << "," << format_number(r.report.mt) << ","
           << format_number(r.report.ml) << "\n";
    }
    return os.str();
}

std::string format_run_log(std::span<const FrameLog> log, double feature_ms) {
    std::ostringstream os;
    os << "frame,detections,components,estimates,live_tracks,mass,millis\n";
    double total = 0.0;
    for (const auto& l : log) {
        os << l.frame << "," << l.detections << "," << l.components << "," << l.estimates << "," << l.live_tracks
           << "," << std::setprecision(6) << l.mass << "," << std::setprecision(4) << l.millis << "\n";
        total += l.millis;
    }
    const double frames = static_cast<double>(log.size());
    const double fps = total > 0.0 ? 1000.0 * frames / total : 0.0;
    const double overall = total + feature_ms > 0.0 ? 1000.0 * frames / (total + feature_ms) : 0.0;
    os << "# frames=" << log.size() << " tracking_ms=" << std::setprecision(6) << total << " feature_ms=" << feature_ms
       << " tracking_fps=" << fps << " overall_fps=" << overall << "\n";
    return os.str();
}

int cmd_track(const TrackOptions& opt, std::ostream& out, std::ostream& err) {
    return guarded(err, [&](std::string& stage) {
        stage = "config";
        const TrackerConfig cfg = resolve_config(opt.config_path, opt.overrides, opt.seed);
        stage = "seqinfo";
        const SeqInfo info = read_seqinfo(opt.seqinfo_path);
        stage = "detections";
        DetectionFrameSet dets = read_detections(opt.det_path, info.length);
        stage = "features";
        const auto provider = make_provider(parse_provider_kind(opt.provider), opt.feature_path);
        std::function<Image(int)> loader;
        if (provider->kind() == ProviderKind::histogram) {
            if (opt.frames_dir.empty()) throw InputError("histogram provider needs --frames-dir");
            loader = [&](int k) {
                char name[32];
                std::snprintf(name, sizeof(name), "%06d.ppm", k);
                return read_ppm(opt.frames_dir / name);
            };
        }
        const auto f0 = std::chrono::steady_clock::now();
        attach_features(dets, *provider, loader);
        const double feature_ms =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - f0).count();
        stage = "tracking";
        std::vector<FrameLog> log;
        const auto results = run_sequence(dets, info, cfg, &log);
        stage = "results";
        write_results(opt.out_path, results);
        stage = "log";
        const auto log_path = opt.log_path.empty() ? std::filesystem::path(opt.out_path.string() + ".log") : opt.log_path;
        const std::string text = format_run_log(log, feature_ms);
        write_text(log_path, text);
        out << "tracked " << results.size() << " frames; " << text.substr(text.rfind('#') + 2);
    });
}

int cmd_synth(const SynthOptions& opt, std::ostream& out, std::ostream& err) {
    return guarded(err, [&](std::string& stage) {
        stage = "scenario";
        synth::Scenario s = synth::read_scenario(opt.scenario_path);
        if (opt.seed) s.seed = *opt.seed;
        stage = "generate";
        const auto g = synth::generate(s);
        stage = "write";
        synth::write_scenario(opt.out_dir, s, g, opt.render_frames);
        out << "wrote " << s.frames << " frames, " << g.detections.total() << " detections to "
            << opt.out_dir.string() << "\n";
    });
}

int cmd_eval(const EvalOptions& opt, std::ostream& out, std::ostream& err) {
    return guarded(err, [&](std::string& stage) {
        stage = "ground truth";
        const GroundTruth gt = read_ground_truth(opt.gt_path);
        stage = "results";
        const auto results = read_results(opt.results_path, gt.frame_count());
        stage = "evaluate";
        const EvalReport rep = evaluate(gt, results);
        stage = "report";
        write_text(opt.out_report, report_csv(rep));
        auto frames_path = opt.per_frame_csv;
        if (frames_path.empty()) {
            frames_path = opt.out_report.parent_path() / (opt.out_report.stem().string() + "_frames.csv");
        }
        write_text(frames_path, per_frame_csv(rep));
        out << report_table(rep);
    });
}

int cmd_ablate(const AblateOptions& opt, std::ostream& out, std::ostream& err) {
    return guarded(err, [&](std::string& stage) {
        stage = "config";
        const TrackerConfig cfg = resolve_config(opt.config_path, opt.overrides, opt.seed);
        for (int tp : opt.tp_values) {
            if (tp < 0) throw InputError("T_p values must be >= 0, got " + std::to_string(tp));
        }
        stage = "scenario";
        synth::Scenario s = synth::read_scenario(opt.scenario_path);
        if (opt.seed) s.seed = *opt.seed;
        stage = "generate";
        const auto g = synth::generate(s);
        stage = "tracking";
        const auto rows = run_ablation(g, cfg, opt.tp_values);
        stage = "report";
        const std::string csv = ablation_csv(rows);
        write_text(opt.out_csv, csv);
        out << csv;
    });
}

} // namespace gmphd
