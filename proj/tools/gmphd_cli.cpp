#include "gmphd/pipeline.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <map>

namespace {

using Overrides = std::map<std::string, std::string>;

/// One `--<key>` flag per tracker config key.
void add_config_flags(CLI::App* cmd, Overrides& values) {
    for (const auto& key : gmphd::config_keys()) {
        cmd->add_option_function<std::string>(
               "--" + key, [&values, key](const std::string& v) { values[key] = v; },
               "override config key '" + key + "'")
            ->group("Tracker parameters");
    }
}

std::vector<std::pair<std::string, std::string>> ordered(const Overrides& values) {
    std::vector<std::pair<std::string, std::string>> out;
    for (const auto& key : gmphd::config_keys()) {
        if (auto it = values.find(key); it != values.end()) out.emplace_back(key, it->second);
    }
    return out;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"GM-PHD multi-object tracker with appearance re-identification"};
    app.require_subcommand(1);

    gmphd::TrackOptions track;
    Overrides track_flags;
    std::uint64_t track_seed = 0;
    auto* t = app.add_subcommand("track", "track detections and write MOT-format results");
    t->add_option("--det", track.det_path, "detections file (det.txt)")->required();
    t->add_option("--seqinfo", track.seqinfo_path, "sequence descriptor (seqinfo.ini)")->required();
    t->add_option("--config", track.config_path, "key = value config file");
    t->add_option("--provider", track.provider, "appearance provider: null|histogram|file")
        ->check(CLI::IsMember({"null", "histogram", "file"}));
    t->add_option("--features", track.feature_path, "feature file for --provider file");
    t->add_option("--frames-dir", track.frames_dir, "directory of NNNNNN.ppm frames for --provider histogram");
    t->add_option("--out", track.out_path, "results file")->required();
    t->add_option("--log", track.log_path, "run log (default: <out>.log)");
    auto* track_seed_opt = t->add_option("--seed", track_seed, "seed for all randomness");
    add_config_flags(t, track_flags);

    gmphd::SynthOptions synth;
    std::uint64_t synth_seed = 0;
    auto* s = app.add_subcommand("synth", "generate a synthetic scenario");
    s->add_option("--scenario", synth.scenario_path, "scenario JSON")->required();
    s->add_option("--out-dir", synth.out_dir, "output directory")->required();
    s->add_flag("--render-frames", synth.render_frames, "also write frames/NNNNNN.ppm");
    auto* synth_seed_opt = s->add_option("--seed", synth_seed, "override the scenario seed");

    gmphd::EvalOptions eval;
    auto* e = app.add_subcommand("eval", "score results against ground truth");
    e->add_option("--gt", eval.gt_path, "ground truth (gt.txt)")->required();
    e->add_option("--results", eval.results_path, "tracker results")->required();
    e->add_option("--out", eval.out_report, "summary CSV")->required();
    e->add_option("--per-frame", eval.per_frame_csv, "per-frame MOTA CSV (default: <out stem>_frames.csv)");

    gmphd::AblateOptions ablate;
    Overrides ablate_flags;
    std::uint64_t ablate_seed = 0;
    ablate.tp_values = {0, 2, 3, 4, 5, 7, 10};
    auto* a = app.add_subcommand("ablate", "component toggles and T_ts sweep on a synthetic scenario");
    a->add_option("--scenario", ablate.scenario_path, "scenario JSON")->required();
    a->add_option("--config", ablate.config_path, "key = value config file");
    a->add_option("--tp", ablate.tp_values, "T_ts values to sweep")->delimiter(',');
    a->add_option("--out", ablate.out_csv, "ablation CSV")->required();
    auto* ablate_seed_opt = a->add_option("--seed", ablate_seed, "seed for all randomness");
    add_config_flags(a, ablate_flags);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& err) {
        return app.exit(err);
    } catch (const CLI::CallForAllHelp& err) {
        return app.exit(err);
    } catch (const CLI::ParseError& err) {
        app.exit(err);
        return gmphd::exit_input;
    }

    if (t->parsed()) {
        track.overrides = ordered(track_flags);
        if (*track_seed_opt) track.seed = track_seed;
        return gmphd::cmd_track(track, std::cout, std::cerr);
    }
    if (s->parsed()) {
        if (*synth_seed_opt) synth.seed = synth_seed;
        return gmphd::cmd_synth(synth, std::cout, std::cerr);
    }
    if (e->parsed()) return gmphd::cmd_eval(eval, std::cout, std::cerr);
    ablate.overrides = ordered(ablate_flags);
    if (*ablate_seed_opt) ablate.seed = ablate_seed;
    return gmphd::cmd_ablate(ablate, std::cout, std::cerr);
}
