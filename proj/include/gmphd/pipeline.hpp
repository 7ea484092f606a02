#pragma once

#include "gmphd/config.hpp"
#include "gmphd/metrics.hpp"
#include "gmphd/synth.hpp"
#include "gmphd/tracker.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace gmphd {

/// Process exit codes shared by every command.
enum ExitCode : int { exit_ok = 0, exit_input = 1, exit_numerical = 2 };

/// Config resolution: defaults, then the file (if any), then explicit
/// key/value overrides, then the seed. Validated before returning.
TrackerConfig resolve_config(const std::filesystem::path& config_path,
                             std::span<const std::pair<std::string, std::string>> overrides,
                             std::optional<std::uint64_t> seed);

/// Tracks a generated scenario (features taken from the generator) and scores
/// it against its ground truth.
EvalReport run_scenario(const synth::Generated& g, const TrackerConfig& cfg,
                        std::vector<FrameLog>* log = nullptr);

struct AblationRow {
    std::string label;
    bool appearance = false;
    bool reid = false;
    int t_ts = 0;
    EvalReport report;
};

/// Component toggles (motion only; +appearance/re-ID; +add-on prediction at
/// T_ts = 3) followed by one appearance-on row per entry of `tp_values`.
std::vector<AblationRow> run_ablation(const synth::Generated& g, const TrackerConfig& base,
                                      std::span<const int> tp_values);
std::string ablation_csv(std::span<const AblationRow> rows);

/// Per-frame run log with a throughput summary line; `feature_ms` is the time
/// spent computing appearance features for the whole sequence.
std::string format_run_log(std::span<const FrameLog> log, double feature_ms = 0.0);

struct TrackOptions {
    std::filesystem::path det_path;
    std::filesystem::path seqinfo_path;
    std::filesystem::path config_path;
    std::filesystem::path feature_path;
    std::filesystem::path frames_dir;   ///< NNNNNN.ppm images for the histogram provider
    std::string provider = "null";
    std::filesystem::path out_path;
    std::filesystem::path log_path;     ///< empty: `<out_path>.log`
    std::vector<std::pair<std::string, std::string>> overrides;
    std::optional<std::uint64_t> seed;
};

struct SynthOptions {
    std::filesystem::path scenario_path;
    std::filesystem::path out_dir;
    std::optional<std::uint64_t> seed;
    bool render_frames = false;
};

struct EvalOptions {
    std::filesystem::path gt_path;
    std::filesystem::path results_path;
    std::filesystem::path out_report;
    std::filesystem::path per_frame_csv; ///< empty: `<out_report stem>_frames.csv`
};

struct AblateOptions {
    std::filesystem::path scenario_path;
    std::filesystem::path config_path;
    std::vector<int> tp_values;
    std::filesystem::path out_csv;
    std::vector<std::pair<std::string, std::string>> overrides;
    std::optional<std::uint64_t> seed;
};

/// Each command reports the failing stage on `err` and returns an ExitCode.
int cmd_track(const TrackOptions& opt, std::ostream& out, std::ostream& err);
int cmd_synth(const SynthOptions& opt, std::ostream& out, std::ostream& err);
int cmd_eval(const EvalOptions& opt, std::ostream& out, std::ostream& err);
int cmd_ablate(const AblateOptions& opt, std::ostream& out, std::ostream& err);

} // namespace gmphd
