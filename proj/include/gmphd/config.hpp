#pragma once

#include <cstdint>
#include <utility>
#include <string>
#include <vector>

namespace gmphd {

enum class CapMode { deterministic, poisson };
enum class CostMode { euclidean, iou };

/// Tracker parameters.
struct TrackerConfig {
    double eta = 0.65;              ///< appearance weight in the fused association cost
    double s_t = 0.0;               ///< detection score threshold for birth
    double w_gamma = 0.1;           ///< birth weight
    double sigma_r = 6.0;           ///< measurement noise std, pixels
    double sigma_v = 5.0;           ///< process noise std, pixels/frame^2
    double p_d = 0.95;
    double p_s = 0.99;
    double lambda_t = 10.0;         ///< mean clutter count per frame
    double merge_u = 4.0;           ///< Mahalanobis merge threshold
    double prune_t = 1e-5;
    int t_ts = 3;                   ///< max consecutive add-on predictions before a track dies
    double c_ts = 0.4;              ///< association cost gate
    double v_s_ts = 0.6;            ///< re-identification similarity threshold
    double extract_threshold = 0.5;
    double delta = 1.0;             ///< sampling period, frames
    bool use_score_in_birth = false;
    CapMode cap_mode = CapMode::deterministic;
    std::uint64_t rng_seed = 0;

    bool use_appearance = true;     ///< augmented likelihood + visual association cost
    bool use_reid = true;
    CostMode cost_mode = CostMode::euclidean;
    double nms_threshold = 0.3;     ///< detection preprocessing; 0 disables
    double reid_verify_threshold = 0.75; ///< pair-verification threshold, not used by the tracker
    int dead_pool_limit = 0;        ///< 0 keeps every dead track for re-identification
};

TrackerConfig default_config();

/// Throws InputError naming the first out-of-range key.
void validate(const TrackerConfig& cfg);

/// Canonical key names accepted by config files and CLI flags.
const std::vector<std::string>& config_keys();

/// Sets one key from its textual value. Throws InputError on unknown key,
/// unparsable value or out-of-range value.
void set_config_value(TrackerConfig& cfg, const std::string& key, const std::string& value);

/// Key/value pairs in config_keys() order.
std::vector<std::pair<std::string, std::string>> config_to_pairs(const TrackerConfig& cfg);

} // namespace gmphd
