#include "gmphd/config.hpp"

#include "gmphd/errors.hpp"

#include <charconv>
#include <cmath>
#include <functional>
#include <sstream>

namespace gmphd {

namespace {

double parse_double(const std::string& key, const std::string& text) {
    double v = 0.0;
    const char* first = text.data();
    const char* last = first + text.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last || !std::isfinite(v)) {
        throw InputError("config key '" + key + "': expected a number, got '" + text + "'");
    }
    return v;
}

long long parse_int(const std::string& key, const std::string& text) {
    long long v = 0;
    const char* first = text.data();
    const char* last = first + text.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last) {
        throw InputError("config key '" + key + "': expected an integer, got '" + text + "'");
    }
    return v;
}

bool parse_bool(const std::string& key, const std::string& text) {
    if (text == "true" || text == "1" || text == "yes" || text == "on") return true;
    if (text == "false" || text == "0" || text == "no" || text == "off") return false;
    throw InputError("config key '" + key + "': expected a boolean, got '" + text + "'");
}

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

struct KeyDef {
    std::string name;
    std::function<void(TrackerConfig&, const std::string&)> set;
    std::function<std::string(const TrackerConfig&)> get;
};

template <typename Member>
KeyDef real_key(std::string name, Member member) {
    return {name,
            [name, member](TrackerConfig& c, const std::string& t) { c.*member = parse_double(name, t); },
            [member](const TrackerConfig& c) { return fmt(c.*member); }};
}

template <typename Member>
KeyDef bool_key(std::string name, Member member) {
    return {name,
            [name, member](TrackerConfig& c, const std::string& t) { c.*member = parse_bool(name, t); },
            [member](const TrackerConfig& c) { return std::string(c.*member ? "true" : "false"); }};
}

const std::vector<KeyDef>& key_defs() {
    static const std::vector<KeyDef> defs = {
        real_key("eta", &TrackerConfig::eta),
        real_key("s_t", &TrackerConfig::s_t),
        real_key("w_gamma", &TrackerConfig::w_gamma),
        real_key("sigma_r", &TrackerConfig::sigma_r),
        real_key("sigma_v", &TrackerConfig::sigma_v),
        real_key("p_d", &TrackerConfig::p_d),
        real_key("p_s", &TrackerConfig::p_s),
        real_key("lambda_t", &TrackerConfig::lambda_t),
        real_key("U", &TrackerConfig::merge_u),
        real_key("T", &TrackerConfig::prune_t),
        {"T_ts",
         [](TrackerConfig& c, const std::string& t) {
             const auto v = parse_int("T_ts", t);
             if (v < 0 || v > 1000000) throw InputError("config key 'T_ts': out of range");
             c.t_ts = static_cast<int>(v);
         },
         [](const TrackerConfig& c) { return std::to_string(c.t_ts); }},
        real_key("C_ts", &TrackerConfig::c_ts),
        real_key("V_s_ts", &TrackerConfig::v_s_ts),
        real_key("extract_threshold", &TrackerConfig::extract_threshold),
        real_key("delta", &TrackerConfig::delta),
        bool_key("use_score_in_birth", &TrackerConfig::use_score_in_birth),
        {"cap_mode",
         [](TrackerConfig& c, const std::string& t) {
             if (t == "deterministic") c.cap_mode = CapMode::deterministic;
             else if (t == "poisson") c.cap_mode = CapMode::poisson;
             else throw InputError("config key 'cap_mode': expected deterministic|poisson, got '" + t + "'");
         },
         [](const TrackerConfig& c) {
             return std::string(c.cap_mode == CapMode::poisson ? "poisson" : "deterministic");
         }},
        {"rng_seed",
         [](TrackerConfig& c, const std::string& t) {
             const auto v = parse_int("rng_seed", t);
             if (v < 0) throw InputError("config key 'rng_seed': must be nonnegative");
             c.rng_seed = static_cast<std::uint64_t>(v);
         },
         [](const TrackerConfig& c) { return std::to_string(c.rng_seed); }},
        bool_key("use_appearance", &TrackerConfig::use_appearance),
        bool_key("use_reid", &TrackerConfig::use_reid),
        {"cost_mode",
         [](TrackerConfig& c, const std::string& t) {
             if (t == "euclidean") c.cost_mode = CostMode::euclidean;
             else if (t == "iou") c.cost_mode = CostMode::iou;
             else throw InputError("config key 'cost_mode': expected euclidean|iou, got '" + t + "'");
         },
         [](const TrackerConfig& c) {
             return std::string(c.cost_mode == CostMode::iou ? "iou" : "euclidean");
         }},
        real_key("nms_threshold", &TrackerConfig::nms_threshold),
        real_key("reid_verify_threshold", &TrackerConfig::reid_verify_threshold),
        {"dead_pool_limit",
         [](TrackerConfig& c, const std::string& t) {
             const auto v = parse_int("dead_pool_limit", t);
             if (v < 0 || v > 100000000) throw InputError("config key 'dead_pool_limit': out of range");
             c.dead_pool_limit = static_cast<int>(v);
         },
         [](const TrackerConfig& c) { return std::to_string(c.dead_pool_limit); }},
    };
    return defs;
}

void require(bool ok, const char* key, const char* range) {
    if (!ok) {
        throw InputError(std::string("config key '") + key + "' out of range: expected " + range);
    }
}

} // namespace

TrackerConfig default_config() { return TrackerConfig{}; }

void validate(const TrackerConfig& c) {
    require(c.eta >= 0.0 && c.eta <= 1.0, "eta", "[0, 1]");
    require(c.s_t >= 0.0 && c.s_t <= 1.0, "s_t", "[0, 1]");
    require(c.w_gamma > 0.0, "w_gamma", "> 0");
    require(c.sigma_r > 0.0, "sigma_r", "> 0");
    require(c.sigma_v > 0.0, "sigma_v", "> 0");
    require(c.p_d > 0.0 && c.p_d <= 1.0, "p_d", "(0, 1]");
    require(c.p_s > 0.0 && c.p_s <= 1.0, "p_s", "(0, 1]");
    require(c.lambda_t >= 0.0, "lambda_t", ">= 0");
    require(c.merge_u >= 0.0, "U", ">= 0");
    require(c.prune_t >= 0.0 && c.prune_t < 1.0, "T", "[0, 1)");
    require(c.t_ts >= 0, "T_ts", ">= 0");
    require(c.c_ts > 0.0, "C_ts", "> 0");
    require(c.v_s_ts >= -1.0 && c.v_s_ts <= 1.0, "V_s_ts", "[-1, 1]");
    require(c.extract_threshold >= 0.0, "extract_threshold", ">= 0");
    require(c.delta > 0.0, "delta", "> 0");
    require(c.nms_threshold >= 0.0 && c.nms_threshold <= 1.0, "nms_threshold", "[0, 1]");
    require(c.reid_verify_threshold >= -1.0 && c.reid_verify_threshold <= 1.0,
            "reid_verify_threshold", "[-1, 1]");
    require(c.dead_pool_limit >= 0, "dead_pool_limit", ">= 0");
}

const std::vector<std::string>& config_keys() {
    static const std::vector<std::string> keys = [] {
        std::vector<std::string> k;
        for (const auto& d : key_defs()) k.push_back(d.name);
        return k;
    }();
    return keys;
}

void set_config_value(TrackerConfig& cfg, const std::string& key, const std::string& value) {
    for (const auto& d : key_defs()) {
        if (d.name == key) {
            TrackerConfig candidate = cfg;
            d.set(candidate, value);
            validate(candidate);
            cfg = candidate;
            return;
        }
    }
    throw InputError("unknown config key '" + key + "'");
}

std::vector<std::pair<std::string, std::string>> config_to_pairs(const TrackerConfig& cfg) {
    std::vector<std::pair<std::string, std::string>> out;
    for (const auto& d : key_defs()) out.emplace_back(d.name, d.get(cfg));
    return out;
}

} // namespace gmphd
