#include "gmphd/synth.hpp"

#include "gmphd/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

namespace gmphd::synth {

namespace {

using json = nlohmann::json;

// Independent engine per purpose (signatures, colors, detections, clutter, layouts).
std::mt19937_64 stream(std::uint64_t seed, std::uint64_t purpose) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(purpose)};
    return std::mt19937_64(seq);
}

Eigen::VectorXf random_unit(int dim, std::mt19937_64& rng) {
    std::normal_distribution<float> n01(0.0f, 1.0f);
    Eigen::VectorXf v(dim);
    do {
        for (int i = 0; i < dim; ++i) v(i) = n01(rng);
    } while (v.norm() == 0.0f);
    return v / v.norm();
}

constexpr std::uint8_t kBackground = 128;

} // namespace

void validate(const Scenario& s) {
    if (!(s.ctx.width > 0.0) || !(s.ctx.height > 0.0)) throw InputError("scenario: frame size must be positive");
    if (s.frames < 1) throw InputError("scenario: frames must be >= 1");
    if (!(s.p_d >= 0.0 && s.p_d <= 1.0)) throw InputError("scenario: p_d must be in [0, 1]");
    if (!(s.clutter_rate >= 0.0)) throw InputError("scenario: clutter_rate must be >= 0");
    if (!(s.noise_sigma >= 0.0)) throw InputError("scenario: noise_sigma must be >= 0");
    if (s.feature_dim < 1) throw InputError("scenario: feature_dim must be >= 1");
    if (!(s.feature_noise >= 0.0)) throw InputError("scenario: feature_noise must be >= 0");
    for (std::size_t i = 0; i < s.targets.size(); ++i) {
        const auto& t = s.targets[i];
        const std::string who = "scenario target " + std::to_string(i);
        if (t.death_frame < t.birth_frame) throw InputError(who + ": death before birth");
        if (t.birth_frame < 1) throw InputError(who + ": birth frame must be >= 1");
        if (!(t.initial(idx::w) > 0.0) || !(t.initial(idx::h) > 0.0)) throw InputError(who + ": nonpositive size");
        if (!(t.period > 0.0)) throw InputError(who + ": period must be positive");
        if (t.signature.size() != 0 && t.signature.size() != s.feature_dim) {
            throw InputError(who + ": signature dimension differs from feature_dim");
        }
    }
    for (const auto& o : s.occlusions) {
        if (o.target < 0 || o.target >= static_cast<int>(s.targets.size())) {
            throw InputError("scenario occlusion references unknown target " + std::to_string(o.target));
        }
        if (o.length < 0) throw InputError("scenario occlusion length must be >= 0");
    }
}

StateVector true_state(const Scenario& s, int t, int frame) {
    const TargetSpec& spec = s.targets[static_cast<std::size_t>(t)];
    const double dt = frame - spec.birth_frame;
    StateVector x = spec.initial;
    x(idx::cx) += spec.initial(idx::vx) * dt;
    x(idx::cy) += spec.initial(idx::vy) * dt;
    if (s.motion == MotionKind::sinusoidal && spec.amplitude != 0.0) {
        double px = -spec.initial(idx::vy);
        double py = spec.initial(idx::vx);
        const double norm = std::hypot(px, py);
        if (norm > 0.0) {
            px /= norm;
            py /= norm;
        } else {
            px = 1.0;
            py = 0.0;
        }
        const double omega = 2.0 * std::numbers::pi / spec.period;
        const double offset = spec.amplitude * std::sin(omega * dt);
        const double rate = spec.amplitude * omega * std::cos(omega * dt);
        x(idx::cx) += px * offset;
        x(idx::cy) += py * offset;
        x(idx::vx) += px * rate;
        x(idx::vy) += py * rate;
    }
    return x;
}

bool occluded(const Scenario& s, int t, int frame) {
    return std::any_of(s.occlusions.begin(), s.occlusions.end(), [&](const Occlusion& o) {
        return o.target == t && frame >= o.start_frame && frame < o.start_frame + o.length;
    });
}

Generated generate(const Scenario& s) {
    validate(s);
    Generated g;
    const int dim = s.feature_dim;
    const std::size_t n = s.targets.size();

    auto sig_rng = stream(s.seed, 1);
    for (const auto& t : s.targets) {
        g.signatures.push_back(t.signature.size() ? Eigen::VectorXf(t.signature / t.signature.norm())
                                                  : random_unit(dim, sig_rng));
    }
    // Distinct colors on an 8-level grid, never the background bin.
    auto color_rng = stream(s.seed, 2);
    std::vector<int> palette;
    for (int c = 0; c < 512; ++c) {
        if (c != (4 * 8 + 4) * 8 + 4) palette.push_back(c);
    }
    std::shuffle(palette.begin(), palette.end(), color_rng);
    for (std::size_t i = 0; i < n; ++i) {
        const int c = palette[i % palette.size()];
        g.colors.push_back({static_cast<std::uint8_t>(16 + 32 * (c / 64)),
                            static_cast<std::uint8_t>(16 + 32 * ((c / 8) % 8)),
                            static_cast<std::uint8_t>(16 + 32 * (c % 8))});
    }

    auto det_rng = stream(s.seed, 3);
    auto clutter_rng = stream(s.seed, 4);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    std::normal_distribution<double> box_noise(0.0, 1.0);
    std::normal_distribution<float> feat_noise(0.0f, 1.0f);
    std::poisson_distribution<int> clutter_count(s.clutter_rate > 0.0 ? s.clutter_rate : 1.0);
    const float sigma_f = static_cast<float>(s.feature_noise / std::sqrt(static_cast<double>(dim)));

    g.gt.frames.resize(static_cast<std::size_t>(s.frames));
    g.detections.frames.resize(static_cast<std::size_t>(s.frames));
    g.origins.resize(static_cast<std::size_t>(s.frames));

    for (int k = 1; k <= s.frames; ++k) {
        auto& gt_frame = g.gt.frames[static_cast<std::size_t>(k - 1)];
        auto& dets = g.detections.at(k);
        auto& origins = g.origins[static_cast<std::size_t>(k - 1)];

        for (std::size_t t = 0; t < n; ++t) {
            const auto& spec = s.targets[t];
            if (k < spec.birth_frame || k > spec.death_frame) continue;
            const StateVector x = true_state(s, static_cast<int>(t), k);
            const Box truth = Box::from_state(x);
            const bool hidden = occluded(s, static_cast<int>(t), k);
            gt_frame.push_back({static_cast<int>(t) + 1, truth, true, hidden ? 0.0 : 1.0});

            const double roll = u01(det_rng);
            Box noisy = truth;
            if (s.noise_sigma > 0.0) {
                noisy.cx += s.noise_sigma * box_noise(det_rng);
                noisy.cy += s.noise_sigma * box_noise(det_rng);
                noisy.w = std::max(2.0, noisy.w + s.noise_sigma * box_noise(det_rng));
                noisy.h = std::max(2.0, noisy.h + s.noise_sigma * box_noise(det_rng));
            }
            const double score = 0.5 + 0.5 * u01(det_rng);
            Eigen::VectorXf f = g.signatures[t];
            for (int i = 0; i < dim; ++i) f(i) += sigma_f * feat_noise(det_rng);
            if (hidden || roll >= s.p_d) continue;
            f /= f.norm();
            dets.push_back({noisy, score, AppearanceFeature(f)});
            origins.push_back(static_cast<int>(t));
        }

        const int clutter = s.clutter_rate > 0.0 ? clutter_count(clutter_rng) : 0;
        for (int c = 0; c < clutter; ++c) {
            Box b;
            b.cx = s.ctx.width * u01(clutter_rng);
            b.cy = s.ctx.height * u01(clutter_rng);
            b.w = 20.0 + 80.0 * u01(clutter_rng);
            b.h = 40.0 + 160.0 * u01(clutter_rng);
            const double score = 0.6 * u01(clutter_rng);
            dets.push_back({b, score, AppearanceFeature(random_unit(dim, clutter_rng))});
            origins.push_back(-1);
        }

        for (std::size_t i = 0; i < dets.size(); ++i) {
            g.features.push_back({k, static_cast<int>(i), dets[i].feature->values()});
        }
    }

    g.seqinfo.name = "synthetic-" + std::to_string(s.seed);
    g.seqinfo.width = s.ctx.width;
    g.seqinfo.height = s.ctx.height;
    g.seqinfo.length = s.frames;
    return g;
}

Image render_frame(const Scenario& s, const Generated& g, int frame) {
    Image img(static_cast<int>(s.ctx.width), static_cast<int>(s.ctx.height), kBackground, kBackground, kBackground);
    for (std::size_t t = 0; t < s.targets.size(); ++t) {
        const auto& spec = s.targets[t];
        if (frame < spec.birth_frame || frame > spec.death_frame) continue;
        const TopLeftBox b = Box::from_state(true_state(s, static_cast<int>(t), frame)).to_top_left();
        const auto& c = g.colors[t];
        img.fill_rect(static_cast<int>(std::lround(b.left)), static_cast<int>(std::lround(b.top)),
                      static_cast<int>(std::lround(b.left + b.width)), static_cast<int>(std::lround(b.top + b.height)),
                      c[0], c[1], c[2]);
    }
    return img;
}

void write_scenario(const std::filesystem::path& dir, const Scenario& s, const Generated& g, bool render_frames) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw InputError("cannot create directory " + dir.string() + ": " + ec.message());
    write_detections(dir / "det.txt", g.detections);
    write_ground_truth(dir / "gt.txt", g.gt);
    write_feature_file(dir / "features.txt", g.features, s.feature_dim);
    write_seqinfo(dir / "seqinfo.ini", g.seqinfo);
    {
        std::ofstream out(dir / "scenario.json");
        out << scenario_to_json(s);
    }
    if (render_frames) {
        std::filesystem::create_directories(dir / "frames", ec);
        if (ec) throw InputError("cannot create frames directory: " + ec.message());
        char name[32];
        for (int k = 1; k <= s.frames; ++k) {
            std::snprintf(name, sizeof(name), "%06d.ppm", k);
            write_ppm(dir / "frames" / name, render_frame(s, g, k));
        }
    }
}

namespace {

MotionKind parse_motion(const std::string& m) {
    if (m == "constant_velocity") return MotionKind::constant_velocity;
    if (m == "sinusoidal") return MotionKind::sinusoidal;
    throw InputError("scenario: unknown motion '" + m + "'");
}

} // namespace

Scenario parse_scenario(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw InputError(std::string("scenario: invalid JSON: ") + e.what());
    }
    try {
        Scenario s;
        if (j.contains("preset")) {
            const auto& p = j.at("preset");
            const std::string name = p.at("name").get<std::string>();
            const int frames = j.value("frames", name == "well_separated" ? 100 : 300);
            const std::uint64_t seed = j.value("seed", std::uint64_t{name == "signature_occlusion" ? 7u : 1u});
            if (name == "well_separated") {
                s = well_separated(p.value("targets", 5), frames, seed);
            } else if (name == "signature_occlusion") {
                s = signature_occlusion(p.value("targets", 8), frames, seed);
            } else {
                throw InputError("scenario: unknown preset '" + name + "'");
            }
        }
        s.ctx.width = j.value("width", s.ctx.width);
        s.ctx.height = j.value("height", s.ctx.height);
        s.frames = j.value("frames", s.frames);
        s.seed = j.value("seed", s.seed);
        s.clutter_rate = j.value("clutter_rate", s.clutter_rate);
        s.p_d = j.value("p_d", s.p_d);
        s.noise_sigma = j.value("noise_sigma", s.noise_sigma);
        s.feature_dim = j.value("feature_dim", s.feature_dim);
        s.feature_noise = j.value("feature_noise", s.feature_noise);
        if (j.contains("motion")) s.motion = parse_motion(j.at("motion").get<std::string>());
        if (j.contains("targets")) {
            s.targets.clear();
            for (const auto& t : j.at("targets")) {
                TargetSpec ts;
                ts.birth_frame = t.value("birth", 1);
                ts.death_frame = t.value("death", s.frames);
                const auto st = t.at("state").get<std::vector<double>>();
                if (st.size() != 6) throw InputError("scenario: target state needs 6 values");
                for (int i = 0; i < 6; ++i) ts.initial(i) = st[static_cast<std::size_t>(i)];
                ts.amplitude = t.value("amplitude", 0.0);
                ts.period = t.value("period", 40.0);
                if (t.contains("signature")) {
                    const auto sig = t.at("signature").get<std::vector<float>>();
                    ts.signature = Eigen::Map<const Eigen::VectorXf>(sig.data(), static_cast<Eigen::Index>(sig.size()));
                }
                s.targets.push_back(std::move(ts));
            }
        }
        if (j.contains("occlusions")) {
            s.occlusions.clear();
            for (const auto& o : j.at("occlusions")) {
                s.occlusions.push_back({o.at("target").get<int>(), o.at("start").get<int>(), o.at("length").get<int>()});
            }
        }
        validate(s);
        return s;
    } catch (const json::exception& e) {
        throw InputError(std::string("scenario: ") + e.what());
    }
}

Scenario read_scenario(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open scenario " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_scenario(ss.str());
}

std::string scenario_to_json(const Scenario& s) {
    json j;
    j["width"] = s.ctx.width;
    j["height"] = s.ctx.height;
    j["frames"] = s.frames;
    j["seed"] = s.seed;
    j["clutter_rate"] = s.clutter_rate;
    j["p_d"] = s.p_d;
    j["noise_sigma"] = s.noise_sigma;
    j["feature_dim"] = s.feature_dim;
    j["feature_noise"] = s.feature_noise;
    j["motion"] = s.motion == MotionKind::sinusoidal ? "sinusoidal" : "constant_velocity";
    j["targets"] = json::array();
    for (const auto& t : s.targets) {
        json jt;
        jt["birth"] = t.birth_frame;
        jt["death"] = t.death_frame;
        jt["state"] = std::vector<double>(t.initial.data(), t.initial.data() + 6);
        jt["amplitude"] = t.amplitude;
        jt["period"] = t.period;
        if (t.signature.size()) {
            jt["signature"] = std::vector<float>(t.signature.data(), t.signature.data() + t.signature.size());
        }
        j["targets"].push_back(jt);
    }
    j["occlusions"] = json::array();
    for (const auto& o : s.occlusions) {
        j["occlusions"].push_back({{"target", o.target}, {"start", o.start_frame}, {"length", o.length}});
    }
    return j.dump(2) + "\n";
}

Scenario well_separated(int n, int frames, std::uint64_t seed) {
    Scenario s;
    s.frames = frames;
    s.seed = seed;
    auto rng = stream(seed, 10);
    std::uniform_real_distribution<double> vel(-3.0, 3.0);
    std::uniform_real_distribution<double> width(40.0, 80.0);
    const int cols = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(n))));
    const int rows = (n + cols - 1) / cols;
    for (int i = 0; i < n; ++i) {
        TargetSpec t;
        t.birth_frame = 1;
        t.death_frame = frames;
        const double w = width(rng);
        t.initial << s.ctx.width * (i % cols + 1) / (cols + 1), s.ctx.height * (i / cols + 1) / (rows + 1),
            vel(rng), vel(rng), w, 2.0 * w;
        s.targets.push_back(t);
    }
    return s;
}

Scenario signature_occlusion(int n, int frames, std::uint64_t seed) {
    Scenario s = well_separated(n, frames, seed);
    s.motion = MotionKind::sinusoidal;
    auto rng = stream(seed, 11);
    std::uniform_real_distribution<double> amp(20.0, 40.0);
    std::uniform_real_distribution<double> period(30.0, 60.0);
    for (int i = 0; i < n; ++i) {
        auto& t = s.targets[static_cast<std::size_t>(i)];
        t.amplitude = amp(rng);
        t.period = period(rng);
        // Staggered lifetimes: some targets enter late, some leave early.
        t.birth_frame = 1 + (i % 3) * frames / 10;
        t.death_frame = frames - ((i + 1) % 3) * frames / 10;
    }
    const int occluded_targets[3] = {0, n > 3 ? 3 : 0, n > 5 ? 5 : 0};
    for (int o = 0; o < 3; ++o) {
        s.occlusions.push_back({occluded_targets[o], frames * (o + 1) / 4, 5});
    }
    return s;
}

} // namespace gmphd::synth
