#pragma once

#include "gmphd/appearance.hpp"
#include "gmphd/image.hpp"
#include "gmphd/io.hpp"
#include "gmphd/types.hpp"

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace gmphd::synth {

enum class MotionKind { constant_velocity, sinusoidal };

struct TargetSpec {
    int birth_frame = 1;
    int death_frame = 1;           ///< last frame the target exists, inclusive
    StateVector initial = StateVector::Zero(); ///< state at birth_frame
    /// Sinusoidal mode: lateral oscillation perpendicular to the velocity.
    double amplitude = 0.0;
    double period = 40.0;
    /// Empty means "draw a random unit signature from the scenario seed".
    Eigen::VectorXf signature;
};

struct Occlusion {
    int target = 0;
    int start_frame = 1;
    int length = 0;
};

struct Scenario {
    FrameContext ctx{1, 5120.0, 3840.0};
    int frames = 100;
    std::vector<TargetSpec> targets;
    std::vector<Occlusion> occlusions;
    MotionKind motion = MotionKind::constant_velocity;
    double clutter_rate = 10.0;
    double p_d = 0.95;
    double noise_sigma = 2.0;
    int feature_dim = 512;
    /// Expected L2 norm of the additive signature noise before re-normalization.
    double feature_noise = 0.15;
    std::uint64_t seed = 1;
};

struct Generated {
    GroundTruth gt;
    DetectionFrameSet detections;     ///< features attached, in file order
    std::vector<FeatureRecord> features;
    /// Per detection: index of the generating target, -1 for clutter.
    std::vector<std::vector<int>> origins;
    std::vector<Eigen::VectorXf> signatures;
    std::vector<std::array<std::uint8_t, 3>> colors;
    SeqInfo seqinfo;
};

/// Throws InputError for invalid scenarios (death before birth, bad p_d, ...).
void validate(const Scenario& s);

/// Deterministic in (scenario, seed).
Generated generate(const Scenario& s);

/// True state of target `t` at `frame` (no bounds check on lifetime).
StateVector true_state(const Scenario& s, int t, int frame);
bool occluded(const Scenario& s, int t, int frame);

/// Gray background with each live target drawn as a solid rectangle in its
/// color, occluded targets included (hidden behind nothing; occlusion only
/// suppresses detections).
Image render_frame(const Scenario& s, const Generated& g, int frame);

/// Writes det.txt, gt.txt, features.txt, seqinfo.ini and optionally
/// frames/NNNNNN.ppm into `dir`.
void write_scenario(const std::filesystem::path& dir, const Scenario& s, const Generated& g,
                    bool render_frames);

/// JSON scenario description; see README for the schema.
Scenario read_scenario(const std::filesystem::path& path);
Scenario parse_scenario(const std::string& json_text);
std::string scenario_to_json(const Scenario& s);

/// `n` constant-velocity targets on a grid, alive for the whole sequence.
Scenario well_separated(int n, int frames, std::uint64_t seed);
/// Targets with distinct signatures, staggered births/deaths, three 5-frame
/// occlusions and sinusoidal paths.
Scenario signature_occlusion(int n = 8, int frames = 300, std::uint64_t seed = 7);

} // namespace gmphd::synth
