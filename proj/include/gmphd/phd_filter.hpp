#pragma once

#include "gmphd/config.hpp"
#include "gmphd/motion.hpp"
#include "gmphd/types.hpp"

#include <random>
#include <span>
#include <vector>

namespace gmphd {

/// A multi-target state estimate taken from one reduced-intensity component.
struct Estimate {
    StateVector state;
    StateCov cov;
    double weight = 0.0;
    OptFeature feature;
    double score = 1.0;
    std::size_t source_component = 0;

    Box box() const { return Box::from_state(state); }
};

/// Measurement-driven birth: one component per detection with score >= s_t.
Intensity birth_intensity(std::span<const Detection> detections, const TrackerConfig& cfg,
                          const MotionModel& model);

/// Survival prediction of every posterior component, births appended.
Intensity predict(const Intensity& posterior, const Intensity& births, const TrackerConfig& cfg,
                  const MotionModel& model);

/// exp(c) / (exp(c) + exp(-c)) of the cosine similarity c. Throws InputError on
/// dimension mismatch (zero vectors cannot be constructed).
double appearance_likelihood(const AppearanceFeature& a, const AppearanceFeature& b);
double appearance_likelihood_from_similarity(double cosine);

/// Update with the motion x appearance likelihood. Output holds the
/// miss-detection copies first, then |predicted| components per detection in
/// detection order. Clutter intensity is lambda_t / (W H).
///
/// The appearance term is 0.5 when the component or detection has no feature,
/// when the component was born this frame, or when cfg.use_appearance is off.
///
/// Throws NumericalError if an innovation covariance is not positive definite.
Intensity update(const Intensity& predicted, std::span<const Detection> detections,
                 const FrameContext& ctx, const TrackerConfig& cfg, const MotionModel& model);

/// Drops components with weight < prune_t, keeping order.
Intensity prune(const Intensity& intensity, const TrackerConfig& cfg);

/// Greedy Mahalanobis clustering around the heaviest remaining component.
Intensity merge(const Intensity& intensity, const TrackerConfig& cfg);

/// Keeps the heaviest L components, L = max(v_prev, m_k[, Poisson(v_prev)]).
Intensity cap(const Intensity& intensity, std::size_t v_prev, std::size_t m_k,
              const TrackerConfig& cfg, std::mt19937_64& rng);

/// One estimate per component with weight strictly above extract_threshold.
std::vector<Estimate> extract(const Intensity& intensity, const TrackerConfig& cfg);

/// Per-frame counters exposed for logging.
struct FilterStats {
    std::size_t predicted = 0;
    std::size_t updated = 0;
    std::size_t reduced = 0;
    std::size_t estimates = 0;
};

/// Stateful GM-PHD recursion: birth, predict, update, prune, merge, cap, extract.
class PhdFilter {
public:
    explicit PhdFilter(TrackerConfig cfg);

    std::vector<Estimate> step(std::span<const Detection> detections, const FrameContext& ctx);

    const Intensity& posterior() const { return posterior_; }
    const MotionModel& model() const { return model_; }
    const TrackerConfig& config() const { return cfg_; }
    const FilterStats& last_stats() const { return stats_; }

private:
    TrackerConfig cfg_;
    MotionModel model_;
    Intensity posterior_;
    std::mt19937_64 rng_;
    FilterStats stats_;
};

} // namespace gmphd
