#pragma once

#include "gmphd/association.hpp"
#include "gmphd/config.hpp"
#include "gmphd/motion.hpp"
#include "gmphd/phd_filter.hpp"
#include "gmphd/types.hpp"

#include <optional>
#include <vector>

namespace gmphd {

enum class TrackStatus { active, predicted, dead };
enum class Origin { measured, predicted };

struct TrackPoint {
    int frame = 0;
    StateVector state;
    Origin origin = Origin::measured;
};

struct Track {
    int id = 0;
    TrackStatus status = TrackStatus::active;
    StateVector last_state = StateVector::Zero();
    StateCov last_cov = StateCov::Identity();
    std::vector<TrackPoint> history;
    /// Confidence-weighted sum of attached appearance features.
    Eigen::VectorXf feature_sum;
    double confidence_sum = 0.0;
    int prediction_count = 0;
    std::optional<int> died_at;

    bool live() const { return status != TrackStatus::dead; }
    Box box() const { return Box::from_state(last_state); }
    int last_frame() const { return history.empty() ? 0 : history.back().frame; }
};

/// A labeled box emitted for one frame.
struct TrackOutput {
    int id = 0;
    Box box;
    Origin origin = Origin::measured;
    double confidence = 1.0;
};

struct FrameResult {
    int frame = 0;
    std::vector<TrackOutput> tracks;
};

/// Starts a track at `estimate`.
Track make_track(int id, const Estimate& estimate, int frame);

/// Appends a measured point and folds the estimate's feature into the
/// aggregate. Throws ContractError on a dead track or a non-increasing frame.
void attach(Track& track, const Estimate& estimate, double detection_confidence, int frame);

/// Confidence-weighted mean feature, or nullopt when nothing was accumulated
/// or the mean cancelled to zero.
OptFeature aggregated_feature(const Track& track);

/// Coasts one frame on the motion model. Throws ContractError on a dead track
/// or when the prediction budget t_ts is already spent.
void predict_unassigned(Track& track, const MotionModel& model, const TrackerConfig& cfg, int frame);

/// Throws ContractError on an already dead track.
void kill(Track& track, int frame);

/// Returns the index into `dead_pool` of the dead track most similar to the
/// estimate if that similarity exceeds v_s_ts. Tracks that died at `frame` or
/// later are not candidates.
std::optional<std::size_t> find_reid_candidate(const Estimate& estimate,
                                               const std::vector<Track>& dead_pool,
                                               const TrackerConfig& cfg, int frame);

/// Revives dead_pool[index] onto the estimate, moves it out of the pool and
/// returns it.
Track revive(std::vector<Track>& dead_pool, std::size_t index, const Estimate& estimate, int frame);

/// find_reid_candidate followed by revive. Estimates without a feature never
/// revive anything.
std::optional<Track> reidentify(const Estimate& estimate, std::vector<Track>& dead_pool,
                                const TrackerConfig& cfg, int frame);

/// Owns live tracks, the dead pool and the id counter for one run.
class TrackManager {
public:
    TrackManager(TrackerConfig cfg, MotionModel model);

    /// Builds the cost matrix for the live tracks.
    CostMatrix cost(std::span<const Estimate> estimates, const FrameContext& ctx) const;

    /// Applies an assignment computed from cost(estimates, ctx) and returns the
    /// frame's labeled boxes ordered by id.
    FrameResult step(std::span<const Estimate> estimates, const AssignmentResult& assignment,
                     int frame);

    const std::vector<Track>& live_tracks() const { return live_; }
    const std::vector<Track>& dead_pool() const { return dead_; }
    int next_id() const { return next_id_; }

private:
    TrackerConfig cfg_;
    MotionModel model_;
    std::vector<Track> live_;
    std::vector<Track> dead_;
    int next_id_ = 1;
};

} // namespace gmphd
