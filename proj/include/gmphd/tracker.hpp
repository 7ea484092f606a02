#pragma once

#include "gmphd/appearance.hpp"
#include "gmphd/config.hpp"
#include "gmphd/io.hpp"
#include "gmphd/phd_filter.hpp"
#include "gmphd/tracks.hpp"

#include <functional>
#include <span>
#include <vector>

namespace gmphd {

struct FrameLog {
    int frame = 0;
    std::size_t detections = 0;
    std::size_t components = 0;
    std::size_t estimates = 0;
    std::size_t live_tracks = 0;
    double mass = 0.0;
    double millis = 0.0;
};

/// Full online pipeline for one sequence: GM-PHD filtering, tracks-to-estimates
/// association, add-on prediction, re-identification.
class Tracker {
public:
    explicit Tracker(TrackerConfig cfg);

    /// `detections` carry their features already; preprocessing (score gate,
    /// NMS) is the caller's job, see preprocess().
    FrameResult step(std::span<const Detection> detections, const FrameContext& ctx);

    const PhdFilter& filter() const { return filter_; }
    const TrackManager& tracks() const { return manager_; }
    const std::vector<Estimate>& last_estimates() const { return estimates_; }

private:
    TrackerConfig cfg_;
    PhdFilter filter_;
    TrackManager manager_;
    std::vector<Estimate> estimates_;
};

/// NMS at cfg.nms_threshold (skipped when 0).
std::vector<Detection> preprocess(std::span<const Detection> detections, const TrackerConfig& cfg);

/// Attaches provider features to every frame of `dets` (before NMS, so file
/// records line up with det.txt order). `frame_loader` is consulted only by
/// providers that read pixels.
void attach_features(DetectionFrameSet& dets, const FeatureProvider& provider,
                     const std::function<Image(int)>& frame_loader = {});

/// Runs a whole sequence. Appearance is switched off automatically when no
/// detection carries a feature.
std::vector<FrameResult> run_sequence(const DetectionFrameSet& dets, const SeqInfo& info,
                                      TrackerConfig cfg, std::vector<FrameLog>* log = nullptr);

} // namespace gmphd
