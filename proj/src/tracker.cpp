#include "gmphd/tracker.hpp"

#include "gmphd/errors.hpp"

#include <algorithm>
#include <chrono>

namespace gmphd {

Tracker::Tracker(TrackerConfig cfg)
    : cfg_(cfg), filter_(cfg), manager_(cfg, build_model(cfg)) {}

FrameResult Tracker::step(std::span<const Detection> detections, const FrameContext& ctx) {
    estimates_ = filter_.step(detections, ctx);
    const CostMatrix cost = manager_.cost(estimates_, ctx);
    const AssignmentResult assignment = solve_assignment(cost, cfg_);
    return manager_.step(estimates_, assignment, ctx.frame_index);
}

std::vector<Detection> preprocess(std::span<const Detection> detections, const TrackerConfig& cfg) {
    if (cfg.nms_threshold > 0.0) return nms(detections, cfg.nms_threshold);
    return {detections.begin(), detections.end()};
}

void attach_features(DetectionFrameSet& dets, const FeatureProvider& provider,
                     const std::function<Image(int)>& frame_loader) {
    for (int k = 1; k <= dets.frame_count(); ++k) {
        auto& frame = dets.at(k);
        if (frame.empty()) continue;
        std::optional<Image> image;
        if (provider.kind() == ProviderKind::histogram) {
            if (!frame_loader) throw InputError("histogram provider needs frame images");
            image = frame_loader(k);
        }
        auto feats = provider.features_for_frame(k, image ? &*image : nullptr, frame);
        for (std::size_t i = 0; i < frame.size(); ++i) frame[i].feature = std::move(feats[i]);
    }
}

std::vector<FrameResult> run_sequence(const DetectionFrameSet& dets, const SeqInfo& info, TrackerConfig cfg,
                                      std::vector<FrameLog>* log) {
    const bool any_feature = std::any_of(dets.frames.begin(), dets.frames.end(), [](const auto& f) {
        return std::any_of(f.begin(), f.end(), [](const Detection& d) { return d.feature.has_value(); });
    });
    if (!any_feature) {
        cfg.use_appearance = false;
        cfg.use_reid = false;
    }

    Tracker tracker(cfg);
    const int frames = std::max(info.length, dets.frame_count());
    std::vector<FrameResult> results;
    results.reserve(static_cast<std::size_t>(frames));
    const std::vector<Detection> none;
    for (int k = 1; k <= frames; ++k) {
        const auto t0 = std::chrono::steady_clock::now();
        const auto& raw = k <= dets.frame_count() ? dets.at(k) : none;
        const auto frame_dets = preprocess(raw, cfg);
        results.push_back(tracker.step(frame_dets, info.context(k)));
        const auto t1 = std::chrono::steady_clock::now();
        if (log) {
            FrameLog l;
            l.frame = k;
            l.detections = frame_dets.size();
            l.components = tracker.filter().posterior().size();
            l.estimates = tracker.last_estimates().size();
            l.live_tracks = tracker.tracks().live_tracks().size();
            l.mass = tracker.filter().posterior().mass();
            l.millis = std::chrono::duration<double, std::milli>(t1 - t0).count();
            log->push_back(l);
        }
    }
    return results;
}

} // namespace gmphd
