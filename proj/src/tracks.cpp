#include "gmphd/tracks.hpp"

#include "gmphd/errors.hpp"

#include <algorithm>
#include <string>

namespace gmphd {

namespace {

void accumulate_feature(Track& t, const Estimate& e, double confidence) {
    if (!e.feature) return;
    const Eigen::VectorXf& f = e.feature->values();
    if (t.feature_sum.size() == 0) {
        t.feature_sum = Eigen::VectorXf::Zero(f.size());
    } else if (t.feature_sum.size() != f.size()) {
        throw InputError("track " + std::to_string(t.id) + ": appearance dimension changed from " +
                         std::to_string(t.feature_sum.size()) + " to " + std::to_string(f.size()));
    }
    t.feature_sum += static_cast<float>(confidence) * f;
    t.confidence_sum += confidence;
}

void require_next_frame(const Track& t, int frame) {
    if (!t.history.empty() && frame <= t.history.back().frame) {
        throw ContractError("track " + std::to_string(t.id) + ": frame " + std::to_string(frame) +
                            " does not advance past " + std::to_string(t.history.back().frame));
    }
}

} // namespace

Track make_track(int id, const Estimate& estimate, int frame) {
    Track t;
    t.id = id;
    t.status = TrackStatus::active;
    t.last_state = estimate.state;
    t.last_cov = estimate.cov;
    t.history.push_back({frame, estimate.state, Origin::measured});
    accumulate_feature(t, estimate, estimate.score);
    return t;
}

void attach(Track& track, const Estimate& estimate, double detection_confidence, int frame) {
    if (!track.live()) {
        throw ContractError("cannot attach an estimate to dead track " + std::to_string(track.id));
    }
    require_next_frame(track, frame);
    track.history.push_back({frame, estimate.state, Origin::measured});
    track.last_state = estimate.state;
    track.last_cov = estimate.cov;
    track.prediction_count = 0;
    track.status = TrackStatus::active;
    accumulate_feature(track, estimate, detection_confidence);
}

OptFeature aggregated_feature(const Track& track) {
    if (track.feature_sum.size() == 0 || !(track.confidence_sum > 0.0)) {
        return std::nullopt;
    }
    Eigen::VectorXf mean = track.feature_sum / static_cast<float>(track.confidence_sum);
    if (!(mean.norm() > 1e-6f)) {
        return std::nullopt;
    }
    return AppearanceFeature(std::move(mean));
}

void predict_unassigned(Track& track, const MotionModel& model, const TrackerConfig& cfg, int frame) {
    if (!track.live()) {
        throw ContractError("cannot predict dead track " + std::to_string(track.id));
    }
    if (track.prediction_count >= cfg.t_ts) {
        throw ContractError("track " + std::to_string(track.id) + " exhausted its " +
                            std::to_string(cfg.t_ts) + " predictions; kill it instead");
    }
    require_next_frame(track, frame);
    std::tie(track.last_state, track.last_cov) = predict_state(track.last_state, track.last_cov, model);
    ++track.prediction_count;
    track.status = TrackStatus::predicted;
    track.history.push_back({frame, track.last_state, Origin::predicted});
}

void kill(Track& track, int frame) {
    if (!track.live()) {
        throw ContractError("track " + std::to_string(track.id) + " is already dead");
    }
    track.status = TrackStatus::dead;
    track.died_at = frame;
}

std::optional<std::size_t> find_reid_candidate(const Estimate& estimate, const std::vector<Track>& dead_pool,
                                               const TrackerConfig& cfg, int frame) {
    if (!estimate.feature) return std::nullopt;
    std::optional<std::size_t> best;
    double best_sim = cfg.v_s_ts;
    for (std::size_t i = 0; i < dead_pool.size(); ++i) {
        const Track& t = dead_pool[i];
        if (t.live() || !t.died_at || *t.died_at >= frame) continue;
        const OptFeature f = aggregated_feature(t);
        if (!f) continue;
        const double sim = cosine_similarity(*f, *estimate.feature);
        if (sim > best_sim) {
            best_sim = sim;
            best = i;
        }
    }
    return best;
}

Track revive(std::vector<Track>& dead_pool, std::size_t index, const Estimate& estimate, int frame) {
    Track t = std::move(dead_pool.at(index));
    dead_pool.erase(dead_pool.begin() + static_cast<std::ptrdiff_t>(index));
    t.status = TrackStatus::active;
    t.died_at.reset();
    attach(t, estimate, estimate.score, frame);
    return t;
}

std::optional<Track> reidentify(const Estimate& estimate, std::vector<Track>& dead_pool,
                                const TrackerConfig& cfg, int frame) {
    const auto idx = find_reid_candidate(estimate, dead_pool, cfg, frame);
    if (!idx) return std::nullopt;
    return revive(dead_pool, *idx, estimate, frame);
}

TrackManager::TrackManager(TrackerConfig cfg, MotionModel model) : cfg_(cfg), model_(std::move(model)) {}

CostMatrix TrackManager::cost(std::span<const Estimate> estimates, const FrameContext& ctx) const {
    return build_cost(live_, estimates, ctx, cfg_);
}

FrameResult TrackManager::step(std::span<const Estimate> estimates, const AssignmentResult& assignment,
                               int frame) {
    auto find_live = [this](int id) -> Track& {
        auto it = std::find_if(live_.begin(), live_.end(), [id](const Track& t) { return t.id == id; });
        if (it == live_.end()) {
            throw ContractError("assignment references unknown track " + std::to_string(id));
        }
        return *it;
    };

    for (const Match& m : assignment.matched) {
        const Estimate& e = estimates[m.estimate_index];
        attach(find_live(m.track_id), e, e.score, frame);
    }

    for (int id : assignment.unassigned_tracks) {
        Track& t = find_live(id);
        if (t.prediction_count < cfg_.t_ts) {
            predict_unassigned(t, model_, cfg_, frame);
        } else {
            kill(t, frame);
        }
    }
    for (auto it = live_.begin(); it != live_.end();) {
        if (!it->live()) {
            dead_.push_back(std::move(*it));
            it = live_.erase(it);
        } else {
            ++it;
        }
    }
    if (cfg_.dead_pool_limit > 0 && dead_.size() > static_cast<std::size_t>(cfg_.dead_pool_limit)) {
        dead_.erase(dead_.begin(), dead_.end() - cfg_.dead_pool_limit);
    }

    for (std::size_t j : assignment.unassigned_estimates) {
        const Estimate& e = estimates[j];
        std::optional<Track> revived;
        if (cfg_.use_reid) {
            revived = reidentify(e, dead_, cfg_, frame);
        }
        live_.push_back(revived ? std::move(*revived) : make_track(next_id_++, e, frame));
    }
    std::sort(live_.begin(), live_.end(), [](const Track& a, const Track& b) { return a.id < b.id; });

    FrameResult out;
    out.frame = frame;
    for (const Track& t : live_) {
        const Origin origin = t.history.back().origin;
        out.tracks.push_back({t.id, t.box(), origin, 1.0});
    }
    return out;
}

} // namespace gmphd
