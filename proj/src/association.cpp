#include "gmphd/association.hpp"

#include "gmphd/errors.hpp"
#include "gmphd/hungarian.hpp"
#include "gmphd/tracks.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace gmphd {

double normalized_distance(const Box& a, const Box& b, const FrameContext& ctx) {
    const double dx = (a.cx - b.cx) / ctx.width;
    const double dy = (a.cy - b.cy) / ctx.height;
    return std::sqrt(dx * dx + dy * dy);
}

double cosine_similarity(const AppearanceFeature& a, const AppearanceFeature& b) {
    if (a.dimension() != b.dimension()) {
        throw InputError("appearance dimension mismatch: " + std::to_string(a.dimension()) + " vs " +
                         std::to_string(b.dimension()));
    }
    const double dot = a.values().cast<double>().dot(b.values().cast<double>());
    const double na = a.values().cast<double>().norm();
    const double nb = b.values().cast<double>().norm();
    return std::clamp(dot / (na * nb), -1.0, 1.0);
}

double iou(const Box& a, const Box& b) {
    const double ix = std::min(a.cx + a.w / 2, b.cx + b.w / 2) - std::max(a.cx - a.w / 2, b.cx - b.w / 2);
    const double iy = std::min(a.cy + a.h / 2, b.cy + b.h / 2) - std::max(a.cy - a.h / 2, b.cy - b.h / 2);
    if (ix <= 0.0 || iy <= 0.0) return 0.0;
    const double inter = ix * iy;
    const double uni = a.w * a.h + b.w * b.h - inter;
    return uni > 0.0 ? inter / uni : 0.0;
}

double fused_cost(double distance, double similarity, const TrackerConfig& cfg) {
    if (!cfg.use_appearance) return distance;
    return (1.0 - cfg.eta) * distance + cfg.eta * (1.0 - similarity);
}

CostMatrix build_cost(std::span<const Track> tracks, std::span<const Estimate> estimates,
                      const FrameContext& ctx, const TrackerConfig& cfg) {
    CostMatrix cm;
    std::vector<const Track*> rows;
    for (const auto& t : tracks) {
        if (t.live()) rows.push_back(&t);
    }
    cm.values.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(estimates.size()));
    for (std::size_t j = 0; j < estimates.size(); ++j) cm.col_ids.push_back(j);

    for (std::size_t i = 0; i < rows.size(); ++i) {
        const Track& t = *rows[i];
        cm.row_ids.push_back(t.id);
        const OptFeature track_feature = cfg.use_appearance ? aggregated_feature(t) : std::nullopt;
        const Box tb = t.box();
        for (std::size_t j = 0; j < estimates.size(); ++j) {
            const Box eb = estimates[j].box();
            const double d = cfg.cost_mode == CostMode::iou ? 1.0 - iou(tb, eb) : normalized_distance(tb, eb, ctx);
            double sim = 0.0;
            if (track_feature && estimates[j].feature) {
                sim = cosine_similarity(*track_feature, *estimates[j].feature);
            }
            cm.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = fused_cost(d, sim, cfg);
        }
    }
    return cm;
}

AssignmentResult solve_assignment(const CostMatrix& cost, const TrackerConfig& cfg) {
    AssignmentResult r;
    const auto row_to_col = solve_min_cost(cost.values);
    std::vector<bool> col_taken(static_cast<std::size_t>(cost.cols()), false);
    for (std::size_t i = 0; i < row_to_col.size(); ++i) {
        const int j = row_to_col[i];
        const double c = j >= 0 ? cost.values(static_cast<Eigen::Index>(i), j) : 0.0;
        if (j >= 0 && c < cfg.c_ts) {
            r.matched.push_back({cost.row_ids[i], cost.col_ids[static_cast<std::size_t>(j)], c});
            col_taken[static_cast<std::size_t>(j)] = true;
        } else {
            r.unassigned_tracks.push_back(cost.row_ids[i]);
        }
    }
    for (std::size_t j = 0; j < col_taken.size(); ++j) {
        if (!col_taken[j]) r.unassigned_estimates.push_back(cost.col_ids[j]);
    }
    return r;
}

} // namespace gmphd
