#pragma once

#include "gmphd/config.hpp"
#include "gmphd/phd_filter.hpp"
#include "gmphd/types.hpp"

#include <span>
#include <vector>

namespace gmphd {

struct Track;

/// Center distance normalized by frame width and height, in [0, sqrt(2)].
double normalized_distance(const Box& a, const Box& b, const FrameContext& ctx);

/// Throws InputError on dimension mismatch.
double cosine_similarity(const AppearanceFeature& a, const AppearanceFeature& b);

/// Intersection over union of two center-based boxes.
double iou(const Box& a, const Box& b);

/// Rows are tracks, columns estimates.
struct CostMatrix {
    Eigen::MatrixXd values;
    std::vector<int> row_ids;
    std::vector<std::size_t> col_ids;

    Eigen::Index rows() const { return values.rows(); }
    Eigen::Index cols() const { return values.cols(); }
};

/// (1 - eta) D + eta (1 - V_s). V_s is 0 when either feature is missing.
/// With use_appearance off the cost is D alone.
/// D is the normalized center distance, or 1 - IoU in CostMode::iou.
double fused_cost(double distance, double similarity, const TrackerConfig& cfg);

CostMatrix build_cost(std::span<const Track> tracks, std::span<const Estimate> estimates,
                      const FrameContext& ctx, const TrackerConfig& cfg);

struct Match {
    int track_id = 0;
    std::size_t estimate_index = 0;
    double cost = 0.0;
};

struct AssignmentResult {
    std::vector<Match> matched;
    std::vector<int> unassigned_tracks;
    std::vector<std::size_t> unassigned_estimates;
};

/// Optimal assignment, then matches with cost >= c_ts are split back out.
AssignmentResult solve_assignment(const CostMatrix& cost, const TrackerConfig& cfg);

} // namespace gmphd
