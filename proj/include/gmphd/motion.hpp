#pragma once

#include "gmphd/config.hpp"
#include "gmphd/types.hpp"

#include <utility>

namespace gmphd {

using ObsMatrix = Eigen::Matrix<double, 4, 6>;

/// Constant-velocity box model. Built once per run and shared read-only.
struct MotionModel {
    StateCov F;
    StateCov Q;
    ObsMatrix H;
    MeasCov R;
    StateCov P_birth;
};

/// Throws InputError for nonpositive sigma_r, sigma_v or delta.
MotionModel build_model(const TrackerConfig& cfg);

/// (F m, Q + F P F^T), covariance re-symmetrized.
std::pair<StateVector, StateCov> predict_state(const StateVector& m, const StateCov& P,
                                               const MotionModel& model);

/// State with zero velocity centred on a measured box.
StateVector state_from_box(const Box& b);

} // namespace gmphd
