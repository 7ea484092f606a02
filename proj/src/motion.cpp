#include "gmphd/motion.hpp"

#include "gmphd/errors.hpp"

namespace gmphd {

MotionModel build_model(const TrackerConfig& cfg) {
    if (!(cfg.sigma_r > 0.0) || !(cfg.sigma_v > 0.0)) {
        throw InputError("sigma_r and sigma_v must be positive");
    }
    if (!(cfg.delta > 0.0)) {
        throw InputError("delta must be positive");
    }
    const double d = cfg.delta;
    const double qv = cfg.sigma_v * cfg.sigma_v;
    const Eigen::Matrix2d I2 = Eigen::Matrix2d::Identity();

    MotionModel m;
    m.F.setIdentity();
    m.F.block<2, 2>(0, 2) = d * I2;

    m.Q.setZero();
    m.Q.block<2, 2>(0, 0) = (d * d * d * d / 4.0) * I2;
    m.Q.block<2, 2>(0, 2) = (d * d * d / 2.0) * I2;
    m.Q.block<2, 2>(2, 0) = (d * d * d / 2.0) * I2;
    m.Q.block<2, 2>(2, 2) = (d * d) * I2;
    // Size block is sigma_v^2 I with no delta scaling.
    m.Q.block<2, 2>(4, 4) = I2;
    m.Q *= qv;

    m.H.setZero();
    m.H.block<2, 2>(0, 0) = I2;
    m.H.block<2, 2>(2, 4) = I2;

    m.R = (cfg.sigma_r * cfg.sigma_r) * MeasCov::Identity();

    m.P_birth = StateVector(100.0, 100.0, 25.0, 25.0, 20.0, 20.0).asDiagonal();
    return m;
}

std::pair<StateVector, StateCov> predict_state(const StateVector& m, const StateCov& P,
                                               const MotionModel& model) {
    StateVector mp = model.F * m;
    StateCov Pp = model.Q + model.F * P * model.F.transpose();
    return {mp, symmetrized(Pp)};
}

StateVector state_from_box(const Box& b) {
    StateVector x;
    x << b.cx, b.cy, 0.0, 0.0, b.w, b.h;
    return x;
}

} // namespace gmphd
