#include "gmphd/config.hpp"
#include "gmphd/errors.hpp"
#include "gmphd/motion.hpp"
#include "gmphd/types.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>

using namespace gmphd;

TEST(Box, TopLeftToCenter) {
    const Box b = Box::from_top_left({0, 0, 10, 20});
    EXPECT_EQ(b, (Box{5, 10, 10, 20}));
    const Box c = Box::from_top_left({100, 200, 50, 80});
    EXPECT_EQ(c, (Box{125, 240, 50, 80}));
}

TEST(Box, RoundTrip) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> pos(-500.0, 2000.0), size(0.5, 400.0);
    for (int i = 0; i < 200; ++i) {
        const TopLeftBox t{pos(rng), pos(rng), size(rng), size(rng)};
        const TopLeftBox back = Box::from_top_left(t).to_top_left();
        EXPECT_NEAR(back.left, t.left, 1e-9);
        EXPECT_NEAR(back.top, t.top, 1e-9);
        EXPECT_DOUBLE_EQ(back.width, t.width);
        EXPECT_DOUBLE_EQ(back.height, t.height);
    }
}

TEST(Box, RejectsNonPositiveSize) {
    EXPECT_THROW(Box::from_top_left({0, 0, 0, 10}), InputError);
    EXPECT_THROW(Box::from_top_left({0, 0, 10, -1}), InputError);
}

TEST(AppearanceFeature, RejectsDegenerateVectors) {
    EXPECT_THROW(AppearanceFeature(Eigen::VectorXf()), InputError);
    EXPECT_THROW(AppearanceFeature(Eigen::VectorXf::Zero(4)), InputError);
    Eigen::VectorXf v = Eigen::VectorXf::Ones(3);
    v(1) = std::numeric_limits<float>::quiet_NaN();
    EXPECT_THROW(AppearanceFeature{v}, InputError);
}

TEST(AppearanceFeature, Normalized) {
    const AppearanceFeature f(Eigen::Vector3f(3, 4, 0));
    EXPECT_FLOAT_EQ(f.normalized().norm(), 1.0f);
    EXPECT_FLOAT_EQ(f.normalized().values()(0), 0.6f);
    EXPECT_EQ(f.dimension(), 3);
}

TEST(Covariance, SymmetricPositiveDefiniteCheck) {
    EXPECT_TRUE(is_symmetric_pd(StateCov::Identity()));
    StateCov asym = StateCov::Identity();
    asym(0, 1) = 0.1;
    EXPECT_FALSE(is_symmetric_pd(asym));
    StateCov singular = StateCov::Identity();
    singular(3, 3) = 0.0;
    EXPECT_FALSE(is_symmetric_pd(singular));
}

TEST(Config, DefaultsMatchPublishedValues) {
    const TrackerConfig c = default_config();
    EXPECT_DOUBLE_EQ(c.eta, 0.65);
    EXPECT_DOUBLE_EQ(c.s_t, 0.0);
    EXPECT_DOUBLE_EQ(c.w_gamma, 0.1);
    EXPECT_DOUBLE_EQ(c.sigma_r, 6.0);
    EXPECT_DOUBLE_EQ(c.sigma_v, 5.0);
    EXPECT_DOUBLE_EQ(c.p_d, 0.95);
    EXPECT_DOUBLE_EQ(c.p_s, 0.99);
    EXPECT_DOUBLE_EQ(c.lambda_t, 10.0);
    EXPECT_DOUBLE_EQ(c.merge_u, 4.0);
    EXPECT_DOUBLE_EQ(c.prune_t, 1e-5);
    EXPECT_EQ(c.t_ts, 3);
    EXPECT_DOUBLE_EQ(c.c_ts, 0.4);
    EXPECT_DOUBLE_EQ(c.v_s_ts, 0.6);
    EXPECT_DOUBLE_EQ(c.extract_threshold, 0.5);
    EXPECT_DOUBLE_EQ(c.delta, 1.0);
    EXPECT_FALSE(c.use_score_in_birth);
    EXPECT_NO_THROW(validate(c));
}

TEST(Config, SetValueParsesAndValidates) {
    TrackerConfig c = default_config();
    set_config_value(c, "eta", "0.4");
    EXPECT_DOUBLE_EQ(c.eta, 0.4);
    set_config_value(c, "T_ts", "5");
    EXPECT_EQ(c.t_ts, 5);
    set_config_value(c, "cap_mode", "poisson");
    EXPECT_EQ(c.cap_mode, CapMode::poisson);
    set_config_value(c, "use_reid", "false");
    EXPECT_FALSE(c.use_reid);
    EXPECT_THROW(set_config_value(c, "eta", "2.0"), InputError);
    EXPECT_THROW(set_config_value(c, "eta", "abc"), InputError);
    EXPECT_THROW(set_config_value(c, "T_ts", "1.5"), InputError);
    EXPECT_THROW(set_config_value(c, "no_such_key", "1"), InputError);
}

TEST(Config, PairsFollowKeyOrderAndRoundTrip) {
    TrackerConfig c = default_config();
    c.eta = 0.85;
    c.t_ts = 7;
    c.cost_mode = CostMode::iou;
    const auto pairs = config_to_pairs(c);
    ASSERT_EQ(pairs.size(), config_keys().size());
    TrackerConfig back = default_config();
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        EXPECT_EQ(pairs[i].first, config_keys()[i]);
        set_config_value(back, pairs[i].first, pairs[i].second);
    }
    EXPECT_EQ(config_to_pairs(back), pairs);
}

TEST(MotionModel, PublishedMatrices) {
    const MotionModel m = build_model(default_config());
    StateCov expected_birth = StateCov::Zero();
    expected_birth.diagonal() << 100, 100, 25, 25, 20, 20;
    EXPECT_EQ(m.P_birth, expected_birth);
    EXPECT_EQ(m.R, (36.0 * MeasCov::Identity()).eval());
    EXPECT_DOUBLE_EQ(m.Q(0, 0), 6.25);
    EXPECT_DOUBLE_EQ(m.Q(1, 1), 6.25);
    EXPECT_DOUBLE_EQ(m.Q(0, 1), 0.0);
    EXPECT_DOUBLE_EQ(m.Q(0, 2), 12.5);
    EXPECT_DOUBLE_EQ(m.Q(2, 2), 25.0);
}

TEST(MotionModel, BlockStructure) {
    TrackerConfig cfg = default_config();
    cfg.delta = 2.0;
    const MotionModel m = build_model(cfg);
    StateCov F = StateCov::Identity();
    F(0, 2) = 2.0;
    F(1, 3) = 2.0;
    EXPECT_EQ(m.F, F);
    for (int r = 0; r < 4; ++r) {
        for (int c = 0; c < 6; ++c) {
            const int selected = r < 2 ? r : r + 2;
            EXPECT_EQ(m.H(r, c), c == selected ? 1.0 : 0.0);
        }
    }
}

TEST(MotionModel, CovariancesAreSymmetricDefinite) {
    const MotionModel m = build_model(default_config());
    EXPECT_TRUE(m.Q.isApprox(m.Q.transpose()));
    Eigen::SelfAdjointEigenSolver<StateCov> q(m.Q);
    EXPECT_GE(q.eigenvalues().minCoeff(), -1e-9);
    Eigen::SelfAdjointEigenSolver<MeasCov> r(m.R);
    EXPECT_GT(r.eigenvalues().minCoeff(), 0.0);
    EXPECT_TRUE(is_symmetric_pd(m.P_birth));
}

TEST(MotionModel, RejectsBadNoise) {
    TrackerConfig cfg = default_config();
    cfg.sigma_r = 0.0;
    EXPECT_THROW(build_model(cfg), InputError);
    cfg = default_config();
    cfg.delta = -1.0;
    EXPECT_THROW(build_model(cfg), InputError);
}

TEST(MotionModel, PredictState) {
    const MotionModel m = build_model(default_config());
    StateVector x;
    x << 0, 0, 1, 1, 10, 20;
    StateVector expected;
    expected << 1, 1, 1, 1, 10, 20;
    EXPECT_EQ(predict_state(x, StateCov::Identity(), m).first, expected);
    x << 5, 5, 2, 0, 10, 20;
    expected << 7, 5, 2, 0, 10, 20;
    EXPECT_EQ(predict_state(x, StateCov::Identity(), m).first, expected);
}

TEST(MotionModel, PredictCovarianceWithoutProcessNoise) {
    MotionModel m = build_model(default_config());
    m.Q.setZero();
    const auto [x, P] = predict_state(StateVector::Zero(), StateCov::Identity(), m);
    EXPECT_TRUE(P.isApprox(m.F * m.F.transpose(), 1e-15));
}
