#pragma once

#include "gmphd/types.hpp"

#include <random>

namespace gmphd::test_support {

/// Random symmetric positive definite covariance with eigenvalues in [0.5, 60].
inline StateCov random_spd(std::mt19937_64& rng) {
    std::normal_distribution<double> n01(0.0, 1.0);
    std::uniform_real_distribution<double> eig(0.5, 60.0);
    StateCov A;
    for (int i = 0; i < 36; ++i) A.data()[i] = n01(rng);
    const Eigen::HouseholderQR<StateCov> qr(A);
    const StateCov Q = qr.householderQ();
    Eigen::Matrix<double, 6, 1> d;
    for (int i = 0; i < 6; ++i) d(i) = eig(rng);
    return symmetrized(Q * d.asDiagonal() * Q.transpose());
}

/// Components clustered around a few centers, with weights spanning several
/// orders of magnitude.
inline Intensity random_intensity(std::mt19937_64& rng, int max_components = 30) {
    std::uniform_int_distribution<int> count(0, max_components);
    std::uniform_int_distribution<int> clusters(1, 5);
    std::uniform_real_distribution<double> center(0.0, 1000.0), log_w(-8.0, 0.0);
    std::normal_distribution<double> jitter(0.0, 3.0);
    const int n = count(rng);
    std::vector<StateVector> centers(static_cast<std::size_t>(clusters(rng)));
    for (auto& c : centers) {
        for (int i = 0; i < 6; ++i) c(i) = center(rng);
    }
    std::uniform_int_distribution<std::size_t> pick(0, centers.size() - 1);
    Intensity out;
    for (int i = 0; i < n; ++i) {
        GaussianComponent g;
        g.weight = std::pow(10.0, log_w(rng));
        g.mean = centers[pick(rng)];
        for (int k = 0; k < 6; ++k) g.mean(k) += jitter(rng);
        g.cov = random_spd(rng);
        out.components.push_back(g);
    }
    return out;
}

} // namespace gmphd::test_support
