#include "gmphd/types.hpp"

#include "gmphd/errors.hpp"

#include <cmath>
#include <numeric>

namespace gmphd {

Box Box::from_top_left(const TopLeftBox& b) {
    if (!(b.width > 0.0) || !(b.height > 0.0)) {
        throw InputError("box width and height must be positive");
    }
    return {b.left + b.width / 2.0, b.top + b.height / 2.0, b.width, b.height};
}

TopLeftBox Box::to_top_left() const {
    return {cx - w / 2.0, cy - h / 2.0, w, h};
}

AppearanceFeature::AppearanceFeature(Eigen::VectorXf values) : values_(std::move(values)) {
    if (values_.size() == 0) {
        throw InputError("appearance feature is empty");
    }
    if (!values_.allFinite()) {
        throw InputError("appearance feature has non-finite entries");
    }
    if (values_.squaredNorm() == 0.0f) {
        throw InputError("appearance feature is the zero vector");
    }
}

AppearanceFeature AppearanceFeature::from(std::span<const float> values) {
    Eigen::VectorXf v(static_cast<Eigen::Index>(values.size()));
    for (std::size_t i = 0; i < values.size(); ++i) {
        v(static_cast<Eigen::Index>(i)) = values[i];
    }
    return AppearanceFeature(std::move(v));
}

AppearanceFeature AppearanceFeature::normalized() const {
    return AppearanceFeature(values_ / values_.norm());
}

double Intensity::mass() const {
    return std::accumulate(components.begin(), components.end(), 0.0,
                           [](double acc, const GaussianComponent& c) { return acc + c.weight; });
}

bool is_symmetric_pd(const StateCov& P, double tol) {
    if (!P.allFinite()) {
        return false;
    }
    if ((P - P.transpose()).cwiseAbs().maxCoeff() > tol) {
        return false;
    }
    Eigen::SelfAdjointEigenSolver<StateCov> eig(P, Eigen::EigenvaluesOnly);
    return eig.info() == Eigen::Success && eig.eigenvalues().minCoeff() > 0.0;
}

} // namespace gmphd
