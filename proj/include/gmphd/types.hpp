#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace gmphd {

/// [cx, cy, vx, vy, w, h]: box center, velocity (pixels/frame) and size.
using StateVector = Eigen::Matrix<double, 6, 1>;
using StateCov = Eigen::Matrix<double, 6, 6>;
/// [cx, cy, w, h]
using MeasVector = Eigen::Matrix<double, 4, 1>;
using MeasCov = Eigen::Matrix<double, 4, 4>;

namespace idx {
inline constexpr int cx = 0;
inline constexpr int cy = 1;
inline constexpr int vx = 2;
inline constexpr int vy = 3;
inline constexpr int w = 4;
inline constexpr int h = 5;
} // namespace idx

/// Axis-aligned box in MOTChallenge layout (top-left corner + size).
struct TopLeftBox {
    double left = 0.0;
    double top = 0.0;
    double width = 0.0;
    double height = 0.0;

    bool operator==(const TopLeftBox&) const = default;
};

/// Center-based box. All filter and association code works in this form.
struct Box {
    double cx = 0.0;
    double cy = 0.0;
    double w = 0.0;
    double h = 0.0;

    /// Throws InputError unless width and height are positive.
    static Box from_top_left(const TopLeftBox& b);
    TopLeftBox to_top_left() const;

    MeasVector vec() const { return {cx, cy, w, h}; }
    static Box from_vec(const MeasVector& z) { return {z(0), z(1), z(2), z(3)}; }
    static Box from_state(const StateVector& x) { return {x(idx::cx), x(idx::cy), x(idx::w), x(idx::h)}; }

    bool operator==(const Box&) const = default;
};

/// Run-wide fixed-dimension appearance embedding. Never the zero vector.
class AppearanceFeature {
public:
    /// Throws InputError on empty, zero or non-finite input.
    explicit AppearanceFeature(Eigen::VectorXf values);
    static AppearanceFeature from(std::span<const float> values);

    const Eigen::VectorXf& values() const { return values_; }
    int dimension() const { return static_cast<int>(values_.size()); }
    float norm() const { return values_.norm(); }
    /// Copy scaled to unit L2 norm.
    AppearanceFeature normalized() const;

private:
    Eigen::VectorXf values_;
};

using OptFeature = std::optional<AppearanceFeature>;

struct Detection {
    Box box;
    double score = 1.0;
    OptFeature feature;
};

struct GaussianComponent {
    double weight = 0.0;
    StateVector mean = StateVector::Zero();
    StateCov cov = StateCov::Identity();
    OptFeature feature;
    /// Confidence of the detection that last updated this component.
    double score = 1.0;
    /// Set on components born in the current frame; cleared by the update.
    bool fresh_birth = false;
};

struct Intensity {
    std::vector<GaussianComponent> components;

    double mass() const;
    std::size_t size() const { return components.size(); }
    bool empty() const { return components.empty(); }
};

struct FrameContext {
    int frame_index = 1;
    double width = 1920.0;
    double height = 1080.0;

    double area() const { return width * height; }
};

/// Symmetric within `tol` and all eigenvalues strictly positive.
bool is_symmetric_pd(const StateCov& P, double tol = 1e-9);

inline StateCov symmetrized(const StateCov& P) { return 0.5 * (P + P.transpose()); }

} // namespace gmphd
