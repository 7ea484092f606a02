#pragma once

#include <Eigen/Dense>

#include <vector>

namespace gmphd {

/// Minimum-cost assignment on a rectangular matrix.
///
/// Returns, for each row, the assigned column or -1. Exactly min(rows, cols)
/// rows are assigned. Non-square input is padded to square with a constant
/// sentinel above every entry, so padded pairs never displace real ones.
/// Throws InputError on non-finite entries.
std::vector<int> solve_min_cost(const Eigen::MatrixXd& cost);

} // namespace gmphd
