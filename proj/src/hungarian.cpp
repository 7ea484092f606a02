#include "gmphd/hungarian.hpp"

#include "gmphd/errors.hpp"

#include <algorithm>
#include <limits>

namespace gmphd {

namespace {

// Shortest augmenting path with row/column potentials, O(n^3).
// a is 1-indexed internally; returns col assigned to each row.
std::vector<int> solve_square(const Eigen::MatrixXd& a) {
    const int n = static_cast<int>(a.rows());
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0), minv(n + 1);
    std::vector<int> p(n + 1, 0), way(n + 1, 0);
    std::vector<bool> used(n + 1);

    for (int i = 1; i <= n; ++i) {
        p[0] = i;
        int j0 = 0;
        std::fill(minv.begin(), minv.end(), inf);
        std::fill(used.begin(), used.end(), false);
        do {
            used[j0] = true;
            const int i0 = p[j0];
            double delta = inf;
            int j1 = 0;
            for (int j = 1; j <= n; ++j) {
                if (used[j]) continue;
                const double cur = a(i0 - 1, j - 1) - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (int j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            const int j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0 != 0);
    }

    std::vector<int> row_to_col(n, -1);
    for (int j = 1; j <= n; ++j) {
        if (p[j] != 0) row_to_col[p[j] - 1] = j - 1;
    }
    return row_to_col;
}

} // namespace

std::vector<int> solve_min_cost(const Eigen::MatrixXd& cost) {
    const Eigen::Index rows = cost.rows();
    const Eigen::Index cols = cost.cols();
    if (rows == 0 || cols == 0) {
        return std::vector<int>(static_cast<std::size_t>(rows), -1);
    }
    if (!cost.allFinite()) {
        throw InputError("assignment cost matrix has non-finite entries");
    }

    const Eigen::Index n = std::max(rows, cols);
    const double sentinel = cost.cwiseAbs().maxCoeff() * 2.0 + 1.0;
    Eigen::MatrixXd square = Eigen::MatrixXd::Constant(n, n, sentinel);
    square.topLeftCorner(rows, cols) = cost;

    const auto full = solve_square(square);
    std::vector<int> out(static_cast<std::size_t>(rows), -1);
    for (Eigen::Index r = 0; r < rows; ++r) {
        const int c = full[static_cast<std::size_t>(r)];
        if (c >= 0 && c < cols) out[static_cast<std::size_t>(r)] = c;
    }
    return out;
}

} // namespace gmphd
