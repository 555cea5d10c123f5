// Copyright 2026 The nvthermo Authors
// SPDX-License-Identifier: Apache-2.0

#include "nvthermo/assignment.hpp"

#include <limits>

#include "nvthermo/errors.hpp"

namespace nvthermo {

std::vector<int> max_weight_assignment(const Eigen::MatrixXd& weights) {
    if (weights.rows() != weights.cols()) {
        throw ValidationError("max_weight_assignment: weight matrix must be square");
    }
    const int n = static_cast<int>(weights.rows());
    if (n == 0) return {};

    // Shortest augmenting path with row/column potentials on cost = -weight.
    // Arrays are 1-based; index 0 is the virtual source column.
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
    std::vector<int> match(n + 1, 0), way(n + 1, 0);

    for (int row = 1; row <= n; ++row) {
        match[0] = row;
        int col0 = 0;
        std::vector<double> minv(n + 1, inf);
        std::vector<bool> used(n + 1, false);
        do {
            used[col0] = true;
            const int r = match[col0];
            double delta = inf;
            int col1 = 0;
            for (int c = 1; c <= n; ++c) {
                if (used[c]) continue;
                const double cur = -weights(r - 1, c - 1) - u[r] - v[c];
                if (cur < minv[c]) {
                    minv[c] = cur;
                    way[c] = col0;
                }
                if (minv[c] < delta) {
                    delta = minv[c];
                    col1 = c;
                }
            }
            for (int c = 0; c <= n; ++c) {
                if (used[c]) {
                    u[match[c]] += delta;
                    v[c] -= delta;
                } else {
                    minv[c] -= delta;
                }
            }
            col0 = col1;
        } while (match[col0] != 0);
        do {
            const int col1 = way[col0];
            match[col0] = match[col1];
            col0 = col1;
        } while (col0 != 0);
    }

    std::vector<int> column_of_row(n, -1);
    for (int c = 1; c <= n; ++c) column_of_row[match[c] - 1] = c - 1;
    return column_of_row;
}

}  // namespace nvthermo
