// Copyright 2026 The nvthermo Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>

#include <vector>

namespace nvthermo {

// Maximum-weight perfect matching on a square weight matrix (Hungarian
// algorithm, O(n³)). Returns column[row].
std::vector<int> max_weight_assignment(const Eigen::MatrixXd& weights);

}  // namespace nvthermo
