// Copyright 2026 The nvthermo Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file nlls.hpp
 * @brief Weighted nonlinear least squares (Levenberg-Marquardt) and the
 *        FitReport record shared by every estimator in the toolkit.
 */

#pragma once

#include <Eigen/Dense>

#include <functional>
#include <span>
#include <string>
#include <vector>

namespace nvthermo {

struct FitReport {
    std::vector<std::string> names;
    std::vector<double> params;
    std::vector<double> sigmas;  // one standard deviation
    Eigen::MatrixXd covariance;
    double residualNorm = 0.0;   // sqrt(Σ w·r²)
    double reducedChiSquare = 0.0;
    double gradientNorm = 0.0;   // scaled, see NllsOptions::gtol
    bool converged = false;
    int iterations = 0;
    std::vector<double> residualHistory;  // residual norm after each accepted step, starting point first

    std::size_t index(const std::string& name) const;
    double value(const std::string& name) const { return params[index(name)]; }
    double sigma(const std::string& name) const { return sigmas[index(name)]; }
};

struct NllsModel {
    std::vector<std::string> names;
    std::function<double(double x, std::span<const double> p)> value;
    // Optional analytic gradient ∂f/∂p at x; central differences otherwise.
    std::function<void(double x, std::span<const double> p, std::span<double> grad)> gradient;
    // Optional box bounds; empty means unbounded.
    std::vector<double> lower, upper;

    std::size_t size() const { return names.size(); }
};

struct NllsOptions {
    double xtol = 1e-10;  // relative step: ‖Δp‖ ≤ xtol·(‖p‖ + xtol)
    // Scaled gradient: max_j |(JᵀWr)_j| / (‖J_j‖·‖√W·y‖).
    double gtol = 1e-10;
    int maxIterations = 200;
    // Smallest admissible singular value ratio of the column-normalized
    // Jacobian; raised to 1e-7 when the Jacobian is a finite difference.
    double rankTolerance = 1e-12;
    double initialDamping = 1e-3;
};

/// Minimizes Σ w_i (y_i − f(x_i; p))². Empty @p weights means unit weights.
/// Parameter sigmas come from (JᵀWJ)⁻¹ scaled by the reduced chi-square.
/// Throws RankError when the Jacobian at the solution is rank deficient.
/// Reaching the iteration cap is reported through FitReport::converged.
FitReport nlls_fit(const NllsModel& model, std::span<const double> x, std::span<const double> y,
                   std::span<const double> weights, std::span<const double> initial,
                   const NllsOptions& options = {});

/// Central-difference gradient of @p model at x (test and fallback path).
std::vector<double> numeric_gradient(const NllsModel& model, double x, std::span<const double> p);

}  // namespace nvthermo
