// Copyright 2026 The nvthermo Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file fitting.hpp
 * @brief Estimators built on the NLLS engine and closed-form regressions:
 *        Ramsey fringe fits, weighted temperature-coefficient lines,
 *        cross-NV averaging, phonon-mode polynomials, proportional fits and
 *        ODMR dip centers.
 */

#pragma once

#include <span>
#include <vector>

#include "nvthermo/constants.hpp"
#include "nvthermo/nlls.hpp"
#include "nvthermo/ramsey.hpp"

namespace nvthermo {

// --- Ramsey fringes ---------------------------------------------------------

inline constexpr double kStretchLower = 0.5;
inline constexpr double kStretchUpper = 3.0;

NllsModel fringe_nlls_model();

/// Frequency of the dominant periodogram peak above 1/span, refined between
/// grid points. Works on non-uniform time grids.
double dominant_frequency(const RamseyTrace& trace);

/// Detuning from the periodogram peak, baseline from the trace mean,
/// amplitude from half the peak-to-peak range.
FringeParams fringe_initial_guess(const RamseyTrace& trace);

/// Seven-parameter fit of the fringe model. With no guess the automatic
/// pipeline above is used. RankError for traces without an oscillation.
FitReport fit_fringe(const RamseyTrace& trace);
FitReport fit_fringe(const RamseyTrace& trace, const FringeParams& initialGuess);

FringeParams fringe_params(const FitReport& report);

/// Linearized one-sigma uncertainty of δf for unit white noise on @p times
/// at the parameter point @p truth. Scale by the noise sigma to predict the
/// fit sigma.
double detuning_sigma_per_unit_noise(const FringeParams& truth, std::span<const double> times);

// --- Temperature coefficients ----------------------------------------------

struct TempPoint {
    double T = 0.0;      // K
    double value = 0.0;  // Hz
    double sigma = 0.0;  // Hz
};

using TempSeries = std::vector<TempPoint>;

/// Inverse-variance weighted straight line value = intercept + slope·T.
/// Sigmas are the absolute-weight covariance sqrt(S/Δ), sqrt(Sxx/Δ); the
/// reduced chi-square is reported alongside. Parameters are named
/// "slope" (Hz/K) and "intercept" (Hz, at T = 0).
FitReport fit_line_weighted(const TempSeries& series);

struct WeightedMean {
    double mean = 0.0;
    double sigma = 0.0;
};

enum class Averaging { InverseVariance, Plain };

/// Inverse-variance mean with standard error 1/sqrt(Σ 1/σ²), or the plain
/// arithmetic mean with propagated error sqrt(Σσ²)/n.
WeightedMean weighted_mean(std::span<const double> values, std::span<const double> sigmas,
                           Averaging mode = Averaging::InverseVariance);

// --- First-principles post-processing --------------------------------------

struct ModeSample {
    double X = 0.0;  // canonical coordinate, amu^1/2·Å
    double A = 0.0;  // Hz
};

struct ModeCoefficients {
    double a0 = 0.0;  // fitted A at X = 0, Hz
    double b = 0.0;   // Hz per amu^1/2·Å
    double c = 0.0;   // Hz, per-phonon contribution
    double sigmaB = 0.0, sigmaC = 0.0;
};

/// (ω/ħ)·X² in SI for X in amu^1/2·Å and ω = 2π·frequency.
double mode_quadratic_factor(double X, double frequency_Hz, const PhysicalConstants& constants = {});

/// Least squares A(X) = a0 + b·X + c·(ω/ħ)·X². Needs three distinct X.
ModeCoefficients fit_mode_polynomial(std::span<const ModeSample> samples, double frequency_Hz,
                                     const PhysicalConstants& constants = {});

struct ProportionalFit {
    double slope = 0.0;  // Hz per unit relative expansion
    double sigma = 0.0;
    double relativeResidual = 0.0;  // ‖y − slope·x‖ / ‖y‖
};

/// Through-origin least squares y = slope·x.
ProportionalFit fit_proportional(std::span<const double> x, std::span<const double> y);

// --- ODMR ---------------------------------------------------------------------

/// Fits 1 − Σ_k d_k·(Γ_k/2)²/((f − f_k)² + (Γ_k/2)²) with one (f_k, d_k, Γ_k)
/// triple per guessed center. Parameters are named center<k>, depth<k>,
/// width<k>.
FitReport fit_odmr_dips(std::span<const double> frequencies, std::span<const double> signal,
                        std::span<const double> centerGuesses, double widthGuess);

}  // namespace nvthermo
