// Copyright 2026 The nvthermo Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file ramsey.hpp
 * @brief Synthetic measurement signals: nuclear Ramsey fringes inside one
 *        electron manifold and pulsed-ODMR spectra.
 *
 * The fringe follows
 *   s(t) = {a·sin(2π·δf·t + φ0) + b}·exp[−(t/T2*)^p] + c
 * with δf the detuning between the exact transition frequency (full
 * Hamiltonian) and the RF carrier. Nuclear initialization is treated as an
 * ideal polarization into mI = +½ scaled by an efficiency factor.
 */

#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "nvthermo/spin_core.hpp"

namespace nvthermo {

struct FringeParams {
    double amplitude = 0.0;  // a, contrast
    double detuning = 0.0;   // δf, Hz
    double phase = 0.0;      // φ0, rad
    double offset = 0.0;     // b, contrast
    double t2star = 1.0;     // s
    double stretch = 1.0;    // p
    double baseline = 0.0;   // c, contrast

    static constexpr std::size_t kCount = 7;
    static const std::array<const char*, kCount>& names();

    std::array<double, kCount> to_array() const;
    static FringeParams from_array(const std::array<double, kCount>& v);

    void validate() const;
};

double fringe_model(double t, const FringeParams& params);

/// ∂s/∂(a, δf, φ0, b, T2*, p, c) at t.
std::array<double, FringeParams::kCount> fringe_gradient(double t, const FringeParams& params);

struct RamseyTrace {
    std::vector<double> times;   // s, strictly increasing
    std::vector<double> signal;  // contrast
    double noiseSigma = 0.0;

    void validate() const;
};

/// Maximum |RF − transition| for which the two-level fringe model is used.
inline constexpr double kRamseyValidityWindow_Hz = 50e3;

struct RamseySettings {
    std::string nucleus;
    int manifold = 1;                 // ±1
    double rfFrequency = 0.0;         // Hz
    std::vector<double> times;        // s
    double t2star = 4e-3;             // s
    double stretch = 1.5;
    double amplitude = 0.1;
    double offset = 0.0;
    double baseline = 0.5;
    double phase = 0.0;               // rad
    double polarization = 1.0;        // efficiency in [0, 1], scales the amplitude
    double noiseSigma = 0.0;
    std::uint64_t seed = 0;
};

/// Exact transition frequency minus the RF carrier. ContractError outside
/// the validity window.
double ramsey_detuning(const SpinSystem& system, const std::string& nucleus, int manifold,
                       double rfFrequency);

/// Fringe parameters the simulator uses for @p settings.
FringeParams ramsey_truth(const SpinSystem& system, const RamseySettings& settings);

/// Simulated trace; Gaussian noise comes from a seeded Mersenne twister so
/// equal seeds give bit-identical traces.
RamseyTrace simulate_ramsey(const SpinSystem& system, const RamseySettings& settings);

/// Evaluates the fringe on a time grid with optional seeded noise.
RamseyTrace synthesize_fringe(const FringeParams& params, const std::vector<double>& times,
                              double noiseSigma, std::uint64_t seed);

std::vector<double> linear_grid(double start, double stop, std::size_t count);

struct OdmrLine {
    double frequency = 0.0;  // Hz
    double weight = 0.0;     // fraction of contrastDepth carried by this line
    StateLabel lower, upper;
};

struct OdmrSpectrum {
    std::vector<double> frequencies;  // Hz
    std::vector<double> signal;       // normalized fluorescence, baseline 1
    std::vector<OdmrLine> lines;
};

/// Electron transitions mS = 0 → ±1 that conserve every nuclear projection.
std::vector<OdmrLine> odmr_lines(const SpinSystem& system);

/// Lorentzian dips (FWHM @p linewidth) at every line, each weighted by one
/// over the number of nuclear states.
OdmrSpectrum simulate_odmr(const SpinSystem& system, const std::vector<double>& mwFrequencies,
                           double linewidth, double contrastDepth);

}  // namespace nvthermo
