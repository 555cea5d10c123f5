// Copyright 2026 The nvthermo Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file extraction.hpp
 * @brief Hyperfine coupling from the mean of the two nuclear transition
 *        frequencies in the mS = +1 and mS = −1 manifolds.
 *
 * For a 13C site k the toolkit reports
 *   ω₊₁ = |E(+1, mI_k = +½) − E(+1, mI_k = −½)|,   ω₋₁ likewise in mS = −1,
 *   mean = (ω₊₁ + ω₋₁)/2,  norm = √(A_zx² + A_zy² + A_zz²),  R = mean − norm.
 * Spectator nuclei stay pinned at mI_N = +1 and mI_C = +½ while the target
 * flips. Frequencies are absolute values; the sign convention of the
 * manifolds is never relied on.
 */

#pragma once

#include <span>
#include <string>
#include <vector>

#include "nvthermo/spin_core.hpp"

namespace nvthermo {

inline constexpr double kDefaultExtractionField_G = 20.0;

struct ManifoldFrequencies {
    double omegaPlus = 0.0;   // Hz, inside mS = +1
    double omegaMinus = 0.0;  // Hz, inside mS = -1
    std::string nucleus;
};

struct ExtractionResult {
    double mean = 0.0;          // Hz
    double couplingNorm = 0.0;  // Hz
    double remainder = 0.0;     // Hz, mean - couplingNorm
};

/// Labels of the two states whose splitting is the target nuclear transition
/// inside manifold @p mS (±1).
std::pair<StateLabel, StateLabel> nuclear_transition_labels(const SpinSystem& system,
                                                            const std::string& nucleus, int mS);

/// Only 13C sites are supported: the two-frequency mean is defined for
/// spin-½ nuclei. Unknown labels raise LookupError, "N14" raises DomainError.
ManifoldFrequencies manifold_frequencies(const SpinSystem& system, const std::string& nucleus);

/// √(A_zx² + A_zy² + A_zz²)
double coupling_norm(const Tensor3& A);

ExtractionResult mean_coupling(const ManifoldFrequencies& freqs, const Tensor3& sourceTensor);

/// Full pipeline for one system: frequencies, mean and remainder.
ExtractionResult extract(const SpinSystem& system, const std::string& nucleus);

struct StabilityReport {
    std::vector<ManifoldFrequencies> frequencies;
    std::vector<ExtractionResult> results;
    double spread = 0.0;  // max(R) - min(R), Hz
};

/// Replaces the tensor of @p nucleus by each entry of @p tensors in turn
/// (fixed field) and reports R for each.
StabilityReport remainder_stability(const SpinSystem& system, const std::string& nucleus,
                                    std::span<const Tensor3> tensors);

/// Same over a list of complete systems. Every system must share the field of
/// the first one exactly; otherwise ContractError.
StabilityReport remainder_stability(std::span<const SpinSystem> systems, const std::string& nucleus);

inline double rf_to_absolute(double rfFrequency, double detuning) { return rfFrequency + detuning; }

struct SweepRow {
    double parameter = 0.0;  // temperature (K) or other sweep coordinate
    ManifoldFrequencies frequencies;
    ExtractionResult result;
};

/// Temperature sweep with a linearly drifting tensor:
/// A(T) = reference + (T − referenceT)·slope.
std::vector<SweepRow> temperature_sweep(const SpinSystem& system, const std::string& nucleus,
                                        const Tensor3& slopePerK, double referenceT,
                                        std::span<const double> temperatures);

}  // namespace nvthermo
