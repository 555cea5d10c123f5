// Copyright 2026 The nvthermo Authors
// SPDX-License-Identifier: Apache-2.0

#include "nvthermo/extraction.hpp"

#include <algorithm>
#include <cmath>

#include "nvthermo/errors.hpp"

namespace nvthermo {

namespace {

std::size_t target_carbon(const SpinSystem& system, const std::string& nucleus) {
    if (nucleus == "N14") {
        throw DomainError("two-frequency extraction is defined for spin-1/2 13C sites, not N14");
    }
    return system.carbon_index(nucleus);
}

}  // namespace

std::pair<StateLabel, StateLabel> nuclear_transition_labels(const SpinSystem& system,
                                                            const std::string& nucleus, int mS) {
    if (mS != 1 && mS != -1) throw DomainError("manifold must be +1 or -1");
    const std::size_t k = target_carbon(system, nucleus);
    StateLabel up;
    up.mS = mS;
    if (system.includeN) up.mI_N = 1;
    up.mI_C.assign(system.carbons.size(), 0.5);
    StateLabel down = up;
    down.mI_C[k] = -0.5;
    return {up, down};
}

ManifoldFrequencies manifold_frequencies(const SpinSystem& system, const std::string& nucleus) {
    const auto [plusUp, plusDown] = nuclear_transition_labels(system, nucleus, +1);
    const auto [minusUp, minusDown] = nuclear_transition_labels(system, nucleus, -1);
    const EigenDecomposition decomposition = solve(system);
    ManifoldFrequencies out;
    out.nucleus = nucleus;
    out.omegaPlus = transition_frequency(decomposition, plusUp, plusDown);
    out.omegaMinus = transition_frequency(decomposition, minusUp, minusDown);
    return out;
}

double coupling_norm(const Tensor3& A) { return A.row(2).norm(); }

ExtractionResult mean_coupling(const ManifoldFrequencies& freqs, const Tensor3& sourceTensor) {
    if (!std::isfinite(freqs.omegaPlus) || !std::isfinite(freqs.omegaMinus) || freqs.omegaPlus < 0 ||
        freqs.omegaMinus < 0) {
        throw ValidationError("mean_coupling: manifold frequencies must be finite and non-negative");
    }
    if (!sourceTensor.allFinite()) throw ValidationError("mean_coupling: tensor has non-finite entries");
    ExtractionResult out;
    out.mean = 0.5 * (freqs.omegaPlus + freqs.omegaMinus);
    out.couplingNorm = coupling_norm(sourceTensor);
    out.remainder = out.mean - out.couplingNorm;
    return out;
}

ExtractionResult extract(const SpinSystem& system, const std::string& nucleus) {
    const ManifoldFrequencies freqs = manifold_frequencies(system, nucleus);
    return mean_coupling(freqs, system.carbons[system.carbon_index(nucleus)].A);
}

StabilityReport remainder_stability(const SpinSystem& system, const std::string& nucleus,
                                    std::span<const Tensor3> tensors) {
    const std::size_t k = target_carbon(system, nucleus);
    std::vector<SpinSystem> systems(tensors.size(), system);
    for (std::size_t i = 0; i < tensors.size(); ++i) systems[i].carbons[k].A = tensors[i];
    return remainder_stability(systems, nucleus);
}

StabilityReport remainder_stability(std::span<const SpinSystem> systems, const std::string& nucleus) {
    StabilityReport report;
    if (systems.empty()) return report;
    const Eigen::Vector3d field = systems.front().B;
    for (const SpinSystem& system : systems) {
        if (system.B != field) {
            throw ContractError("remainder_stability: bias field changed within the series");
        }
        const ManifoldFrequencies freqs = manifold_frequencies(system, nucleus);
        report.results.push_back(mean_coupling(freqs, system.carbons[system.carbon_index(nucleus)].A));
        report.frequencies.push_back(freqs);
    }
    const auto [lo, hi] = std::minmax_element(report.results.begin(), report.results.end(),
                                              [](const auto& a, const auto& b) { return a.remainder < b.remainder; });
    report.spread = hi->remainder - lo->remainder;
    return report;
}

std::vector<SweepRow> temperature_sweep(const SpinSystem& system, const std::string& nucleus,
                                        const Tensor3& slopePerK, double referenceT,
                                        std::span<const double> temperatures) {
    const std::size_t k = target_carbon(system, nucleus);
    std::vector<SweepRow> rows;
    rows.reserve(temperatures.size());
    for (double T : temperatures) {
        SpinSystem current = system;
        current.carbons[k].A = system.carbons[k].A + (T - referenceT) * slopePerK;
        SweepRow row;
        row.parameter = T;
        row.frequencies = manifold_frequencies(current, nucleus);
        row.result = mean_coupling(row.frequencies, current.carbons[k].A);
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace nvthermo
