// Copyright 2026 The nvthermo Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file thermo.hpp
 * @brief Temperature dependence of a hyperfine coupling from thermal
 *        expansion (static) and phonon occupation (dynamic) terms:
 *
 *   A(T)    = A(0) + δA_stc(T) + δA_dyn(T)
 *   δA_stc  = c_stc·[a(T)/a(0) − 1]
 *   δA_dyn  = Σ_i c_i·n̄_i(T),   n̄ = 1/(exp(ħω/k_BT) − 1)
 *   A(0)    = A_stc(0) + Σ_i c_i/2
 *
 * First-order mode coefficients b_i are carried through ingestion but do not
 * enter δA_dyn; mode cross terms are not modeled.
 */

#pragma once

#include <span>
#include <utility>
#include <vector>

#include "nvthermo/constants.hpp"

namespace nvthermo {

struct PhononMode {
    int index = 0;
    double energy_meV = 0.0;
    double b = 0.0;  // Hz per coordinate unit
    double c = 0.0;  // Hz per phonon
};

struct PhononModeTable {
    std::vector<PhononMode> modes;

    /// Positive finite energies, finite coefficients, unique indices.
    void validate() const;
    std::size_t size() const { return modes.size(); }
};

/// Relative lattice expansion a(T)/a(0) − 1 tabulated on increasing
/// temperatures and interpolated with a monotone piecewise-cubic Hermite
/// (Fritsch–Carlson) scheme.
class ExpansionTable {
public:
    ExpansionTable() = default;
    ExpansionTable(std::vector<double> temperatures, std::vector<double> expansion);

    double value(double T) const;       // ExtrapolationError outside the table
    double derivative(double T) const;  // per K; DomainError unless strictly interior

    double min_temperature() const { return T_.front(); }
    double max_temperature() const { return T_.back(); }
    bool empty() const { return T_.empty(); }
    const std::vector<double>& temperatures() const { return T_; }
    const std::vector<double>& values() const { return y_; }

private:
    std::size_t cell(double T) const;

    std::vector<double> T_, y_, slope_;
};

struct ThermoModel {
    double aStc0 = 0.0;  // Hz
    double cStc = 0.0;   // Hz per unit relative expansion
    PhononModeTable modes;
    ExpansionTable expansion;
    PhysicalConstants constants;

    void validate() const;
};

/// Mean occupation; exactly 0 at T = 0.
double bose_einstein(double energy_meV, double T, const PhysicalConstants& constants = {});

/// ∂n̄/∂T.
double bose_einstein_dT(double energy_meV, double T, const PhysicalConstants& constants = {});

/// Σ c_i n̄_i(T) with Neumaier compensated summation.
double delta_A_dyn(const PhononModeTable& modes, double T, const PhysicalConstants& constants = {});

double delta_A_stc(const ThermoModel& model, double T);

double a_zero(const ThermoModel& model);
double a_of_T(const ThermoModel& model, double T);

struct TempDerivative {
    double total = 0.0;  // Hz/K
    double stc = 0.0;
    double dyn = 0.0;
};

TempDerivative dA_dT(const ThermoModel& model, double T);

/// Greedy left-to-right clustering by energy: a cluster collects every mode
/// within @p window_meV of its first member. Merged c = Σc, merged energy is
/// the |c|-weighted mean (plain mean when all c vanish), merged b = Σb.
PhononModeTable merge_degenerate_modes(const PhononModeTable& modes, double window_meV = 1.0);

/// Neumaier compensated sum.
double compensated_sum(std::span<const double> values);

}  // namespace nvthermo
