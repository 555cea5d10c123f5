// Copyright 2026 The nvthermo Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file demo.hpp
 * @brief Synthetic demo inputs: an NV with the 14N and one strongly coupled
 *        13C at 20 G, Ramsey settings, mode/expansion tables calibrated to
 *        measured 300 K coefficients, and noisy temperature series.
 *
 * Every generator is a pure function of its seed. Random numbers come from
 * std::mt19937_64 with explicit bit-to-double mapping so the output does not
 * depend on the standard library's distribution implementations.
 */

#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "nvthermo/ramsey.hpp"
#include "nvthermo/spin_core.hpp"
#include "nvthermo/tables.hpp"
#include "nvthermo/thermo.hpp"

namespace nvthermo {

inline constexpr const char* kDemoCarbon = "C13-2";
inline constexpr double kDemoField_G = 20.0;
inline constexpr double kDemoDetuning_Hz = 1203.5;
inline constexpr double kDemoDetuningSigma_Hz = 2.8;
inline constexpr std::uint64_t kDemoSeed = 20260101;

/// Deterministic uniform/normal variates on top of mt19937_64.
class DemoRng {
public:
    explicit DemoRng(std::uint64_t seed);
    double uniform();                     // [0, 1)
    double uniform(double lo, double hi);
    double normal();                      // Box-Muller

private:
    std::mt19937_64 engine_;
};

/// Demo carbon tensor (Hz) at the 300 K reference.
Tensor3 demo_carbon_tensor();

/// 20 G axial field, 14N with A∥ = −2.14 MHz, A⊥ = −2.70 MHz, and the demo carbon.
SpinSystem demo_system();

/// Ramsey settings on the demo carbon's mS = +1 transition with the RF
/// placed kDemoDetuning_Hz below it and noise calibrated to a detuning sigma
/// of kDemoDetuningSigma_Hz.
RamseySettings demo_ramsey_settings(const SpinSystem& system, std::uint64_t seed = kDemoSeed);

/// 1530 modes in 510 near-degenerate triplets (±0.1 meV) between 20 and
/// 165 meV. c values are positive and O(1) Hz before calibration, weighted
/// by (E/100 meV)² toward the optical branch.
PhononModeTable demo_mode_table(std::uint64_t seed);

/// Relative lattice expansion from a Debye-model expansion coefficient
/// (θ = 1860 K, α(300 K) = 1e-6/K) tabulated every 8 K from 0 to 1000 K.
ExpansionTable demo_expansion_table();

struct ThermoDemo {
    std::string name;       // file stem, e.g. "c13-2"
    std::string nucleus;    // site label
    double target = 0.0;    // dA/dT at 300 K, Hz/K
    double dynFraction = 0.0;
    ThermoModel model;
};

/// Models whose dA/dT(300 K) equals the measured coefficients 110.9 (13C(2)),
/// 194.9 (14N hyperfine) and 35.0 Hz/K (14N quadrupole). A_stc(0) absorbs
/// the zero-point term so A(0) equals the nominal coupling.
std::vector<ThermoDemo> demo_thermo_models();

/// Drift tensor (Hz/K) acting on A_zz alone with d‖A_z‖/dT = @p normSlope to
/// first order. Drifting the transverse entries too would move R at second
/// order (about 2R/A per unit relative change).
Tensor3 demo_slope_tensor(const Tensor3& A, double normSlope);

/// Scales c_i and c_stc of @p model so that dA/dT(T) == target with the
/// dynamic share @p dynFraction.
void calibrate_thermo_model(ThermoModel& model, double T, double target, double dynFraction);

/// Two NVs per nucleus, 295–320 K in 5 K steps. Carbon rows go through the
/// full Hamiltonian with A_zz drifting so the coupling norm moves at
/// 110.9 Hz/K; 14N rows carry a pair centered on |A∥| drifting at 194.9 Hz/K.
std::vector<MeasurementRecord> demo_measurements(std::uint64_t seed = kDemoSeed);

/// Writes config.json, thermo_*.json and the CSV inputs into @p directory.
/// Returns the list of files written.
std::vector<std::string> write_demo_assets(const std::string& directory);

}  // namespace nvthermo
