// Copyright 2026 The nvthermo Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file config.hpp
 * @brief JSON run configuration. Keys carry their unit as a suffix
 *        (D_Hz, B_G, T2star_s, ...). Unknown keys are rejected with the
 *        JSON path of the offending entry.
 *
 * {
 *   "constants":  { "planck_Js", "boltzmann_JperK", "elementary_charge_C",
 *                   "gammaE_HzPerG", "gammaN14_HzPerG", "gammaC13_HzPerG" },
 *   "system":     { "D_Hz", "P_Hz", "B_G": [x, y, z],
 *                   "N14": { "axial_Hz", "transverse_Hz" } | { "tensor_Hz": 3x3 },
 *                   "carbons": [ { "label", "tensor_Hz": 3x3 } ] },
 *   "simulation": { "seed",
 *                   "ramsey": { "nucleus", "manifold", "rf_Hz", "t_start_s", "t_stop_s",
 *                               "samples", "T2star_s", "p", "a", "b", "c", "phi0_rad",
 *                               "polarization", "noise_sigma" },
 *                   "odmr":   { "f_start_Hz", "f_stop_Hz", "samples", "linewidth_Hz", "depth" } },
 *   "extract":    { "nucleus", "reference_T_K", "slope_HzPerK": 3x3, "temperatures_K": [...] },
 *   "thermo":     { "aStc0_Hz", "cStc_Hz", "T_start_K", "T_stop_K", "T_step_K",
 *                   "derivative_T_K", "merge_window_meV" },
 *   "paths":      { "measurements", "modes", "expansion", "trace" }
 * }
 *
 * Relative paths are resolved against the directory of the config file.
 */

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "nvthermo/constants.hpp"
#include "nvthermo/ramsey.hpp"
#include "nvthermo/spin_core.hpp"

namespace nvthermo {

struct OdmrSettings {
    double fStart = 2.80e9;
    double fStop = 2.94e9;
    std::size_t samples = 2001;
    double linewidth = 1e6;
    double depth = 0.1;
};

struct ExtractSettings {
    std::string nucleus;
    double referenceT = 300.0;
    Tensor3 slopePerK = Tensor3::Zero();
    std::vector<double> temperatures;
};

struct ThermoSettings {
    double aStc0 = 0.0;
    double cStc = 0.0;
    double TStart = 0.0, TStop = 600.0, TStep = 10.0;
    double derivativeT = 300.0;
    std::optional<double> mergeWindow_meV;
};

struct RunPaths {
    std::string measurements, modes, expansion, trace;
};

struct RunConfig {
    PhysicalConstants constants;
    SpinSystem system;
    std::uint64_t seed = 0;
    std::optional<RamseySettings> ramsey;  // times filled from the grid keys
    std::optional<OdmrSettings> odmr;
    std::optional<ExtractSettings> extract;
    std::optional<ThermoSettings> thermo;
    RunPaths paths;
    std::string baseDirectory;  // directory of the config file, for relative paths

    std::string resolve(const std::string& path) const;
};

/// Parses a configuration document; @p source names it in diagnostics and
/// @p baseDirectory anchors relative paths.
RunConfig parse_config_text(const std::string& text, const std::string& source, const std::string& baseDirectory);
RunConfig load_config(const std::string& path);

/// The system block as JSON text (round-trips through parse_system_json).
std::string system_to_json(const SpinSystem& system, int indent = 2);
SpinSystem parse_system_json(const std::string& text, const PhysicalConstants& constants = {});

}  // namespace nvthermo
