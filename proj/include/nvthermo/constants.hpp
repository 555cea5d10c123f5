// Copyright 2026 The nvthermo Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

namespace nvthermo {

// Physical constants used across the toolkit. Every value is overridable
// from the run configuration; the defaults are CODATA 2018 (exact SI values
// for h, k_B and e) and literature gyromagnetic ratios divided by 2π.
//
// Unit conventions: frequencies in Hz, magnetic fields in gauss, phonon
// energies in meV, temperatures in kelvin.
struct PhysicalConstants {
    double planck_Js = 6.62607015e-34;
    double boltzmann_JperK = 1.380649e-23;
    double elementary_charge_C = 1.602176634e-19;
    double gammaE_HzPerG = 2.80249514242e6;  // electron, 28.0249514242 GHz/T
    double gammaN14_HzPerG = 307.7706;       // 14N, 3.077706 MHz/T
    double gammaC13_HzPerG = 1070.8398;      // 13C, 10.708398 MHz/T

    double hbar_Js() const;
    double boltzmann_meVperK() const;

    // Energy <-> frequency through E = h·f.
    double meV_to_Hz(double energy_meV) const;
    double Hz_to_meV(double frequency_Hz) const;

    void validate() const;
};

}  // namespace nvthermo
