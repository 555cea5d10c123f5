// Copyright 2026 The nvthermo Authors
// SPDX-License-Identifier: Apache-2.0

#include "nvthermo/constants.hpp"

#include <cmath>
#include <numbers>

#include "nvthermo/errors.hpp"

namespace nvthermo {

double PhysicalConstants::hbar_Js() const { return planck_Js / (2.0 * std::numbers::pi); }

double PhysicalConstants::boltzmann_meVperK() const {
    return boltzmann_JperK / elementary_charge_C * 1e3;
}

double PhysicalConstants::meV_to_Hz(double energy_meV) const {
    return energy_meV * 1e-3 * elementary_charge_C / planck_Js;
}

double PhysicalConstants::Hz_to_meV(double frequency_Hz) const {
    return frequency_Hz * planck_Js / elementary_charge_C * 1e3;
}

void PhysicalConstants::validate() const {
    const double positive[] = {planck_Js, boltzmann_JperK, elementary_charge_C};
    for (double v : positive) {
        if (!std::isfinite(v) || v <= 0.0) {
            throw ValidationError("physical constants: h, k_B and e must be positive and finite");
        }
    }
    const double gammas[] = {gammaE_HzPerG, gammaN14_HzPerG, gammaC13_HzPerG};
    for (double g : gammas) {
        if (!std::isfinite(g)) throw ValidationError("physical constants: gyromagnetic ratio is not finite");
    }
}

}  // namespace nvthermo
