// Copyright 2026 The nvthermo Authors
// SPDX-License-Identifier: Apache-2.0

#include "nvthermo/ramsey.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "nvthermo/errors.hpp"
#include "nvthermo/extraction.hpp"

namespace nvthermo {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

const std::array<const char*, FringeParams::kCount>& FringeParams::names() {
    static const std::array<const char*, kCount> n = {"a", "detuning_Hz", "phi0_rad", "b",
                                                      "T2star_s", "p", "c"};
    return n;
}

std::array<double, FringeParams::kCount> FringeParams::to_array() const {
    return {amplitude, detuning, phase, offset, t2star, stretch, baseline};
}

FringeParams FringeParams::from_array(const std::array<double, kCount>& v) {
    return FringeParams{v[0], v[1], v[2], v[3], v[4], v[5], v[6]};
}

void FringeParams::validate() const {
    for (double v : to_array()) {
        if (!std::isfinite(v)) throw ValidationError("fringe parameters must be finite");
    }
    if (t2star <= 0) throw ValidationError("fringe parameters: T2* must be positive");
    if (stretch <= 0) throw ValidationError("fringe parameters: stretch exponent p must be positive");
    if (amplitude < 0) throw ValidationError("fringe parameters: amplitude must be non-negative");
}

double fringe_model(double t, const FringeParams& p) {
    const double envelope = std::exp(-std::pow(t / p.t2star, p.stretch));
    return (p.amplitude * std::sin(kTwoPi * p.detuning * t + p.phase) + p.offset) * envelope + p.baseline;
}

std::array<double, FringeParams::kCount> fringe_gradient(double t, const FringeParams& p) {
    const double arg = kTwoPi * p.detuning * t + p.phase;
    const double s = std::sin(arg), c = std::cos(arg);
    const double u = t / p.t2star;
    const double up = u > 0 ? std::pow(u, p.stretch) : 0.0;
    const double envelope = std::exp(-up);
    const double osc = p.amplitude * s + p.offset;
    // d env/dT2* = env · p·u^p / T2*,  d env/dp = −env · u^p·ln u
    const double dEnvdT2 = envelope * p.stretch * up / p.t2star;
    const double dEnvdp = u > 0 ? -envelope * up * std::log(u) : 0.0;
    return {
        s * envelope,
        p.amplitude * c * kTwoPi * t * envelope,
        p.amplitude * c * envelope,
        envelope,
        osc * dEnvdT2,
        osc * dEnvdp,
        1.0,
    };
}

void RamseyTrace::validate() const {
    if (times.empty()) throw ValidationError("Ramsey trace: no samples");
    if (times.size() != signal.size()) throw ValidationError("Ramsey trace: times and signal differ in length");
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (!std::isfinite(times[i]) || !std::isfinite(signal[i])) {
            throw ValidationError("Ramsey trace: non-finite sample at index " + std::to_string(i));
        }
        if (i > 0 && !(times[i] > times[i - 1])) {
            throw ValidationError("Ramsey trace: times must be strictly increasing (index " +
                                  std::to_string(i) + ")");
        }
    }
    if (!(noiseSigma >= 0)) throw ValidationError("Ramsey trace: noise sigma must be non-negative");
}

double ramsey_detuning(const SpinSystem& system, const std::string& nucleus, int manifold,
                       double rfFrequency) {
    if (manifold != 1 && manifold != -1) throw DomainError("Ramsey manifold must be +1 or -1");
    const ManifoldFrequencies freqs = manifold_frequencies(system, nucleus);
    const double transition = manifold == 1 ? freqs.omegaPlus : freqs.omegaMinus;
    const double detuning = transition - rfFrequency;
    if (!(std::abs(detuning) <= kRamseyValidityWindow_Hz)) {
        std::ostringstream msg;
        msg << "simulate_ramsey: RF " << rfFrequency << " Hz is " << detuning
            << " Hz from the transition at " << transition
            << " Hz, outside the two-level validity window of +/-" << kRamseyValidityWindow_Hz << " Hz";
        throw ContractError(msg.str());
    }
    return detuning;
}

FringeParams ramsey_truth(const SpinSystem& system, const RamseySettings& settings) {
    if (!(settings.polarization >= 0.0 && settings.polarization <= 1.0)) {
        throw ValidationError("simulate_ramsey: polarization efficiency must lie in [0, 1]");
    }
    FringeParams params;
    params.amplitude = settings.amplitude * settings.polarization;
    params.detuning = ramsey_detuning(system, settings.nucleus, settings.manifold, settings.rfFrequency);
    params.phase = settings.phase;
    params.offset = settings.offset;
    params.t2star = settings.t2star;
    params.stretch = settings.stretch;
    params.baseline = settings.baseline;
    params.validate();
    return params;
}

RamseyTrace synthesize_fringe(const FringeParams& params, const std::vector<double>& times,
                              double noiseSigma, std::uint64_t seed) {
    params.validate();
    if (!(noiseSigma >= 0)) throw ValidationError("noise sigma must be non-negative");
    RamseyTrace trace;
    trace.times = times;
    trace.noiseSigma = noiseSigma;
    trace.signal.reserve(times.size());
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (double t : times) {
        double v = fringe_model(t, params);
        if (noiseSigma > 0) v += noiseSigma * gauss(rng);
        trace.signal.push_back(v);
    }
    trace.validate();
    return trace;
}

RamseyTrace simulate_ramsey(const SpinSystem& system, const RamseySettings& settings) {
    return synthesize_fringe(ramsey_truth(system, settings), settings.times, settings.noiseSigma,
                             settings.seed);
}

std::vector<double> linear_grid(double start, double stop, std::size_t count) {
    if (count == 0) return {};
    if (count == 1) return {start};
    std::vector<double> grid(count);
    const double step = (stop - start) / static_cast<double>(count - 1);
    for (std::size_t i = 0; i < count; ++i) grid[i] = start + step * static_cast<double>(i);
    grid.back() = stop;
    return grid;
}

std::vector<OdmrLine> odmr_lines(const SpinSystem& system) {
    const EigenDecomposition decomposition = solve(system);
    const double weight = 1.0 / static_cast<double>(system.nuclear_dimension());
    std::vector<OdmrLine> lines;
    for (std::size_t i = 0; i < decomposition.size(); ++i) {
        const StateLabel& lower = decomposition.labels[i];
        if (lower.mS != 0) continue;
        for (int target : {1, -1}) {
            StateLabel upper = lower;
            upper.mS = target;
            const std::size_t j = decomposition.index_of(upper);
            OdmrLine line;
            line.frequency = std::abs(decomposition.eigenvalues(static_cast<Eigen::Index>(j)) -
                                      decomposition.eigenvalues(static_cast<Eigen::Index>(i)));
            line.weight = weight;
            line.lower = lower;
            line.upper = decomposition.labels[j];
            lines.push_back(std::move(line));
        }
    }
    return lines;
}

OdmrSpectrum simulate_odmr(const SpinSystem& system, const std::vector<double>& mwFrequencies,
                           double linewidth, double contrastDepth) {
    if (mwFrequencies.empty()) throw ValidationError("simulate_odmr: empty frequency grid");
    if (!(linewidth > 0)) throw ValidationError("simulate_odmr: linewidth must be positive");
    if (!std::isfinite(contrastDepth)) throw ValidationError("simulate_odmr: contrast depth must be finite");
    OdmrSpectrum spectrum;
    spectrum.frequencies = mwFrequencies;
    spectrum.lines = odmr_lines(system);
    const double hwhm2 = 0.25 * linewidth * linewidth;
    spectrum.signal.reserve(mwFrequencies.size());
    for (double f : mwFrequencies) {
        double dip = 0.0;
        for (const OdmrLine& line : spectrum.lines) {
            const double d = f - line.frequency;
            dip += line.weight * hwhm2 / (d * d + hwhm2);
        }
        spectrum.signal.push_back(1.0 - contrastDepth * dip);
    }
    return spectrum;
}

}  // namespace nvthermo
