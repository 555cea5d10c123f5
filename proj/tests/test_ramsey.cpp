// Copyright 2026 The nvthermo Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "nvthermo/errors.hpp"
#include "nvthermo/extraction.hpp"
#include "nvthermo/ramsey.hpp"
#include "test_util.hpp"

using namespace nvthermo;

namespace {

constexpr double kPi = std::numbers::pi;

FringeParams demo_params() {
    FringeParams p;
    p.amplitude = 0.1;
    p.detuning = 1203.5;
    p.phase = 0.3;
    p.offset = 0.02;
    p.t2star = 4e-3;
    p.stretch = 1.5;
    p.baseline = 0.5;
    return p;
}

RamseySettings settings_for(const SpinSystem& s, double detuning) {
    RamseySettings r;
    r.nucleus = "C13-2";
    r.manifold = 1;
    r.rfFrequency = manifold_frequencies(s, "C13-2").omegaPlus - detuning;
    r.times = linear_grid(0.0, 6e-3, 241);
    r.phase = 0.3;
    return r;
}

std::vector<double> local_minima(const OdmrSpectrum& sp) {
    std::vector<double> out;
    for (std::size_t i = 1; i + 1 < sp.signal.size(); ++i) {
        if (sp.signal[i] < sp.signal[i - 1] && sp.signal[i] <= sp.signal[i + 1]) out.push_back(sp.frequencies[i]);
    }
    return out;
}

}  // namespace

TEST_CASE("fringe model: limits and an independent evaluation") {
    const FringeParams p = demo_params();
    CHECK(fringe_model(0.0, p) == doctest::Approx(p.amplitude * std::sin(p.phase) + p.offset + p.baseline).epsilon(1e-15));
    CHECK(fringe_model(1.0, p) == doctest::Approx(p.baseline).epsilon(1e-15));
    const double t = 1.0 / (2.0 * 1203.5);
    // sin(π + φ0) = −sin φ0
    const double expected =
        (-p.amplitude * std::sin(p.phase) + p.offset) * std::exp(-std::pow(t / p.t2star, p.stretch)) + p.baseline;
    CHECK(fringe_model(t, p) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("fringe params validation") {
    FringeParams p = demo_params();
    p.t2star = 0.0;
    CHECK_THROWS_AS(p.validate(), ValidationError);
    p = demo_params();
    p.stretch = -1.0;
    CHECK_THROWS_AS(p.validate(), ValidationError);
    p = demo_params();
    p.amplitude = -0.1;
    CHECK_THROWS_AS(p.validate(), ValidationError);
    CHECK(FringeParams::from_array(demo_params().to_array()).detuning == 1203.5);
}

TEST_CASE("simulate_ramsey: zero detuning shows no oscillation") {
    const SpinSystem s = testutil::carbon_system(20.0, true);
    RamseySettings r = settings_for(s, 0.0);
    const RamseyTrace tr = simulate_ramsey(s, r);
    const FringeParams truth = ramsey_truth(s, r);
    CHECK(truth.detuning == 0.0);
    for (std::size_t i = 0; i < tr.times.size(); ++i) {
        const double env = std::exp(-std::pow(tr.times[i] / r.t2star, r.stretch));
        CHECK(tr.signal[i] == doctest::Approx((r.amplitude * std::sin(r.phase) + r.offset) * env + r.baseline).epsilon(1e-14));
    }
}

TEST_CASE("simulate_ramsey: periodogram peak at the detuning") {
    const SpinSystem s = testutil::carbon_system(20.0, true);
    const RamseyTrace tr = simulate_ramsey(s, settings_for(s, 1203.5));
    const double span = tr.times.back() - tr.times.front();
    const double bin = 1.0 / span;
    double best = 0.0, bestF = 0.0;
    for (double f = bin; f < 20000.0; f += bin / 20) {
        const double p = oracle::periodogram(tr.times, tr.signal, f);
        if (p > best) {
            best = p;
            bestF = f;
        }
    }
    CHECK(std::abs(bestF - 1203.5) <= bin);
}

TEST_CASE("simulate_ramsey: degenerate envelope is a pure sinusoid") {
    const SpinSystem s = testutil::carbon_system(20.0, true);
    RamseySettings r = settings_for(s, 1203.5);
    r.stretch = 1.0;
    r.t2star = 1e12;
    const RamseyTrace tr = simulate_ramsey(s, r);
    const double df = ramsey_truth(s, r).detuning;
    for (std::size_t i = 0; i < tr.times.size(); ++i) {
        const double ref = r.amplitude * std::sin(2 * kPi * df * tr.times[i] + r.phase) + r.offset + r.baseline;
        CHECK(std::abs(tr.signal[i] - ref) < 1e-12);
    }
}

TEST_CASE("simulate_ramsey: RF outside the two-level window") {
    const SpinSystem s = testutil::carbon_system(20.0, true);
    CHECK_THROWS_AS(simulate_ramsey(s, settings_for(s, 60e3)), ContractError);
    CHECK_THROWS_AS(simulate_ramsey(s, settings_for(s, -50.5e3)), ContractError);
    CHECK_NOTHROW(simulate_ramsey(s, settings_for(s, -49e3)));
}

TEST_CASE("simulate_ramsey: polarization efficiency scales the amplitude") {
    const SpinSystem s = testutil::carbon_system(20.0, true);
    RamseySettings r = settings_for(s, 1203.5);
    r.polarization = 0.5;
    CHECK(ramsey_truth(s, r).amplitude == doctest::Approx(0.05));
    r.polarization = 1.5;
    CHECK_THROWS_AS(ramsey_truth(s, r), ValidationError);
}

TEST_CASE("synthesize_fringe: determinism and noise statistics") {
    const FringeParams p = demo_params();
    const auto times = linear_grid(0.0, 6e-3, 20000);
    const RamseyTrace a = synthesize_fringe(p, times, 0.01, 42);
    const RamseyTrace b = synthesize_fringe(p, times, 0.01, 42);
    const RamseyTrace c = synthesize_fringe(p, times, 0.01, 43);
    CHECK(a.signal == b.signal);
    CHECK(a.signal != c.signal);
    const RamseyTrace clean = synthesize_fringe(p, times, 0.0, 42);
    double sum = 0, sum2 = 0;
    for (std::size_t i = 0; i < times.size(); ++i) {
        const double d = a.signal[i] - clean.signal[i];
        sum += d;
        sum2 += d * d;
    }
    const double n = static_cast<double>(times.size());
    const double sd = std::sqrt((sum2 - sum * sum / n) / (n - 1));
    CHECK(std::abs(sd / 0.01 - 1.0) < 0.05);
}

TEST_CASE("synthesize_fringe: envelope decays monotonically at the extrema") {
    FringeParams p = demo_params();
    p.offset = 0.0;
    p.phase = kPi / 2;  // extrema at t = k / (2 δf)
    double last = std::numeric_limits<double>::infinity();
    for (int k = 0; k < 30; ++k) {
        const double t = k / (2 * p.detuning);
        const double a = std::abs(fringe_model(t, p) - p.baseline);
        CHECK(a < last);
        last = a;
    }
}

TEST_CASE("linear_grid endpoints") {
    const auto g = linear_grid(0.0, 6e-3, 241);
    CHECK(g.size() == 241);
    CHECK(g.front() == 0.0);
    CHECK(g.back() == 6e-3);
    CHECK(g[120] == doctest::Approx(3e-3).epsilon(1e-15));
}

TEST_CASE("simulate_odmr: electron-only spectra") {
    SpinSystem s;
    SUBCASE("zero field: one dip at D") {
        const auto grid = linear_grid(2.86e9, 2.88e9, 2001);
        const auto sp = simulate_odmr(s, grid, 1e6, 0.1);
        const auto minima = local_minima(sp);
        REQUIRE(minima.size() == 1);
        CHECK(minima[0] == doctest::Approx(s.D).epsilon(1e-12));
    }
    SUBCASE("axial field: dips at D +- gammaE Bz") {
        s.B = {0, 0, 20.0};
        const auto grid = linear_grid(2.80e9, 2.94e9, 14001);
        const auto sp = simulate_odmr(s, grid, 1e6, 0.1);
        const auto minima = local_minima(sp);
        REQUIRE(minima.size() == 2);
        CHECK(std::abs(minima[0] - (s.D - s.gammaE * 20.0)) <= 5e3);
        CHECK(std::abs(minima[1] - (s.D + s.gammaE * 20.0)) <= 5e3);
    }
}

TEST_CASE("simulate_odmr: 14N triplets and line positions") {
    SpinSystem s;
    s.B = {0, 0, 20.0};
    s.includeN = true;
    s.AN = SpinSystem::axial_tensor(-2.14e6, -2.70e6);
    const auto lines = odmr_lines(s);
    REQUIRE(lines.size() == 6);
    const auto e = solve(s);
    for (const auto& l : lines) {
        CHECK(std::abs(l.frequency - transition_frequency(e, l.lower, l.upper)) < 1e-6);
        CHECK(l.weight == doctest::Approx(1.0 / 3.0));
    }
    std::vector<double> upper;
    for (const auto& l : lines)
        if (l.upper.mS == 1) upper.push_back(l.frequency);
    std::sort(upper.begin(), upper.end());
    // Spacing equals |A∥| up to second-order corrections A⊥²/D.
    const double tol = 4 * 2.70e6 * 2.70e6 / (s.D - s.gammaE * 20.0);
    CHECK(std::abs((upper[1] - upper[0]) - 2.14e6) < tol);
    CHECK(std::abs((upper[2] - upper[1]) - 2.14e6) < tol);

    const auto grid = linear_grid(2.92e9, 2.94e9, 20001);
    const auto sp = simulate_odmr(s, grid, 0.3e6, 0.1);
    const auto minima = local_minima(sp);
    REQUIRE(minima.size() == 3);
    for (std::size_t k = 0; k < 3; ++k) CHECK(std::abs(minima[k] - upper[k]) < 2e3);
}

TEST_CASE("simulate_odmr: input validation") {
    SpinSystem s;
    CHECK_THROWS_AS(simulate_odmr(s, {}, 1e6, 0.1), ValidationError);
    CHECK_THROWS_AS(simulate_odmr(s, {2.87e9}, 0.0, 0.1), ValidationError);
}
