// Copyright 2026 The nvthermo Authors
// SPDX-License-Identifier: Apache-2.0

// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit when any
// criterion fails. Tolerances are pinned here and never loosened at runtime.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "nvthermo/cli.hpp"
#include "nvthermo/demo.hpp"
#include "nvthermo/errors.hpp"
#include "nvthermo/extraction.hpp"
#include "nvthermo/fitting.hpp"
#include "nvthermo/ramsey.hpp"
#include "nvthermo/spin_core.hpp"
#include "nvthermo/thermo.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace nvthermo;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

struct Criterion {
    int id;
    const char* title;
    double budget_s;
    std::function<Outcome()> body;
};

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

// 1. Two-frequency extraction tracks the coupling norm while R stays put.
Outcome extraction_property() {
    const SpinSystem s = testutil::carbon_system(20.0, false);
    const double norm0 = coupling_norm(s.carbons[0].A);
    std::vector<Tensor3> tensors;
    for (double d = -1000.0; d <= 1000.0; d += 100.0) tensors.push_back(testutil::carbon_tensor(13.6755e6 + d));
    const StabilityReport rep = remainder_stability(s, "C13-2", tensors);
    double worstTrack = 0.0;
    for (std::size_t i = 0; i < tensors.size(); ++i) {
        const double dMean = rep.results[i].mean - rep.results[10].mean;
        const double dNorm = rep.results[i].couplingNorm - rep.results[10].couplingNorm;
        worstTrack = std::max(worstTrack, std::abs(dMean - dNorm));
    }
    // Cross-check one operating point against element-wise assembly and a
    // long-double Jacobi solve.
    const auto ev = oracle::hermitian_eigenvalues(oracle::assemble(testutil::to_oracle(s)));
    const EigenDecomposition e = solve(s);
    double worstOracle = 0.0;
    for (std::size_t i = 0; i < ev.size(); ++i) {
        worstOracle = std::max(worstOracle, static_cast<double>(std::fabs(ev[i] - e.precise[i])));
    }
    const bool pass = std::abs(norm0 - 13.7e6) < 0.05e6 && worstTrack < 1.0 && rep.spread < 1.0 && worstOracle < 1e-3;
    return {pass, fmt("|A_z| = %.4f MHz, max |dMean - dNorm| = %.3g Hz, R spread = %.3g Hz, oracle dev = %.2g Hz",
                      norm0 * 1e-6, worstTrack, rep.spread, worstOracle)};
}

// 2. Fringe fits recover the detuning within three reported sigmas.
Outcome fringe_round_trip() {
    const SpinSystem system = demo_system();
    RamseySettings settings = demo_ramsey_settings(system);
    const double truth = ramsey_truth(system, settings).detuning;
    int inside = 0;
    double sigmaSum = 0.0;
    constexpr int runs = 100;
    for (int k = 0; k < runs; ++k) {
        settings.seed = 5000 + static_cast<std::uint64_t>(k);
        const FitReport fit = fit_fringe(simulate_ramsey(system, settings));
        const double sigma = fit.sigma("detuning_Hz");
        sigmaSum += sigma;
        if (std::abs(fit.value("detuning_Hz") - truth) <= 3.0 * sigma) ++inside;
    }
    const double meanSigma = sigmaSum / runs;
    return {inside >= 99 && std::abs(truth - 1203.5) < 1e-6,
            fmt("true df = %.6f Hz, %d/%d within 3 sigma, mean sigma = %.3f Hz", truth, inside, runs, meanSigma)};
}

// 3. Weighted line fit on six synthetic points with 3 Hz scatter.
Outcome slope_recovery() {
    std::mt19937_64 rng(31);
    std::normal_distribution<double> noise(0.0, 3.0);
    bool within = true, band = true;
    std::string detail;
    for (double slope : {110.9, 35.0, 194.9}) {
        TempSeries series;
        for (double T = 295.0; T <= 320.0; T += 5.0) series.push_back({T, 13.6e6 + slope * (T - 300.0) + noise(rng), 3.0});
        const FitReport fit = fit_line_weighted(series);
        const double m = fit.value("slope"), sm = fit.sigma("slope");
        within = within && std::abs(m - slope) <= 3.0 * sm;
        band = band && sm >= 1.0 && sm <= 2.0;
        detail += fmt("%s%.1f: %.3f +- %.4f Hz/K", detail.empty() ? "" : "; ", slope, m, sm);
    }
    detail += within ? " | within 3 sigma" : " | outside 3 sigma";
    detail += band ? " | sigma in 1-2 Hz/K" : " | sigma outside the 1-2 Hz/K band (3/sqrt(437.5) = 0.143 for this design)";
    return {within && band, detail};
}

// 4. Thermo identities on random tables and random calibrated models.
Outcome thermo_identities() {
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> e(5.0, 200.0), target(20.0, 250.0), frac(0.1, 0.95), a0(-2e7, 2e7);
    std::uniform_int_distribution<int> dyadic(-1 << 20, 1 << 20);
    const ExpansionTable expansion = demo_expansion_table();
    bool zeroPoint = true, dynZero = true;
    for (int k = 0; k < 20; ++k) {
        ThermoModel m;
        m.aStc0 = std::ldexp(static_cast<double>(dyadic(rng)), 4);
        m.expansion = expansion;
        double half = 0.0;
        for (int i = 0; i < 500; ++i) {
            const double c = std::ldexp(static_cast<double>(dyadic(rng)), -10);
            m.modes.modes.push_back({i + 1, e(rng), 0.0, c});
            half += 0.5 * c;  // dyadic values: every partial sum is exact
        }
        zeroPoint = zeroPoint && a_zero(m) == m.aStc0 + half;
        dynZero = dynZero && delta_A_dyn(m.modes, 0.0) == 0.0;
    }
    double worst = 0.0;
    for (int k = 0; k < 20; ++k) {
        ThermoModel m;
        m.modes = demo_mode_table(kDemoSeed + 100 + static_cast<std::uint64_t>(k));
        m.expansion = expansion;
        calibrate_thermo_model(m, 300.0, target(rng), frac(rng));
        m.aStc0 = a0(rng);
        // A(0) is constant; differencing only the thermal part keeps its
        // magnitude out of the rounding error.
        auto shift = [&](double t) { return delta_A_stc(m, t) + delta_A_dyn(m.modes, t, m.constants); };
        for (double T : {60.0, 156.0, 300.0, 452.0, 804.0}) {  // cell midpoints of the 8 K grid
            const double fd = oracle::central_difference(shift, T, 0.25);
            const double an = dA_dT(m, T).total;
            worst = std::max(worst, std::abs(an - fd) / std::abs(an));
        }
    }
    return {zeroPoint && dynZero && worst < 1e-8,
            fmt("zero-point identity %s, dA_dyn(0) = 0 %s, worst dA/dT vs FD = %.2g relative", zeroPoint ? "exact" : "BROKEN",
                dynZero ? "exact" : "BROKEN", worst)};
}

// 5. Merging near-degenerate modes.
Outcome mode_merging() {
    std::mt19937_64 rng(51);
    std::uniform_real_distribution<double> e(20.0, 165.0);
    std::uniform_int_distribution<int> c(1, 1 << 21);
    PhononModeTable t;
    for (int i = 0; i < 1530; ++i) t.modes.push_back({i + 1, e(rng), 0.0, std::ldexp(static_cast<double>(c(rng)), -20)});
    const PhononModeTable merged = merge_degenerate_modes(t, 1.0);
    double before = 0.0, after = 0.0;
    for (const auto& m : t.modes) before += m.c;
    for (const auto& m : merged.modes) after += m.c;
    const double raw = delta_A_dyn(t, 300.0), mer = delta_A_dyn(merged, 300.0);
    const double change = std::abs(mer - raw) / std::abs(raw);
    return {before == after && change < 0.01,
            fmt("%zu -> %zu modes, sum c %s (%.17g), |dA_dyn(300 K)| change = %.2g", t.size(), merged.size(),
                before == after ? "preserved" : "CHANGED", after, change)};
}

// 6. Eigensolver quality on random matrices and on physical Hamiltonians.
Outcome eigensolver_quality() {
    std::mt19937_64 rng(61);
    double worstResidual = 0.0, worstOrtho = 0.0;
    for (int k = 0; k < 1000; ++k) {
        const int n = 2 + (k * 47) % 143;  // covers 2..144
        const ComplexMatrix H = testutil::random_hermitian(rng, n);
        const EigenDecomposition e = eigendecompose(H);
        const ComplexMatrix& V = e.eigenvectors;
        const double r = (H * V - V * e.eigenvalues.asDiagonal()).norm() / H.norm();
        const double o = (V.adjoint() * V - ComplexMatrix::Identity(n, n)).norm();
        worstResidual = std::max(worstResidual, r);
        worstOrtho = std::max(worstOrtho, o);
    }
    // GHz-scale physical spectra: repeat solves bit-identical and agree with
    // the long-double oracle.
    double worstHz = 0.0;
    bool repeatable = true;
    const std::pair<int, bool> shapes[] = {{0, false}, {1, true}, {2, true}, {3, false}, {4, true}};
    for (const auto& [carbons, withN] : shapes) {
        SpinSystem s;
        s.B = {35.0, -12.0, 480.0};
        s.includeN = withN;
        s.AN = SpinSystem::axial_tensor(-2.14e6, -2.70e6);
        for (int c = 0; c < carbons; ++c) s.carbons.push_back({"C" + std::to_string(c + 1), testutil::random_symmetric(rng, 1.5e7)});
        const EigenDecomposition a = solve(s, 0.0), b = solve(s, 0.0);
        repeatable = repeatable && a.eigenvalues == b.eigenvalues && a.precise == b.precise;
        const auto ev = oracle::hermitian_eigenvalues(oracle::assemble(testutil::to_oracle(s)));
        for (std::size_t i = 0; i < ev.size(); ++i) {
            worstHz = std::max(worstHz, static_cast<double>(std::fabs(ev[i] - a.precise[i])));
        }
    }
    return {worstResidual < 1e-12 && worstOrtho < 1e-12 && repeatable && worstHz < 1e-3,
            fmt("worst residual %.2g, worst orthogonality %.2g, physical spectra up to dim 144: %s, max |dE| = %.2g Hz",
                worstResidual, worstOrtho, repeatable ? "repeatable" : "NOT repeatable", worstHz)};
}

// 7. `thermo` on the bundled demo tables reports the measured coefficients.
Outcome demo_thermo() {
    const std::string dir = std::string(NVTHERMO_SOURCE_DIR) + "/data/demo/";
    const std::pair<const char*, double> cases[] = {{"n14-quadrupole", 35.0}, {"n14-hyperfine", 194.9}, {"c13-2", 110.9}};
    bool pass = true;
    std::string detail;
    for (const auto& [name, target] : cases) {
        const std::string cfg = dir + "thermo_" + name + ".json";
        const char* argv[] = {"nvthermo", "thermo", "--config", cfg.c_str()};
        std::ostringstream out, err;
        const int code = run_cli(4, argv, out, err);
        const std::string text = out.str();
        const std::size_t at = text.find("total ");
        double total = NAN;
        if (code == 0 && at != std::string::npos) total = std::stod(text.substr(at + 6));
        pass = pass && std::abs(total - target) <= 0.5;
        detail += fmt("%s%s %.4f (target %.1f)", detail.empty() ? "" : "; ", name, total, target);
    }
    return {pass, detail + " Hz/K"};
}

// 8. ODMR dips at D ± γe·Bz recovered by fitting.
Outcome odmr_sanity() {
    double worst = 0.0;
    for (double bz : {5.0, 20.0, 50.0, 120.0}) {
        SpinSystem s;
        s.B = {0.0, 0.0, bz};
        const double lo = s.D - s.gammaE * bz, hi = s.D + s.gammaE * bz;
        const auto grid = linear_grid(lo - 20e6, hi + 20e6, 4001);
        const OdmrSpectrum sp = simulate_odmr(s, grid, 1e6, 0.1);
        const std::vector<double> guesses{lo + 0.3e6, hi - 0.3e6};
        const FitReport fit = fit_odmr_dips(sp.frequencies, sp.signal, guesses, 1.5e6);
        worst = std::max({worst, std::abs(fit.value("center0") - lo), std::abs(fit.value("center1") - hi)});
    }
    return {worst < 1e3, fmt("fields 5-120 G, worst center error = %.3g Hz", worst)};
}

}  // namespace

int main() {
    const std::vector<Criterion> criteria = {
        {1, "extraction: mean tracks |A_z|, R stable under A_zz +-1 kHz at 20 G", 1.0, extraction_property},
        {2, "fringe round trip at 1203.5 Hz over 100 seeds", 10.0, fringe_round_trip},
        {3, "temperature-coefficient recovery (110.9 / 35.0 / 194.9 Hz/K)", 1.0, slope_recovery},
        {4, "thermo identities and dA/dT vs finite differences", 5.0, thermo_identities},
        {5, "degenerate-mode merging on 1530 modes", 1.0, mode_merging},
        {6, "eigensolver quality", 30.0, eigensolver_quality},
        {7, "demo thermo tables reproduce 35.0 / 194.9 / 110.9 Hz/K", 5.0, demo_thermo},
        {8, "ODMR dip centers", 5.0, odmr_sanity},
    };
    int failed = 0;
    for (const Criterion& c : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.body();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const bool inTime = dt <= c.budget_s;
        const bool pass = o.pass && inTime;
        if (!pass) ++failed;
        std::printf("%s %d %s | %s | %.3f s (budget %.0f s)%s\n", pass ? "PASS" : "FAIL", c.id, c.title, o.detail.c_str(),
                    dt, c.budget_s, inTime ? "" : " OVER BUDGET");
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
