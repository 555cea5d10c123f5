// Copyright 2026 The nvthermo Authors
// SPDX-License-Identifier: Apache-2.0

#include "nvthermo/demo.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "nvthermo/errors.hpp"
#include "nvthermo/extraction.hpp"
#include "nvthermo/fitting.hpp"

namespace nvthermo {

namespace {

constexpr double kDebyeTemperature_K = 1860.0;
constexpr double kAlpha300_perK = 1e-6;
constexpr double kExpansionStep_K = 8.0;
constexpr double kExpansionMax_K = 1000.0;
constexpr std::size_t kModeTriplets = 510;

// Debye heat capacity per mode up to a constant: (T/θ)³ ∫₀^{θ/T} x⁴eˣ/(eˣ−1)² dx.
double debye_heat_capacity(double T) {
    if (T <= 0.0) return 0.0;
    const double upper = std::min(kDebyeTemperature_K / T, 60.0);
    constexpr int n = 2000;  // even, Simpson
    const double h = upper / n;
    auto f = [](double x) {
        if (x == 0.0) return 0.0;
        const double em1 = std::expm1(x);
        return x * x * x * x * (em1 + 1.0) / (em1 * em1);
    };
    double s = f(0.0) + f(upper);
    for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(i * h);
    const double r = T / kDebyeTemperature_K;
    return r * r * r * s * h / 3.0;
}

nlohmann::ordered_json tensor_json(const Tensor3& A) {
    auto t = nlohmann::ordered_json::array();
    for (int r = 0; r < 3; ++r) t.push_back({A(r, 0), A(r, 1), A(r, 2)});
    return t;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ValidationError("cannot open '" + path.string() + "' for writing");
    f << text;
    if (!f) throw ValidationError("failed writing '" + path.string() + "'");
}

template <typename Writer, typename Value>
std::string render(Writer writer, const Value& value) {
    std::ostringstream o;
    writer(o, value);
    return o.str();
}

std::vector<double> demo_temperatures() { return {295.0, 300.0, 305.0, 310.0, 315.0, 320.0}; }

}  // namespace

DemoRng::DemoRng(std::uint64_t seed) : engine_(seed) {}

double DemoRng::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

double DemoRng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

double DemoRng::normal() {
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

Tensor3 demo_carbon_tensor() {
    Tensor3 A;
    A << 12.3e6, 0.0, 1.0e6,
         0.0, 12.2e6, 0.0,
         1.0e6, 0.0, 13.6755e6;
    return A;
}

SpinSystem demo_system() {
    SpinSystem s;
    s.B = {0.0, 0.0, kDemoField_G};
    s.includeN = true;
    s.AN = SpinSystem::axial_tensor(-2.14e6, -2.70e6);
    s.carbons.push_back({kDemoCarbon, demo_carbon_tensor()});
    s.validate();
    return s;
}

RamseySettings demo_ramsey_settings(const SpinSystem& system, std::uint64_t seed) {
    RamseySettings r;
    r.nucleus = kDemoCarbon;
    r.manifold = 1;
    r.rfFrequency = manifold_frequencies(system, kDemoCarbon).omegaPlus - kDemoDetuning_Hz;
    r.times = linear_grid(0.0, 6e-3, 241);
    r.t2star = 4e-3;
    r.stretch = 1.5;
    r.amplitude = 0.1;
    r.offset = 0.0;
    r.baseline = 0.5;
    r.phase = 0.3;
    r.seed = seed;
    const FringeParams truth = ramsey_truth(system, r);
    r.noiseSigma = kDemoDetuningSigma_Hz / detuning_sigma_per_unit_noise(truth, r.times);
    return r;
}

PhononModeTable demo_mode_table(std::uint64_t seed) {
    DemoRng rng(seed);
    PhononModeTable table;
    table.modes.reserve(3 * kModeTriplets);
    int index = 1;
    for (std::size_t k = 0; k < kModeTriplets; ++k) {
        const double center = rng.uniform(20.1, 164.9);
        const double c = rng.uniform(0.2, 1.0) * (center / 100.0) * (center / 100.0);
        for (double split : {-0.1, 0.0, 0.1}) {
            PhononMode m;
            m.index = index++;
            m.energy_meV = center + split;
            m.b = rng.uniform(-1e3, 1e3);
            m.c = c * rng.uniform(0.8, 1.2);
            table.modes.push_back(m);
        }
    }
    return table;
}

ExpansionTable demo_expansion_table() {
    const double alphaScale = kAlpha300_perK / debye_heat_capacity(300.0);
    const auto n = static_cast<std::size_t>(std::lround(kExpansionMax_K / kExpansionStep_K)) + 1;
    std::vector<double> T(n), rel(n);
    constexpr int sub = 32;  // Simpson panels per table step
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        T[i] = kExpansionStep_K * static_cast<double>(i);
        if (i > 0) {
            const double t0 = T[i - 1], h = kExpansionStep_K / sub;
            double s = debye_heat_capacity(t0) + debye_heat_capacity(T[i]);
            for (int j = 1; j < sub; ++j) s += (j % 2 ? 4.0 : 2.0) * debye_heat_capacity(t0 + j * h);
            acc += alphaScale * s * h / 3.0;
        }
        rel[i] = acc;
    }
    return ExpansionTable(std::move(T), std::move(rel));
}

Tensor3 demo_slope_tensor(const Tensor3& A, double normSlope) {
    if (A(2, 2) == 0.0) throw DomainError("demo_slope_tensor: A_zz must be non-zero");
    Tensor3 slope = Tensor3::Zero();
    slope(2, 2) = normSlope * coupling_norm(A) / A(2, 2);
    return slope;
}

void calibrate_thermo_model(ThermoModel& model, double T, double target, double dynFraction) {
    const TempDerivative raw = dA_dT(model, T);
    if (dynFraction != 0.0) {
        if (raw.dyn == 0.0) throw NumericError("calibrate_thermo_model: mode table has no temperature response");
        const double scale = dynFraction * target / raw.dyn;
        for (PhononMode& m : model.modes.modes) m.c *= scale;
    } else {
        for (PhononMode& m : model.modes.modes) m.c = 0.0;
    }
    const double dAlpha = model.expansion.derivative(T);
    if (dAlpha == 0.0) throw NumericError("calibrate_thermo_model: expansion table is flat at the target temperature");
    model.cStc = (target - dA_dT(model, T).dyn) / dAlpha;
}

std::vector<ThermoDemo> demo_thermo_models() {
    struct Spec {
        const char* name;
        const char* nucleus;
        double aZero, target, dynFraction;
        std::uint64_t seed;
    };
    const Spec specs[] = {
        {"c13-2", kDemoCarbon, 13.6755e6, 110.9, 0.55, kDemoSeed + 1},
        {"n14-hyperfine", "N14", -2.14e6, 194.9, 0.9, kDemoSeed + 2},
        {"n14-quadrupole", "N14", -5.01e6, 35.0, 0.7, kDemoSeed + 3},
    };
    const ExpansionTable expansion = demo_expansion_table();
    std::vector<ThermoDemo> out;
    for (const Spec& s : specs) {
        ThermoDemo d;
        d.name = s.name;
        d.nucleus = s.nucleus;
        d.target = s.target;
        d.dynFraction = s.dynFraction;
        d.model.modes = demo_mode_table(s.seed);
        d.model.expansion = expansion;
        calibrate_thermo_model(d.model, 300.0, s.target, s.dynFraction);
        d.model.aStc0 = s.aZero - a_zero(d.model);
        out.push_back(std::move(d));
    }
    return out;
}

std::vector<MeasurementRecord> demo_measurements(std::uint64_t seed) {
    DemoRng rng(seed);
    const std::vector<double> temps = demo_temperatures();
    std::vector<MeasurementRecord> out;

    const SpinSystem base = demo_system();
    constexpr double carbonSlope = 110.9, carbonSigma = 46.0;
    const double angles[] = {0.0, 0.7};
    for (int nv = 0; nv < 2; ++nv) {
        SpinSystem s = base;
        s.carbons[0].A = rotate_about_z(base.carbons[0].A, angles[nv]);
        const Tensor3 slope = demo_slope_tensor(s.carbons[0].A, carbonSlope);
        const auto rows = temperature_sweep(s, kDemoCarbon, slope, 300.0, temps);
        for (const SweepRow& row : rows) {
            MeasurementRecord r;
            r.nvId = "NV" + std::to_string(nv + 1);
            r.nucleus = kDemoCarbon;
            r.T = row.parameter;
            r.omegaPlus = row.frequencies.omegaPlus + carbonSigma * rng.normal();
            r.omegaMinus = row.frequencies.omegaMinus + carbonSigma * rng.normal();
            r.sigma = carbonSigma;
            out.push_back(r);
        }
    }

    constexpr double nitrogenSlope = 194.9, nitrogenSigma = 41.8, nitrogenHalfSplit = 0.1e6;
    for (int nv = 0; nv < 2; ++nv) {
        const double a300 = 2.14e6 + 150.0 * nv;
        for (double T : temps) {
            const double a = a300 + nitrogenSlope * (T - 300.0);
            MeasurementRecord r;
            r.nvId = "NV" + std::to_string(nv + 3);
            r.nucleus = "N14";
            r.T = T;
            r.omegaPlus = a + nitrogenHalfSplit + nitrogenSigma * rng.normal();
            r.omegaMinus = a - nitrogenHalfSplit + nitrogenSigma * rng.normal();
            r.sigma = nitrogenSigma;
            out.push_back(r);
        }
    }
    return out;
}

std::vector<std::string> write_demo_assets(const std::string& directory) {
    namespace fs = std::filesystem;
    using ojson = nlohmann::ordered_json;
    const fs::path dir(directory);
    fs::create_directories(dir);
    std::vector<std::string> written;
    auto emit = [&](const std::string& name, const std::string& text) {
        write_text(dir / name, text);
        written.push_back((dir / name).string());
    };

    const SpinSystem system = demo_system();
    const RamseySettings ramsey = demo_ramsey_settings(system);
    const auto thermos = demo_thermo_models();

    emit("measurements.csv", render(write_measurements, demo_measurements()));
    emit("expansion.csv", render(write_expansion_table, thermos.front().model.expansion));
    emit("ramsey_trace.csv", render(write_trace, simulate_ramsey(system, ramsey)));
    for (const ThermoDemo& d : thermos) emit("modes_" + d.name + ".csv", render(write_phonon_table, d.model.modes));

    ojson sys;
    sys["D_Hz"] = system.D;
    sys["P_Hz"] = system.P;
    sys["B_G"] = {system.B.x(), system.B.y(), system.B.z()};
    sys["N14"] = {{"axial_Hz", -2.14e6}, {"transverse_Hz", -2.70e6}};
    sys["carbons"] = ojson::array({{{"label", kDemoCarbon}, {"tensor_Hz", tensor_json(demo_carbon_tensor())}}});

    auto thermo_block = [](const ThermoDemo& d) {
        ojson t;
        t["aStc0_Hz"] = d.model.aStc0;
        t["cStc_Hz"] = d.model.cStc;
        t["T_start_K"] = 0.0;
        t["T_stop_K"] = 600.0;
        t["T_step_K"] = 10.0;
        t["derivative_T_K"] = 300.0;
        return t;
    };

    ojson cfg;
    cfg["system"] = sys;
    ojson r;
    r["nucleus"] = ramsey.nucleus;
    r["manifold"] = ramsey.manifold;
    r["rf_Hz"] = ramsey.rfFrequency;
    r["t_start_s"] = ramsey.times.front();
    r["t_stop_s"] = ramsey.times.back();
    r["samples"] = ramsey.times.size();
    r["T2star_s"] = ramsey.t2star;
    r["p"] = ramsey.stretch;
    r["a"] = ramsey.amplitude;
    r["b"] = ramsey.offset;
    r["c"] = ramsey.baseline;
    r["phi0_rad"] = ramsey.phase;
    r["polarization"] = ramsey.polarization;
    r["noise_sigma"] = ramsey.noiseSigma;
    ojson odmr;
    odmr["f_start_Hz"] = 2.78e9;
    odmr["f_stop_Hz"] = 2.96e9;
    odmr["samples"] = 3601;
    odmr["linewidth_Hz"] = 0.5e6;
    odmr["depth"] = 0.1;
    cfg["simulation"] = {{"seed", kDemoSeed}, {"ramsey", r}, {"odmr", odmr}};
    const Tensor3 A = demo_carbon_tensor();
    ojson ex;
    ex["nucleus"] = kDemoCarbon;
    ex["reference_T_K"] = 300.0;
    ex["slope_HzPerK"] = tensor_json(demo_slope_tensor(A, 110.9));
    ex["temperatures_K"] = demo_temperatures();
    cfg["extract"] = ex;
    cfg["thermo"] = thermo_block(thermos.front());
    cfg["paths"] = {{"measurements", "measurements.csv"},
                    {"modes", "modes_" + thermos.front().name + ".csv"},
                    {"expansion", "expansion.csv"},
                    {"trace", "ramsey_trace.csv"}};
    emit("config.json", cfg.dump(2) + "\n");

    for (const ThermoDemo& d : thermos) {
        ojson t;
        t["thermo"] = thermo_block(d);
        t["paths"] = {{"modes", "modes_" + d.name + ".csv"}, {"expansion", "expansion.csv"}};
        emit("thermo_" + d.name + ".json", t.dump(2) + "\n");
    }
    return written;
}

}  // namespace nvthermo
