// Copyright 2026 The nvthermo Authors
// SPDX-License-Identifier: Apache-2.0

#include "nvthermo/cli.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "nvthermo/config.hpp"
#include "nvthermo/demo.hpp"
#include "nvthermo/errors.hpp"
#include "nvthermo/extraction.hpp"
#include "nvthermo/fitting.hpp"
#include "nvthermo/ramsey.hpp"
#include "nvthermo/svg.hpp"
#include "nvthermo/tables.hpp"
#include "nvthermo/thermo.hpp"

namespace nvthermo {

namespace {

struct Common {
    std::string config, out, plot;
    std::optional<std::uint64_t> seed;
    std::optional<double> fieldGauss, tempK;
};

class UsageError : public Error {
public:
    using Error::Error;
};

RunConfig require_config(const Common& c) {
    std::string path = c.config;
    if (path.empty()) {
        if (const char* env = std::getenv("NVTHERMO_CONFIG")) path = env;
    }
    if (path.empty()) throw UsageError("this command needs a configuration: pass --config PATH or set NVTHERMO_CONFIG");
    RunConfig cfg = load_config(path);
    if (c.fieldGauss) {
        cfg.system.B = {0.0, 0.0, *c.fieldGauss};
        cfg.system.validate();
    }
    if (c.seed) {
        cfg.seed = *c.seed;
        if (cfg.ramsey) cfg.ramsey->seed = *c.seed;
    }
    return cfg;
}

std::optional<RunConfig> optional_config(const Common& c) {
    if (c.config.empty() && !std::getenv("NVTHERMO_CONFIG")) return std::nullopt;
    return require_config(c);
}

// Writes a finished table to --out or the output stream.
void emit(const Common& c, std::ostream& out, const std::string& table) {
    if (c.out.empty()) {
        out << table;
        return;
    }
    std::ofstream f(c.out, std::ios::binary);
    if (!f) throw ValidationError("cannot open output file '" + c.out + "' for writing");
    f << table;
    if (!f) throw ValidationError("failed writing output file '" + c.out + "'");
}

void maybe_plot(const Common& c, const Plot& plot) {
    if (!c.plot.empty()) write_svg(c.plot, plot);
}

std::string fx(double v) { return format_exact(v); }

// --- transitions -----------------------------------------------------------

void cmd_transitions(const Common& c, std::ostream& out) {
    const RunConfig cfg = require_config(c);
    const SpinSystem& s = cfg.system;
    const EigenDecomposition eig = solve(s);
    std::ostringstream o;
    o << "kind,lower,upper,frequency_Hz\n";
    for (const OdmrLine& line : odmr_lines(s)) {
        o << "electron," << line.lower.to_string() << ',' << line.upper.to_string() << ',' << fx(line.frequency) << '\n';
    }
    // Nuclear transitions with every spectator pinned at its largest projection.
    StateLabel pinned;
    if (s.includeN) pinned.mI_N = 1;
    pinned.mI_C.assign(s.carbons.size(), 0.5);
    std::vector<double> freqs;
    for (int mS : {1, 0, -1}) {
        pinned.mS = mS;
        if (s.includeN) {
            for (int m : {1, 0}) {
                StateLabel a = pinned, b = pinned;
                a.mI_N = m;
                b.mI_N = m - 1;
                const double f = transition_frequency(eig, a, b);
                o << "N14," << a.to_string() << ',' << b.to_string() << ',' << fx(f) << '\n';
            }
        }
        for (std::size_t k = 0; k < s.carbons.size(); ++k) {
            StateLabel a = pinned, b = pinned;
            b.mI_C[k] = -0.5;
            const double f = transition_frequency(eig, a, b);
            o << s.carbons[k].label << ',' << a.to_string() << ',' << b.to_string() << ',' << fx(f) << '\n';
        }
    }
    emit(c, out, o.str());
}

// --- extract ----------------------------------------------------------------

void cmd_extract(const Common& c, const std::string& nucleusFlag, std::ostream& out) {
    const RunConfig cfg = require_config(c);
    ExtractSettings ex = cfg.extract.value_or(ExtractSettings{});
    const std::string nucleus = nucleusFlag.empty() ? ex.nucleus : nucleusFlag;
    if (nucleus.empty()) throw UsageError("extract: no nucleus given (use --nucleus or extract.nucleus)");
    if (c.tempK) ex.temperatures = {*c.tempK};
    if (ex.temperatures.empty()) ex.temperatures = {ex.referenceT};
    const auto rows = temperature_sweep(cfg.system, nucleus, ex.slopePerK, ex.referenceT, ex.temperatures);
    std::ostringstream o;
    o << "nucleus,T_K,omegaPlus_Hz,omegaMinus_Hz,mean_Hz,couplingNorm_Hz,remainder_Hz\n";
    PlotSeries mean{"mean", {}, {}, {}, true, true, "#1f77b4"};
    PlotSeries norm{"coupling norm", {}, {}, {}, true, false, "#d62728"};
    for (const SweepRow& r : rows) {
        o << nucleus << ',' << fx(r.parameter) << ',' << fx(r.frequencies.omegaPlus) << ','
          << fx(r.frequencies.omegaMinus) << ',' << fx(r.result.mean) << ',' << fx(r.result.couplingNorm) << ','
          << fx(r.result.remainder) << '\n';
        mean.x.push_back(r.parameter);
        mean.y.push_back(r.result.mean);
        norm.x.push_back(r.parameter);
        norm.y.push_back(r.result.couplingNorm);
    }
    emit(c, out, o.str());
    maybe_plot(c, Plot{"Mean coupling of " + nucleus, "T (K)", "frequency (Hz)", {mean, norm}});
}

// --- Ramsey -------------------------------------------------------------------

Plot trace_plot(const RamseyTrace& trace, const std::string& title) {
    PlotSeries data{"signal", {}, trace.signal, {}, false, true, "#1f77b4"};
    for (double t : trace.times) data.x.push_back(t * 1e3);
    return Plot{title, "free evolution time (ms)", "contrast", {data}};
}

void cmd_simulate_ramsey(const Common& c, std::ostream& out) {
    const RunConfig cfg = require_config(c);
    if (!cfg.ramsey) throw UsageError("simulate-ramsey: configuration has no simulation.ramsey block");
    const RamseyTrace trace = simulate_ramsey(cfg.system, *cfg.ramsey);
    std::ostringstream o;
    write_trace(o, trace);
    emit(c, out, o.str());
    maybe_plot(c, trace_plot(trace, "Simulated Ramsey fringe"));
}

void cmd_fit_fringe(const Common& c, const std::string& tracePath, std::optional<double> rf, std::ostream& out) {
    std::string path = tracePath;
    const auto cfg = optional_config(c);
    if (path.empty() && cfg) path = cfg->resolve(cfg->paths.trace);
    if (path.empty()) throw UsageError("fit-fringe: no trace file given");
    if (!rf && cfg && cfg->ramsey) rf = cfg->ramsey->rfFrequency;
    const RamseyTrace trace = parse_trace(path);
    const FitReport report = fit_fringe(trace);
    std::ostringstream o;
    o << "parameter,value,sigma\n";
    for (std::size_t i = 0; i < report.names.size(); ++i) {
        o << report.names[i] << ',' << fx(report.params[i]) << ',' << fx(report.sigmas[i]) << '\n';
    }
    if (rf) {
        o << "rf_Hz," << fx(*rf) << ",0\n";
        o << "omega_Hz," << fx(rf_to_absolute(*rf, report.value("detuning_Hz"))) << ','
          << fx(report.sigma("detuning_Hz")) << '\n';
    }
    o << "reduced_chi_square," << fx(report.reducedChiSquare) << ",0\n";
    o << "iterations," << report.iterations << ",0\n";
    o << "converged," << (report.converged ? 1 : 0) << ",0\n";
    emit(c, out, o.str());
    if (!c.plot.empty()) {
        Plot plot = trace_plot(trace, "Ramsey fringe fit");
        const FringeParams p = fringe_params(report);
        PlotSeries fit{"fit", {}, {}, {}, true, false, "#d62728"};
        const auto grid = linear_grid(trace.times.front(), trace.times.back(), 1200);
        for (double t : grid) {
            fit.x.push_back(t * 1e3);
            fit.y.push_back(fringe_model(t, p));
        }
        plot.series.push_back(fit);
        maybe_plot(c, plot);
    }
}

// --- tempco -------------------------------------------------------------------

void cmd_tempco(const Common& c, const std::string& measurementsPath, bool plain, std::ostream& out) {
    std::string path = measurementsPath;
    if (path.empty()) {
        const auto cfg = optional_config(c);
        if (cfg) path = cfg->resolve(cfg->paths.measurements);
    }
    if (path.empty()) throw UsageError("tempco: no measurements file given");
    const auto records = parse_measurements(path);
    if (records.empty()) throw ValidationError(path + ": no measurement rows");

    // nucleus -> nvId -> series, in first-appearance order.
    std::vector<std::string> nuclei;
    std::map<std::string, std::vector<std::string>> nvOrder;
    std::map<std::pair<std::string, std::string>, TempSeries> series;
    for (const auto& r : records) {
        if (!nvOrder.count(r.nucleus)) nuclei.push_back(r.nucleus);
        auto& ids = nvOrder[r.nucleus];
        if (std::find(ids.begin(), ids.end(), r.nvId) == ids.end()) ids.push_back(r.nvId);
        series[{r.nucleus, r.nvId}].push_back({r.T, 0.5 * (r.omegaPlus + r.omegaMinus), r.sigma / std::sqrt(2.0)});
    }

    std::ostringstream o;
    o << "nucleus,nvId,points,slope_HzPerK,sigma_HzPerK,reducedChiSquare\n";
    Plot plot{"Mean coupling vs temperature", "T (K)", "A - A(first T) (Hz)", {}};
    const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};
    std::size_t colour = 0;
    for (const auto& nucleus : nuclei) {
        std::vector<double> slopes, sigmas;
        for (const auto& id : nvOrder[nucleus]) {
            const TempSeries& s = series[{nucleus, id}];
            const FitReport fit = fit_line_weighted(s);
            slopes.push_back(fit.value("slope"));
            sigmas.push_back(fit.sigma("slope"));
            o << nucleus << ',' << id << ',' << s.size() << ',' << fx(slopes.back()) << ',' << fx(sigmas.back()) << ','
              << fx(fit.reducedChiSquare) << '\n';
            PlotSeries p{nucleus + " " + id, {}, {}, {}, false, true, palette[colour++ % 6]};
            for (const TempPoint& pt : s) {
                p.x.push_back(pt.T);
                p.y.push_back(pt.value - s.front().value);
                p.yError.push_back(pt.sigma);
            }
            plot.series.push_back(std::move(p));
        }
        const WeightedMean m = weighted_mean(slopes, sigmas, plain ? Averaging::Plain : Averaging::InverseVariance);
        o << nucleus << ",mean," << slopes.size() << ',' << fx(m.mean) << ',' << fx(m.sigma) << ",\n";
    }
    emit(c, out, o.str());
    maybe_plot(c, plot);
}

// --- thermo -------------------------------------------------------------------

void cmd_thermo(const Common& c, const std::string& modesFlag, const std::string& expansionFlag, std::ostream& out) {
    const auto cfg = optional_config(c);
    ThermoSettings ts = cfg && cfg->thermo ? *cfg->thermo : ThermoSettings{};
    std::string modesPath = modesFlag, expansionPath = expansionFlag;
    if (modesPath.empty() && cfg) modesPath = cfg->resolve(cfg->paths.modes);
    if (expansionPath.empty() && cfg) expansionPath = cfg->resolve(cfg->paths.expansion);
    if (modesPath.empty() || expansionPath.empty()) {
        throw UsageError("thermo: mode and expansion tables are required (--modes, --expansion or paths in the config)");
    }
    if (c.tempK) ts.derivativeT = *c.tempK;

    ThermoModel model;
    if (cfg) model.constants = cfg->constants;
    model.aStc0 = ts.aStc0;
    model.cStc = ts.cStc;
    model.modes = parse_phonon_table(modesPath);
    model.expansion = parse_expansion_table(expansionPath);
    if (ts.mergeWindow_meV) model.modes = merge_degenerate_modes(model.modes, *ts.mergeWindow_meV);
    model.validate();

    const TempDerivative d = dA_dT(model, ts.derivativeT);
    std::ostringstream o;
    o << "# modes: " << model.modes.size() << '\n';
    o << "# A(0)_Hz: " << fx(a_zero(model)) << '\n';
    o << "# dA/dT at " << fx(ts.derivativeT) << " K (Hz/K): total " << fx(d.total) << ", stc " << fx(d.stc) << ", dyn "
      << fx(d.dyn) << '\n';
    o << "T_K,A_Hz,dA_stc_Hz,dA_dyn_Hz\n";
    PlotSeries total{"A(T) - A(0)", {}, {}, {}, true, false, "#1f77b4"};
    PlotSeries stc{"static", {}, {}, {}, true, false, "#2ca02c"};
    PlotSeries dyn{"dynamic", {}, {}, {}, true, false, "#d62728"};
    const auto n = static_cast<std::size_t>(std::floor((ts.TStop - ts.TStart) / ts.TStep + 1e-9)) + 1;
    const double a0 = a_zero(model);
    for (std::size_t i = 0; i < n; ++i) {
        const double T = ts.TStart + ts.TStep * static_cast<double>(i);
        const double s = delta_A_stc(model, T);
        const double y = delta_A_dyn(model.modes, T, model.constants);
        o << fx(T) << ',' << fx(a0 + s + y) << ',' << fx(s) << ',' << fx(y) << '\n';
        total.x.push_back(T);
        total.y.push_back(s + y);
        stc.x.push_back(T);
        stc.y.push_back(s);
        dyn.x.push_back(T);
        dyn.y.push_back(y);
    }
    emit(c, out, o.str());
    maybe_plot(c, Plot{"Temperature dependence", "T (K)", "shift (Hz)", {total, stc, dyn}});
}

// --- ODMR ---------------------------------------------------------------------

void cmd_simulate_odmr(const Common& c, std::ostream& out) {
    const RunConfig cfg = require_config(c);
    const OdmrSettings o = cfg.odmr.value_or(OdmrSettings{});
    const auto grid = linear_grid(o.fStart, o.fStop, o.samples);
    const OdmrSpectrum spectrum = simulate_odmr(cfg.system, grid, o.linewidth, o.depth);
    std::ostringstream text;
    write_spectrum(text, spectrum);
    emit(c, out, text.str());
    PlotSeries s{"ODMR", {}, spectrum.signal, {}, true, false, "#1f77b4"};
    for (double f : spectrum.frequencies) s.x.push_back(f * 1e-6);
    maybe_plot(c, Plot{"Simulated ODMR spectrum", "microwave frequency (MHz)", "normalized fluorescence", {s}});
}

void cmd_make_demo(const Common& c, std::ostream& out) {
    const std::string dir = c.out.empty() ? std::string("data/demo") : c.out;
    for (const auto& path : write_demo_assets(dir)) out << path << '\n';
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"nvthermo: hyperfine temperature-dependence toolkit for NV centers", "nvthermo"};
    app.require_subcommand(1);
    app.fallthrough();

    Common common;
    std::uint64_t seed = 0;
    double field = 0.0, temp = 0.0;
    app.add_option("--config", common.config, "JSON run configuration (falls back to NVTHERMO_CONFIG)");
    app.add_option("--out", common.out, "output file (directory for make-demo)");
    app.add_option("--plot", common.plot, "write an SVG plot to this path");
    auto* seedOpt = app.add_option("--seed", seed, "override the configured random seed");
    auto* fieldOpt = app.add_option("--field-gauss", field, "override the field with an axial field (G)");
    auto* tempOpt = app.add_option("--temp-k", temp, "temperature (K) for extract or the thermo derivative");

    auto* transitions = app.add_subcommand("transitions", "labeled transition frequencies of the configured system");
    std::string nucleus;
    auto* extractCmd = app.add_subcommand("extract", "mean coupling and remainder over a tensor temperature series");
    extractCmd->add_option("--nucleus", nucleus, "13C site label");
    auto* simRamsey = app.add_subcommand("simulate-ramsey", "synthesize a Ramsey trace");
    std::string tracePath;
    double rf = 0.0;
    auto* fitFringe = app.add_subcommand("fit-fringe", "fit a Ramsey trace");
    fitFringe->add_option("trace", tracePath, "trace CSV (t_s,contrast)");
    auto* rfOpt = fitFringe->add_option("--rf-hz", rf, "RF frequency; reports omega = rf + detuning");
    std::string measurements;
    bool plainMean = false;
    auto* tempco = app.add_subcommand("tempco", "per-NV temperature coefficients and their mean");
    tempco->add_option("measurements", measurements, "measurement CSV");
    tempco->add_flag("--plain-mean", plainMean, "plain instead of inverse-variance averaging");
    std::string modes, expansion;
    auto* thermo = app.add_subcommand("thermo", "A(T) curve and dA/dT from mode and expansion tables");
    thermo->add_option("--modes", modes, "phonon mode CSV");
    thermo->add_option("--expansion", expansion, "expansion CSV");
    auto* simOdmr = app.add_subcommand("simulate-odmr", "simulate a CW ODMR spectrum");
    auto* makeDemo = app.add_subcommand("make-demo", "write the bundled demo inputs");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kExitUsage;
    }
    if (*seedOpt) common.seed = seed;
    if (*fieldOpt) common.fieldGauss = field;
    if (*tempOpt) common.tempK = temp;

    try {
        if (*transitions) cmd_transitions(common, out);
        else if (*extractCmd) cmd_extract(common, nucleus, out);
        else if (*simRamsey) cmd_simulate_ramsey(common, out);
        else if (*fitFringe) cmd_fit_fringe(common, tracePath, *rfOpt ? std::optional<double>(rf) : std::nullopt, out);
        else if (*tempco) cmd_tempco(common, measurements, plainMean, out);
        else if (*thermo) cmd_thermo(common, modes, expansion, out);
        else if (*simOdmr) cmd_simulate_odmr(common, out);
        else if (*makeDemo) cmd_make_demo(common, out);
    } catch (const UsageError& e) {
        err << "nvthermo: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "nvthermo: " << e.what() << '\n';
        return kExitFailure;
    }
    return kExitOk;
}

}  // namespace nvthermo
