// Copyright 2026 The nvthermo Authors
// SPDX-License-Identifier: Apache-2.0

#include "nvthermo/config.hpp"

#include <filesystem>
#include <set>

#include <json.hpp>

#include "nvthermo/errors.hpp"
#include "nvthermo/tables.hpp"

namespace nvthermo {

namespace {

using json = nlohmann::json;


struct Ctx {
    std::string source;

    [[noreturn]] void fail(const std::string& where, const std::string& what) const {
        throw ValidationError(source + ": " + where + ": " + what);
    }

    const json& object(const json& j, const std::string& where, std::initializer_list<const char*> allowed) const {
        if (!j.is_object()) fail(where, "expected an object");
        std::set<std::string> ok(allowed.begin(), allowed.end());
        for (const auto& [key, value] : j.items()) {
            (void)value;
            if (!ok.count(key)) fail(where + "/" + key, "unknown key");
        }
        return j;
    }

    double number(const json& j, const std::string& where) const {
        if (!j.is_number()) fail(where, "expected a number");
        return j.get<double>();
    }

    std::string string(const json& j, const std::string& where) const {
        if (!j.is_string()) fail(where, "expected a string");
        return j.get<std::string>();
    }

    Tensor3 tensor(const json& j, const std::string& where) const {
        if (!j.is_array() || j.size() != 3) fail(where, "expected a 3x3 array of numbers (Hz)");
        Tensor3 A;
        for (int r = 0; r < 3; ++r) {
            const json& row = j[static_cast<std::size_t>(r)];
            if (!row.is_array() || row.size() != 3) fail(where, "expected a 3x3 array of numbers (Hz)");
            for (int c = 0; c < 3; ++c) {
                A(r, c) = number(row[static_cast<std::size_t>(c)], where + "/" + std::to_string(r) + "/" + std::to_string(c));
            }
        }
        return A;
    }

    Eigen::Vector3d vec3(const json& j, const std::string& where) const {
        if (!j.is_array() || j.size() != 3) fail(where, "expected [x, y, z]");
        return {number(j[0], where + "/0"), number(j[1], where + "/1"), number(j[2], where + "/2")};
    }

    std::vector<double> numbers(const json& j, const std::string& where) const {
        if (!j.is_array()) fail(where, "expected an array of numbers");
        std::vector<double> out;
        for (std::size_t i = 0; i < j.size(); ++i) out.push_back(number(j[i], where + "/" + std::to_string(i)));
        return out;
    }
};

template <typename F>
void optional_key(const json& j, const char* key, F&& f) {
    if (j.contains(key)) f(j.at(key));
}

PhysicalConstants parse_constants(const Ctx& ctx, const json& j) {
    ctx.object(j, "/constants",
               {"planck_Js", "boltzmann_JperK", "elementary_charge_C", "gammaE_HzPerG", "gammaN14_HzPerG",
                "gammaC13_HzPerG"});
    PhysicalConstants c;
    optional_key(j, "planck_Js", [&](const json& v) { c.planck_Js = ctx.number(v, "/constants/planck_Js"); });
    optional_key(j, "boltzmann_JperK", [&](const json& v) { c.boltzmann_JperK = ctx.number(v, "/constants/boltzmann_JperK"); });
    optional_key(j, "elementary_charge_C",
                 [&](const json& v) { c.elementary_charge_C = ctx.number(v, "/constants/elementary_charge_C"); });
    optional_key(j, "gammaE_HzPerG", [&](const json& v) { c.gammaE_HzPerG = ctx.number(v, "/constants/gammaE_HzPerG"); });
    optional_key(j, "gammaN14_HzPerG", [&](const json& v) { c.gammaN14_HzPerG = ctx.number(v, "/constants/gammaN14_HzPerG"); });
    optional_key(j, "gammaC13_HzPerG", [&](const json& v) { c.gammaC13_HzPerG = ctx.number(v, "/constants/gammaC13_HzPerG"); });
    c.validate();
    return c;
}

SpinSystem parse_system(const Ctx& ctx, const json& j, const PhysicalConstants& constants) {
    ctx.object(j, "/system", {"D_Hz", "P_Hz", "B_G", "N14", "carbons"});
    SpinSystem s = SpinSystem::with_constants(constants);
    optional_key(j, "D_Hz", [&](const json& v) { s.D = ctx.number(v, "/system/D_Hz"); });
    optional_key(j, "P_Hz", [&](const json& v) { s.P = ctx.number(v, "/system/P_Hz"); });
    optional_key(j, "B_G", [&](const json& v) { s.B = ctx.vec3(v, "/system/B_G"); });
    optional_key(j, "N14", [&](const json& v) {
        ctx.object(v, "/system/N14", {"axial_Hz", "transverse_Hz", "tensor_Hz"});
        s.includeN = true;
        if (v.contains("tensor_Hz")) {
            if (v.contains("axial_Hz") || v.contains("transverse_Hz")) {
                ctx.fail("/system/N14", "give either tensor_Hz or axial_Hz/transverse_Hz, not both");
            }
            s.AN = ctx.tensor(v.at("tensor_Hz"), "/system/N14/tensor_Hz");
        } else {
            if (!v.contains("axial_Hz") || !v.contains("transverse_Hz")) {
                ctx.fail("/system/N14", "axial_Hz and transverse_Hz are both required");
            }
            s.AN = SpinSystem::axial_tensor(ctx.number(v.at("axial_Hz"), "/system/N14/axial_Hz"),
                                            ctx.number(v.at("transverse_Hz"), "/system/N14/transverse_Hz"));
        }
    });
    optional_key(j, "carbons", [&](const json& v) {
        if (!v.is_array()) ctx.fail("/system/carbons", "expected an array");
        for (std::size_t i = 0; i < v.size(); ++i) {
            const std::string where = "/system/carbons/" + std::to_string(i);
            ctx.object(v[i], where, {"label", "tensor_Hz"});
            if (!v[i].contains("label") || !v[i].contains("tensor_Hz")) ctx.fail(where, "label and tensor_Hz are required");
            s.carbons.push_back({ctx.string(v[i].at("label"), where + "/label"),
                                 ctx.tensor(v[i].at("tensor_Hz"), where + "/tensor_Hz")});
        }
    });
    try {
        s.validate();
    } catch (const Error& e) {
        ctx.fail("/system", e.what());
    }
    return s;
}

RamseySettings parse_ramsey(const Ctx& ctx, const json& j) {
    const std::string w = "/simulation/ramsey";
    ctx.object(j, w,
               {"nucleus", "manifold", "rf_Hz", "t_start_s", "t_stop_s", "samples", "T2star_s", "p", "a", "b", "c",
                "phi0_rad", "polarization", "noise_sigma"});
    for (const char* required : {"nucleus", "rf_Hz", "t_stop_s", "samples"}) {
        if (!j.contains(required)) ctx.fail(w, std::string("missing key '") + required + "'");
    }
    RamseySettings r;
    r.nucleus = ctx.string(j.at("nucleus"), w + "/nucleus");
    r.rfFrequency = ctx.number(j.at("rf_Hz"), w + "/rf_Hz");
    optional_key(j, "manifold", [&](const json& v) {
        if (!v.is_number_integer() || (v.get<int>() != 1 && v.get<int>() != -1)) ctx.fail(w + "/manifold", "must be 1 or -1");
        r.manifold = v.get<int>();
    });
    double t0 = 0.0;
    optional_key(j, "t_start_s", [&](const json& v) { t0 = ctx.number(v, w + "/t_start_s"); });
    const double t1 = ctx.number(j.at("t_stop_s"), w + "/t_stop_s");
    const json& n = j.at("samples");
    if (!n.is_number_unsigned() || n.get<std::size_t>() < 8) ctx.fail(w + "/samples", "expected an integer >= 8");
    if (!(t1 > t0)) ctx.fail(w + "/t_stop_s", "must exceed t_start_s");
    r.times = linear_grid(t0, t1, n.get<std::size_t>());
    optional_key(j, "T2star_s", [&](const json& v) { r.t2star = ctx.number(v, w + "/T2star_s"); });
    optional_key(j, "p", [&](const json& v) { r.stretch = ctx.number(v, w + "/p"); });
    optional_key(j, "a", [&](const json& v) { r.amplitude = ctx.number(v, w + "/a"); });
    optional_key(j, "b", [&](const json& v) { r.offset = ctx.number(v, w + "/b"); });
    optional_key(j, "c", [&](const json& v) { r.baseline = ctx.number(v, w + "/c"); });
    optional_key(j, "phi0_rad", [&](const json& v) { r.phase = ctx.number(v, w + "/phi0_rad"); });
    optional_key(j, "polarization", [&](const json& v) { r.polarization = ctx.number(v, w + "/polarization"); });
    optional_key(j, "noise_sigma", [&](const json& v) { r.noiseSigma = ctx.number(v, w + "/noise_sigma"); });
    return r;
}

OdmrSettings parse_odmr(const Ctx& ctx, const json& j) {
    const std::string w = "/simulation/odmr";
    ctx.object(j, w, {"f_start_Hz", "f_stop_Hz", "samples", "linewidth_Hz", "depth"});
    OdmrSettings o;
    optional_key(j, "f_start_Hz", [&](const json& v) { o.fStart = ctx.number(v, w + "/f_start_Hz"); });
    optional_key(j, "f_stop_Hz", [&](const json& v) { o.fStop = ctx.number(v, w + "/f_stop_Hz"); });
    optional_key(j, "samples", [&](const json& v) {
        if (!v.is_number_unsigned() || v.get<std::size_t>() < 2) ctx.fail(w + "/samples", "expected an integer >= 2");
        o.samples = v.get<std::size_t>();
    });
    optional_key(j, "linewidth_Hz", [&](const json& v) { o.linewidth = ctx.number(v, w + "/linewidth_Hz"); });
    optional_key(j, "depth", [&](const json& v) { o.depth = ctx.number(v, w + "/depth"); });
    return o;
}

ExtractSettings parse_extract(const Ctx& ctx, const json& j) {
    const std::string w = "/extract";
    ctx.object(j, w, {"nucleus", "reference_T_K", "slope_HzPerK", "temperatures_K"});
    if (!j.contains("nucleus")) ctx.fail(w, "missing key 'nucleus'");
    ExtractSettings e;
    e.nucleus = ctx.string(j.at("nucleus"), w + "/nucleus");
    optional_key(j, "reference_T_K", [&](const json& v) { e.referenceT = ctx.number(v, w + "/reference_T_K"); });
    optional_key(j, "slope_HzPerK", [&](const json& v) { e.slopePerK = ctx.tensor(v, w + "/slope_HzPerK"); });
    optional_key(j, "temperatures_K", [&](const json& v) { e.temperatures = ctx.numbers(v, w + "/temperatures_K"); });
    if (e.temperatures.empty()) e.temperatures = {e.referenceT};
    return e;
}

ThermoSettings parse_thermo(const Ctx& ctx, const json& j) {
    const std::string w = "/thermo";
    ctx.object(j, w, {"aStc0_Hz", "cStc_Hz", "T_start_K", "T_stop_K", "T_step_K", "derivative_T_K", "merge_window_meV"});
    ThermoSettings t;
    optional_key(j, "aStc0_Hz", [&](const json& v) { t.aStc0 = ctx.number(v, w + "/aStc0_Hz"); });
    optional_key(j, "cStc_Hz", [&](const json& v) { t.cStc = ctx.number(v, w + "/cStc_Hz"); });
    optional_key(j, "T_start_K", [&](const json& v) { t.TStart = ctx.number(v, w + "/T_start_K"); });
    optional_key(j, "T_stop_K", [&](const json& v) { t.TStop = ctx.number(v, w + "/T_stop_K"); });
    optional_key(j, "T_step_K", [&](const json& v) { t.TStep = ctx.number(v, w + "/T_step_K"); });
    optional_key(j, "derivative_T_K", [&](const json& v) { t.derivativeT = ctx.number(v, w + "/derivative_T_K"); });
    optional_key(j, "merge_window_meV", [&](const json& v) { t.mergeWindow_meV = ctx.number(v, w + "/merge_window_meV"); });
    if (!(t.TStep > 0) || !(t.TStop >= t.TStart)) ctx.fail(w, "temperature grid needs T_step_K > 0 and T_stop_K >= T_start_K");
    return t;
}

}  // namespace

std::string RunConfig::resolve(const std::string& path) const {
    if (path.empty()) return path;
    const std::filesystem::path p(path);
    if (p.is_absolute() || baseDirectory.empty()) return path;
    return (std::filesystem::path(baseDirectory) / p).lexically_normal().string();
}

RunConfig parse_config_text(const std::string& text, const std::string& source, const std::string& baseDirectory) {
    const Ctx ctx{source};
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ValidationError(source + ": malformed JSON: " + e.what());
    }
    ctx.object(root, "", {"constants", "system", "simulation", "extract", "thermo", "paths"});
    RunConfig cfg;
    cfg.baseDirectory = baseDirectory;
    optional_key(root, "constants", [&](const json& v) { cfg.constants = parse_constants(ctx, v); });
    cfg.system = SpinSystem::with_constants(cfg.constants);
    optional_key(root, "system", [&](const json& v) { cfg.system = parse_system(ctx, v, cfg.constants); });
    optional_key(root, "simulation", [&](const json& v) {
        ctx.object(v, "/simulation", {"seed", "ramsey", "odmr"});
        optional_key(v, "seed", [&](const json& s) {
            if (!s.is_number_unsigned()) ctx.fail("/simulation/seed", "expected a non-negative integer");
            cfg.seed = s.get<std::uint64_t>();
        });
        optional_key(v, "ramsey", [&](const json& r) { cfg.ramsey = parse_ramsey(ctx, r); });
        optional_key(v, "odmr", [&](const json& o) { cfg.odmr = parse_odmr(ctx, o); });
    });
    optional_key(root, "extract", [&](const json& v) { cfg.extract = parse_extract(ctx, v); });
    optional_key(root, "thermo", [&](const json& v) { cfg.thermo = parse_thermo(ctx, v); });
    optional_key(root, "paths", [&](const json& v) {
        ctx.object(v, "/paths", {"measurements", "modes", "expansion", "trace"});
        optional_key(v, "measurements", [&](const json& p) { cfg.paths.measurements = ctx.string(p, "/paths/measurements"); });
        optional_key(v, "modes", [&](const json& p) { cfg.paths.modes = ctx.string(p, "/paths/modes"); });
        optional_key(v, "expansion", [&](const json& p) { cfg.paths.expansion = ctx.string(p, "/paths/expansion"); });
        optional_key(v, "trace", [&](const json& p) { cfg.paths.trace = ctx.string(p, "/paths/trace"); });
    });
    if (cfg.ramsey) cfg.ramsey->seed = cfg.seed;
    return cfg;
}

RunConfig load_config(const std::string& path) {
    const std::string text = read_file(path);
    const std::string base = std::filesystem::path(path).parent_path().string();
    return parse_config_text(text, path, base);
}

std::string system_to_json(const SpinSystem& system, int indent) {
    auto tensor = [](const Tensor3& A) {
        json t = json::array();
        for (int r = 0; r < 3; ++r) t.push_back({A(r, 0), A(r, 1), A(r, 2)});
        return t;
    };
    json j;
    j["D_Hz"] = system.D;
    j["P_Hz"] = system.P;
    j["B_G"] = {system.B.x(), system.B.y(), system.B.z()};
    if (system.includeN) j["N14"] = {{"tensor_Hz", tensor(system.AN)}};
    json carbons = json::array();
    for (const auto& c : system.carbons) carbons.push_back({{"label", c.label}, {"tensor_Hz", tensor(c.A)}});
    j["carbons"] = carbons;
    return j.dump(indent);
}

SpinSystem parse_system_json(const std::string& text, const PhysicalConstants& constants) {
    const Ctx ctx{"system"};
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ValidationError(std::string("system: malformed JSON: ") + e.what());
    }
    return parse_system(ctx, j, constants);
}

}  // namespace nvthermo
