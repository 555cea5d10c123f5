// Copyright 2026 The nvthermo Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <filesystem>
#include <string>

#include "nvthermo/config.hpp"
#include "nvthermo/demo.hpp"
#include "nvthermo/errors.hpp"

using namespace nvthermo;

namespace {

std::string error_of(const std::string& text) {
    try {
        parse_config_text(text, "cfg.json", "/base");
    } catch (const ValidationError& e) {
        return e.what();
    }
    return {};
}

}  // namespace

TEST_CASE("minimal and empty configurations") {
    const RunConfig c = parse_config_text("{}", "cfg.json", "");
    CHECK(c.seed == 0);
    CHECK(!c.ramsey);
    CHECK(!c.thermo);
    CHECK(c.system.carbons.empty());
}

TEST_CASE("unknown keys are rejected with their JSON path") {
    CHECK(error_of(R"({"sytem": {}})").find("cfg.json: /sytem") == 0);
    CHECK(error_of(R"({"system": {"D_Hz": 2.87e9, "B_gauss": [0,0,1]}})").find("/system/B_gauss") != std::string::npos);
    CHECK(error_of(R"({"system": {"carbons": [{"label": "C1", "tensor_Hz": [[1,0,0],[0,1,0],[0,0,1]], "x": 1}]}})")
              .find("/system/carbons/0/x") != std::string::npos);
    CHECK(error_of(R"({"simulation": {"ramsey": {"T2": 1}}})").find("/simulation/ramsey/T2") != std::string::npos);
}

TEST_CASE("type and range errors") {
    CHECK(!error_of(R"({"system": {"D_Hz": "big"}})").empty());
    CHECK(!error_of(R"({"system": {"B_G": [0, 0]}})").empty());
    CHECK(!error_of(R"({"system": {"carbons": [{"label": "C1", "tensor_Hz": [[1,2,0],[0,1,0],[0,0,1]]}]}})").empty());
    CHECK(!error_of(R"({"simulation": {"seed": -1}})").empty());
    CHECK(!error_of("{not json").empty());
    CHECK(!error_of("[]").empty());
}

TEST_CASE("relative paths resolve against the config directory") {
    const RunConfig c =
        parse_config_text(R"({"paths": {"modes": "modes.csv", "expansion": "/abs/e.csv"}})", "cfg.json", "/data/run");
    CHECK(c.resolve(c.paths.modes) == "/data/run/modes.csv");
    CHECK(c.resolve(c.paths.expansion) == "/abs/e.csv");
    CHECK(c.resolve("") == "");
}

TEST_CASE("system JSON round trip") {
    const SpinSystem s = demo_system();
    const SpinSystem back = parse_system_json(system_to_json(s));
    CHECK(back.D == s.D);
    CHECK(back.P == s.P);
    CHECK(back.B == s.B);
    CHECK(back.includeN == s.includeN);
    CHECK(back.AN == s.AN);
    REQUIRE(back.carbons.size() == s.carbons.size());
    for (std::size_t k = 0; k < s.carbons.size(); ++k) {
        CHECK(back.carbons[k].label == s.carbons[k].label);
        CHECK(back.carbons[k].A == s.carbons[k].A);
    }
    CHECK(system_to_json(back) == system_to_json(s));
}

TEST_CASE("bundled demo configuration loads") {
    const std::string dir = std::string(NVTHERMO_SOURCE_DIR) + "/data/demo";
    const RunConfig c = load_config(dir + "/config.json");
    CHECK(c.seed == kDemoSeed);
    REQUIRE(c.ramsey);
    REQUIRE(c.extract);
    REQUIRE(c.thermo);
    REQUIRE(c.odmr);
    CHECK(c.system.carbons.size() == 1);
    CHECK(c.system.carbons[0].label == kDemoCarbon);
    CHECK(c.ramsey->times.size() == 241);
    CHECK(std::filesystem::exists(c.resolve(c.paths.measurements)));
    CHECK(std::filesystem::exists(c.resolve(c.paths.modes)));
    CHECK_THROWS_AS(load_config(dir + "/absent.json"), ValidationError);
}
