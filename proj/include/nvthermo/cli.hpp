// Copyright 2026 The nvthermo Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file cli.hpp
 * @brief Command dispatch for the nvthermo executable.
 *
 *   nvthermo <subcommand> [--config PATH] [--out PATH] [--plot PATH]
 *            [--seed N] [--field-gauss X] [--temp-k X]
 *
 * Subcommands: transitions, extract, simulate-ramsey, fit-fringe, tempco,
 * thermo, simulate-odmr, make-demo. Tables go to --out or the output
 * stream; --plot writes an SVG. NVTHERMO_CONFIG is read when --config is
 * absent.
 */

#pragma once

#include <iosfwd>

namespace nvthermo {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace nvthermo
