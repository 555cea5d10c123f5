// Copyright 2026 The nvthermo Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file tables.hpp
 * @brief Comma-separated table formats.
 *
 * Every file starts with a fixed, unit-suffixed header line. A UTF-8 byte
 * order mark, CRLF line endings, surrounding blanks, empty lines and lines
 * starting with '#' are accepted; anything else that deviates from the
 * schema is a ParseError carrying path, line and column.
 *
 *   measurements: nvId,nucleus,T_K,omegaPlus_Hz,omegaMinus_Hz,sigma_Hz
 *   phonon modes: index,energy_meV,b_Hz,c_Hz
 *   expansion:    T_K,rel_expansion
 *   Ramsey trace: t_s,contrast
 *   ODMR spectrum: f_Hz,signal
 */

#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "nvthermo/ramsey.hpp"
#include "nvthermo/thermo.hpp"

namespace nvthermo {

struct MeasurementRecord {
    std::string nvId;
    std::string nucleus;
    double T = 0.0;           // K
    double omegaPlus = 0.0;   // Hz
    double omegaMinus = 0.0;  // Hz
    double sigma = 0.0;       // Hz, one-sigma uncertainty of each frequency
};

inline constexpr std::string_view kMeasurementHeader = "nvId,nucleus,T_K,omegaPlus_Hz,omegaMinus_Hz,sigma_Hz";
inline constexpr std::string_view kPhononHeader = "index,energy_meV,b_Hz,c_Hz";
inline constexpr std::string_view kExpansionHeader = "T_K,rel_expansion";
inline constexpr std::string_view kTraceHeader = "t_s,contrast";
inline constexpr std::string_view kSpectrumHeader = "f_Hz,signal";

std::vector<MeasurementRecord> parse_measurements(const std::string& path);
std::vector<MeasurementRecord> parse_measurements_text(std::string_view text, const std::string& source);

PhononModeTable parse_phonon_table(const std::string& path);
PhononModeTable parse_phonon_table_text(std::string_view text, const std::string& source);

ExpansionTable parse_expansion_table(const std::string& path);
ExpansionTable parse_expansion_table_text(std::string_view text, const std::string& source);

RamseyTrace parse_trace(const std::string& path);
RamseyTrace parse_trace_text(std::string_view text, const std::string& source);

void write_measurements(std::ostream& out, const std::vector<MeasurementRecord>& records);
void write_phonon_table(std::ostream& out, const PhononModeTable& table);
void write_expansion_table(std::ostream& out, const ExpansionTable& table);
void write_trace(std::ostream& out, const RamseyTrace& trace);
void write_spectrum(std::ostream& out, const OdmrSpectrum& spectrum);

/// Shortest text that reads back to the same double.
std::string format_exact(double v);

/// Fixed significant digits, for human-facing tables.
std::string format_sig(double v, int digits = 12);

/// Whole file as bytes; ValidationError when unreadable.
std::string read_file(const std::string& path);

}  // namespace nvthermo
