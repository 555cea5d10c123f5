// Copyright 2026 The nvthermo Authors
// SPDX-License-Identifier: Apache-2.0

#include "nvthermo/tables.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "nvthermo/errors.hpp"

namespace nvthermo {

namespace {

struct Field {
    std::string_view text;
    std::size_t column;  // 1-based
};

struct Row {
    std::size_t line;
    std::vector<Field> fields;
};

bool is_blank(char c) { return c == ' ' || c == '\t'; }

Field trimmed(std::string_view line, std::size_t begin, std::size_t end) {
    while (begin < end && is_blank(line[begin])) ++begin;
    while (end > begin && is_blank(line[end - 1])) --end;
    return Field{line.substr(begin, end - begin), begin + 1};
}

// Splits the document into header-checked rows of exactly the header's width.
std::vector<Row> read_rows(std::string_view text, const std::string& source, std::string_view header) {
    if (text.substr(0, 3) == "\xEF\xBB\xBF") text.remove_prefix(3);
    const std::size_t width = static_cast<std::size_t>(std::count(header.begin(), header.end(), ',')) + 1;
    std::vector<Row> rows;
    bool haveHeader = false;
    std::size_t lineNo = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t eol = text.find('\n', pos);
        if (eol == std::string_view::npos) eol = text.size();
        std::string_view line = text.substr(pos, eol - pos);
        pos = eol + 1;
        ++lineNo;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        const Field whole = trimmed(line, 0, line.size());
        if (whole.text.empty() || whole.text.front() == '#') {
            if (eol == text.size()) break;
            continue;
        }
        Row row{lineNo, {}};
        std::size_t start = 0;
        while (true) {
            const std::size_t comma = line.find(',', start);
            const std::size_t stop = comma == std::string_view::npos ? line.size() : comma;
            row.fields.push_back(trimmed(line, start, stop));
            if (comma == std::string_view::npos) break;
            start = comma + 1;
        }
        if (!haveHeader) {
            std::string joined;
            for (std::size_t i = 0; i < row.fields.size(); ++i) {
                if (i) joined += ',';
                joined += row.fields[i].text;
            }
            if (joined != header) {
                // Point at the first differing column.
                std::size_t col = 1;
                std::string_view expected = header;
                for (std::size_t i = 0; i < row.fields.size(); ++i) {
                    const std::size_t c = expected.find(',');
                    const std::string_view name = expected.substr(0, c);
                    if (row.fields[i].text != name) {
                        col = row.fields[i].column;
                        break;
                    }
                    expected = c == std::string_view::npos ? std::string_view{} : expected.substr(c + 1);
                    col = row.fields[i].column + row.fields[i].text.size();
                }
                throw ParseError(source, lineNo, col,
                                 "header must be '" + std::string(header) + "', found '" + joined + "'");
            }
            haveHeader = true;
        } else {
            if (row.fields.size() != width) {
                const std::size_t col = row.fields.size() < width ? line.size() + 1
                                                                   : row.fields[width].column;
                throw ParseError(source, lineNo, col,
                                 "expected " + std::to_string(width) + " columns, found " +
                                     std::to_string(row.fields.size()));
            }
            rows.push_back(std::move(row));
        }
        if (eol == text.size()) break;
    }
    if (!haveHeader) throw ParseError(source, lineNo == 0 ? 1 : lineNo, 1, "missing header '" + std::string(header) + "'");
    return rows;
}

double parse_number(const Field& f, std::size_t line, const std::string& source, const char* name) {
    double v = 0.0;
    const char* first = f.text.data();
    const char* last = first + f.text.size();
    if (!f.text.empty() && *first == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (f.text.empty() || ec != std::errc() || ptr != last || !std::isfinite(v)) {
        throw ParseError(source, line, f.column,
                         std::string("malformed number in column '") + name + "': '" + std::string(f.text) + "'");
    }
    return v;
}

int parse_int(const Field& f, std::size_t line, const std::string& source, const char* name) {
    int v = 0;
    const char* first = f.text.data();
    const char* last = first + f.text.size();
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (f.text.empty() || ec != std::errc() || ptr != last) {
        throw ParseError(source, line, f.column,
                         std::string("malformed integer in column '") + name + "': '" + std::string(f.text) + "'");
    }
    return v;
}

}  // namespace

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string format_exact(double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    (void)ec;
    return std::string(buf, ptr);
}

std::string format_sig(double v, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, v);
    return buf;
}

std::vector<MeasurementRecord> parse_measurements_text(std::string_view text, const std::string& source) {
    std::vector<MeasurementRecord> out;
    for (const Row& row : read_rows(text, source, kMeasurementHeader)) {
        MeasurementRecord r;
        const auto& f = row.fields;
        if (f[0].text.empty()) throw ParseError(source, row.line, f[0].column, "empty nvId");
        if (f[1].text.empty()) throw ParseError(source, row.line, f[1].column, "empty nucleus");
        r.nvId = std::string(f[0].text);
        r.nucleus = std::string(f[1].text);
        r.T = parse_number(f[2], row.line, source, "T_K");
        r.omegaPlus = parse_number(f[3], row.line, source, "omegaPlus_Hz");
        r.omegaMinus = parse_number(f[4], row.line, source, "omegaMinus_Hz");
        r.sigma = parse_number(f[5], row.line, source, "sigma_Hz");
        if (!(r.T > 0)) throw ParseError(source, row.line, f[2].column, "temperature must be positive");
        if (!(r.sigma > 0)) {
            throw ParseError(source, row.line, f[5].column,
                             "sigma must be positive in row " + std::to_string(row.line));
        }
        out.push_back(std::move(r));
    }
    return out;
}

std::vector<MeasurementRecord> parse_measurements(const std::string& path) {
    return parse_measurements_text(read_file(path), path);
}

PhononModeTable parse_phonon_table_text(std::string_view text, const std::string& source) {
    PhononModeTable table;
    std::set<int> seen;
    for (const Row& row : read_rows(text, source, kPhononHeader)) {
        const auto& f = row.fields;
        PhononMode m;
        m.index = parse_int(f[0], row.line, source, "index");
        m.energy_meV = parse_number(f[1], row.line, source, "energy_meV");
        m.b = parse_number(f[2], row.line, source, "b_Hz");
        m.c = parse_number(f[3], row.line, source, "c_Hz");
        if (!seen.insert(m.index).second) {
            throw ParseError(source, row.line, f[0].column, "duplicate mode index " + std::to_string(m.index));
        }
        if (!(m.energy_meV > 0)) throw ParseError(source, row.line, f[1].column, "mode energy must be positive");
        table.modes.push_back(m);
    }
    return table;
}

PhononModeTable parse_phonon_table(const std::string& path) {
    return parse_phonon_table_text(read_file(path), path);
}

ExpansionTable parse_expansion_table_text(std::string_view text, const std::string& source) {
    std::vector<double> T, y;
    for (const Row& row : read_rows(text, source, kExpansionHeader)) {
        const auto& f = row.fields;
        const double t = parse_number(f[0], row.line, source, "T_K");
        const double e = parse_number(f[1], row.line, source, "rel_expansion");
        if (t < 0) throw ParseError(source, row.line, f[0].column, "negative temperature");
        if (!T.empty() && !(t > T.back())) {
            throw ParseError(source, row.line, f[0].column, "temperatures must increase strictly");
        }
        if (!y.empty() && e < y.back()) {
            throw ParseError(source, row.line, f[1].column, "relative expansion must be non-decreasing in T");
        }
        if (t == 0.0 && e != 0.0) throw ParseError(source, row.line, f[1].column, "relative expansion at 0 K must be 0");
        T.push_back(t);
        y.push_back(e);
    }
    if (T.size() < 2) throw ParseError(source, 1, 1, "expansion table needs at least two records");
    return ExpansionTable(std::move(T), std::move(y));
}

ExpansionTable parse_expansion_table(const std::string& path) {
    return parse_expansion_table_text(read_file(path), path);
}

RamseyTrace parse_trace_text(std::string_view text, const std::string& source) {
    RamseyTrace trace;
    for (const Row& row : read_rows(text, source, kTraceHeader)) {
        const double t = parse_number(row.fields[0], row.line, source, "t_s");
        if (!trace.times.empty() && !(t > trace.times.back())) {
            throw ParseError(source, row.line, row.fields[0].column, "times must increase strictly");
        }
        trace.times.push_back(t);
        trace.signal.push_back(parse_number(row.fields[1], row.line, source, "contrast"));
    }
    if (trace.times.empty()) throw ParseError(source, 1, 1, "trace has no samples");
    return trace;
}

RamseyTrace parse_trace(const std::string& path) { return parse_trace_text(read_file(path), path); }

void write_measurements(std::ostream& out, const std::vector<MeasurementRecord>& records) {
    out << kMeasurementHeader << '\n';
    for (const auto& r : records) {
        out << r.nvId << ',' << r.nucleus << ',' << format_exact(r.T) << ',' << format_exact(r.omegaPlus) << ','
            << format_exact(r.omegaMinus) << ',' << format_exact(r.sigma) << '\n';
    }
}

void write_phonon_table(std::ostream& out, const PhononModeTable& table) {
    out << kPhononHeader << '\n';
    for (const auto& m : table.modes) {
        out << m.index << ',' << format_exact(m.energy_meV) << ',' << format_exact(m.b) << ',' << format_exact(m.c)
            << '\n';
    }
}

void write_expansion_table(std::ostream& out, const ExpansionTable& table) {
    out << kExpansionHeader << '\n';
    for (std::size_t i = 0; i < table.temperatures().size(); ++i) {
        out << format_exact(table.temperatures()[i]) << ',' << format_exact(table.values()[i]) << '\n';
    }
}

void write_trace(std::ostream& out, const RamseyTrace& trace) {
    out << kTraceHeader << '\n';
    for (std::size_t i = 0; i < trace.times.size(); ++i) {
        out << format_exact(trace.times[i]) << ',' << format_exact(trace.signal[i]) << '\n';
    }
}

void write_spectrum(std::ostream& out, const OdmrSpectrum& spectrum) {
    out << kSpectrumHeader << '\n';
    for (std::size_t i = 0; i < spectrum.frequencies.size(); ++i) {
        out << format_exact(spectrum.frequencies[i]) << ',' << format_exact(spectrum.signal[i]) << '\n';
    }
}

}  // namespace nvthermo
