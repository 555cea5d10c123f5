// Copyright 2026 The nvthermo Authors
// SPDX-License-Identifier: Apache-2.0

#include "nvthermo/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "nvthermo/errors.hpp"

namespace nvthermo {

namespace {

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string tick_label(double v, double step) {
    if (std::abs(v) < step * 1e-9) v = 0.0;
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

struct Range {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();

    void add(double v) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }

    void pad() {
        if (hi == lo) {
            const double d = lo == 0.0 ? 1.0 : std::abs(lo) * 0.05;
            lo -= d;
            hi += d;
        }
    }
};

}  // namespace

std::string xml_escape(const std::string& text) {
    std::string out;
    out.reserve(text.size());
    for (char ch : text) {
        switch (ch) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            case '\'': out += "&apos;"; break;
            default: out += ch;
        }
    }
    return out;
}

std::vector<double> nice_ticks(double lo, double hi, int target) {
    if (!(hi > lo) || !std::isfinite(lo) || !std::isfinite(hi)) return {lo};
    const double raw = (hi - lo) / std::max(target, 1);
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    double step = mag;
    for (double m : {1.0, 2.0, 5.0, 10.0}) {
        step = m * mag;
        if (step >= raw) break;
    }
    std::vector<double> ticks;
    for (double k = std::ceil(lo / step - 1e-9); k * step <= hi + step * 1e-9; k += 1.0) ticks.push_back(k * step);
    return ticks;
}

std::string render_svg(const Plot& plot) {
    if (plot.series.empty()) throw ValidationError("plot has no series");
    Range xr, yr;
    for (const auto& s : plot.series) {
        if (s.x.size() != s.y.size() || s.x.empty()) throw ValidationError("plot series '" + s.name + "' is empty or mismatched");
        if (!s.yError.empty() && s.yError.size() != s.y.size()) {
            throw ValidationError("plot series '" + s.name + "' has mismatched error bars");
        }
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            const double e = s.yError.empty() ? 0.0 : std::abs(s.yError[i]);
            if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i]) || !std::isfinite(e)) {
                throw ValidationError("plot series '" + s.name + "' contains non-finite values");
            }
            xr.add(s.x[i]);
            yr.add(s.y[i] - e);
            yr.add(s.y[i] + e);
        }
    }
    xr.pad();
    yr.pad();
    const double ym = (yr.hi - yr.lo) * 0.05;
    yr.lo -= ym;
    yr.hi += ym;

    const double left = 80, right = 20, top = 40, bottom = 60;
    const double pw = plot.width - left - right, ph = plot.height - top - bottom;
    auto X = [&](double x) { return left + (x - xr.lo) / (xr.hi - xr.lo) * pw; };
    auto Y = [&](double y) { return top + (yr.hi - y) / (yr.hi - yr.lo) * ph; };

    std::ostringstream o;
    o << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << plot.width << "\" height=\"" << plot.height
      << "\" viewBox=\"0 0 " << plot.width << ' ' << plot.height << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<g font-family=\"sans-serif\" font-size=\"12\">\n";
    o << "<text x=\"" << num(plot.width / 2.0) << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">"
      << xml_escape(plot.title) << "</text>\n";
    o << "<rect x=\"" << num(left) << "\" y=\"" << num(top) << "\" width=\"" << num(pw) << "\" height=\"" << num(ph)
      << "\" fill=\"none\" stroke=\"black\"/>\n";

    const auto xt = nice_ticks(xr.lo, xr.hi), yt = nice_ticks(yr.lo, yr.hi);
    const double xs = xt.size() > 1 ? xt[1] - xt[0] : 1.0, ys = yt.size() > 1 ? yt[1] - yt[0] : 1.0;
    for (double t : xt) {
        if (t < xr.lo || t > xr.hi) continue;
        o << "<line x1=\"" << num(X(t)) << "\" y1=\"" << num(top + ph) << "\" x2=\"" << num(X(t)) << "\" y2=\""
          << num(top + ph + 5) << "\" stroke=\"black\"/>\n"
          << "<text x=\"" << num(X(t)) << "\" y=\"" << num(top + ph + 18) << "\" text-anchor=\"middle\">"
          << tick_label(t, xs) << "</text>\n";
    }
    for (double t : yt) {
        if (t < yr.lo || t > yr.hi) continue;
        o << "<line x1=\"" << num(left - 5) << "\" y1=\"" << num(Y(t)) << "\" x2=\"" << num(left) << "\" y2=\""
          << num(Y(t)) << "\" stroke=\"black\"/>\n"
          << "<text x=\"" << num(left - 8) << "\" y=\"" << num(Y(t) + 4) << "\" text-anchor=\"end\">"
          << tick_label(t, ys) << "</text>\n";
    }
    o << "<text x=\"" << num(left + pw / 2) << "\" y=\"" << num(plot.height - 15.0) << "\" text-anchor=\"middle\">"
      << xml_escape(plot.xLabel) << "</text>\n";
    o << "<text x=\"18\" y=\"" << num(top + ph / 2) << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
      << num(top + ph / 2) << ")\">" << xml_escape(plot.yLabel) << "</text>\n";

    double legendY = top + 15;
    for (const auto& s : plot.series) {
        const std::string color = xml_escape(s.color);
        if (s.line && s.x.size() > 1) {
            o << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
            for (std::size_t i = 0; i < s.x.size(); ++i) o << (i ? " " : "") << num(X(s.x[i])) << ',' << num(Y(s.y[i]));
            o << "\"/>\n";
        }
        for (std::size_t i = 0; i < s.yError.size(); ++i) {
            o << "<line x1=\"" << num(X(s.x[i])) << "\" y1=\"" << num(Y(s.y[i] - s.yError[i])) << "\" x2=\""
              << num(X(s.x[i])) << "\" y2=\"" << num(Y(s.y[i] + s.yError[i])) << "\" stroke=\"" << color << "\"/>\n";
        }
        if (s.markers || (!s.line)) {
            for (std::size_t i = 0; i < s.x.size(); ++i) {
                o << "<circle cx=\"" << num(X(s.x[i])) << "\" cy=\"" << num(Y(s.y[i])) << "\" r=\"3\" fill=\"" << color
                  << "\"/>\n";
            }
        }
        if (!s.name.empty()) {
            o << "<text x=\"" << num(left + pw - 10) << "\" y=\"" << num(legendY) << "\" text-anchor=\"end\" fill=\""
              << color << "\">" << xml_escape(s.name) << "</text>\n";
            legendY += 16;
        }
    }
    o << "</g>\n</svg>\n";
    return o.str();
}

void write_svg(const std::string& path, const Plot& plot) {
    const std::string doc = render_svg(plot);
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ValidationError("cannot open plot file '" + path + "' for writing");
    f << doc;
    if (!f) throw ValidationError("failed writing plot file '" + path + "'");
}

}  // namespace nvthermo
