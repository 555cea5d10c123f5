// Copyright 2026 The nvthermo Authors
// SPDX-License-Identifier: Apache-2.0

#include "nvthermo/thermo.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "nvthermo/errors.hpp"

namespace nvthermo {

namespace {

class NeumaierSum {
public:
    void add(double v) {
        const double t = sum_ + v;
        if (std::abs(sum_) >= std::abs(v)) {
            comp_ += (sum_ - t) + v;
        } else {
            comp_ += (v - t) + sum_;
        }
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0, comp_ = 0.0;
};

void check_energy(double energy_meV) {
    if (!(energy_meV > 0) || !std::isfinite(energy_meV)) {
        throw DomainError("bose_einstein: phonon energy must be positive, got " + std::to_string(energy_meV) + " meV");
    }
}

void check_temperature(double T) {
    if (!(T >= 0) || !std::isfinite(T)) {
        throw DomainError("temperature must be finite and non-negative, got " + std::to_string(T) + " K");
    }
}

}  // namespace

double compensated_sum(std::span<const double> values) {
    NeumaierSum s;
    for (double v : values) s.add(v);
    return s.value();
}

void PhononModeTable::validate() const {
    std::set<int> seen;
    for (const PhononMode& m : modes) {
        if (!(m.energy_meV > 0) || !std::isfinite(m.energy_meV)) {
            throw ValidationError("phonon table: mode " + std::to_string(m.index) + " has non-positive energy");
        }
        if (!std::isfinite(m.b) || !std::isfinite(m.c)) {
            throw ValidationError("phonon table: mode " + std::to_string(m.index) + " has non-finite coefficients");
        }
        if (!seen.insert(m.index).second) {
            throw ValidationError("phonon table: duplicate mode index " + std::to_string(m.index));
        }
    }
}

ExpansionTable::ExpansionTable(std::vector<double> temperatures, std::vector<double> expansion)
    : T_(std::move(temperatures)), y_(std::move(expansion)) {
    const std::size_t n = T_.size();
    if (n < 2 || y_.size() != n) throw ValidationError("expansion table: need at least two (T, expansion) records");
    for (std::size_t i = 0; i < n; ++i) {
        if (!std::isfinite(T_[i]) || !std::isfinite(y_[i])) throw ValidationError("expansion table: non-finite record");
        if (T_[i] < 0) throw ValidationError("expansion table: negative temperature");
        if (i > 0 && !(T_[i] > T_[i - 1])) throw ValidationError("expansion table: temperatures must increase strictly");
        if (i > 0 && y_[i] < y_[i - 1]) throw ValidationError("expansion table: expansion must be non-decreasing in T");
    }
    if (T_.front() == 0.0 && y_.front() != 0.0) {
        throw ValidationError("expansion table: relative expansion at 0 K must be 0");
    }

    // Fritsch–Carlson slopes.
    std::vector<double> h(n - 1), delta(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        h[i] = T_[i + 1] - T_[i];
        delta[i] = (y_[i + 1] - y_[i]) / h[i];
    }
    slope_.assign(n, 0.0);
    if (n == 2) {
        slope_[0] = slope_[1] = delta[0];
        return;
    }
    for (std::size_t i = 1; i + 1 < n; ++i) {
        if (delta[i - 1] * delta[i] <= 0) {
            slope_[i] = 0.0;
        } else {
            const double w1 = 2 * h[i] + h[i - 1], w2 = h[i] + 2 * h[i - 1];
            slope_[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
        }
    }
    auto end_slope = [](double h0, double h1, double d0, double d1) {
        double d = ((2 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
        if (d * d0 <= 0) {
            d = 0.0;
        } else if (d0 * d1 <= 0 && std::abs(d) > std::abs(3 * d0)) {
            d = 3 * d0;
        }
        return d;
    };
    slope_[0] = end_slope(h[0], h[1], delta[0], delta[1]);
    slope_[n - 1] = end_slope(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
}

std::size_t ExpansionTable::cell(double T) const {
    if (T_.empty()) throw ValidationError("expansion table is empty");
    if (!(T >= T_.front() && T <= T_.back())) {
        std::ostringstream msg;
        msg << "expansion table covers " << T_.front() << "-" << T_.back() << " K; " << T
            << " K would need extrapolation";
        throw ExtrapolationError(msg.str());
    }
    const auto it = std::upper_bound(T_.begin(), T_.end(), T);
    std::size_t i = static_cast<std::size_t>(it - T_.begin());
    i = i == 0 ? 0 : i - 1;
    return std::min(i, T_.size() - 2);
}

double ExpansionTable::value(double T) const {
    const std::size_t i = cell(T);
    if (T == T_[i]) return y_[i];
    if (T == T_[i + 1]) return y_[i + 1];
    const double h = T_[i + 1] - T_[i];
    const double s = (T - T_[i]) / h;
    const double h00 = (1 + 2 * s) * (1 - s) * (1 - s);
    const double h10 = s * (1 - s) * (1 - s);
    const double h01 = s * s * (3 - 2 * s);
    const double h11 = s * s * (s - 1);
    return h00 * y_[i] + h10 * h * slope_[i] + h01 * y_[i + 1] + h11 * h * slope_[i + 1];
}

double ExpansionTable::derivative(double T) const {
    if (T_.empty() || !(T > T_.front() && T < T_.back())) {
        std::ostringstream msg;
        msg << "expansion derivative at " << T << " K is undefined: temperature must lie strictly inside "
            << (T_.empty() ? 0.0 : T_.front()) << "-" << (T_.empty() ? 0.0 : T_.back()) << " K";
        throw DomainError(msg.str());
    }
    const std::size_t i = cell(T);
    const double h = T_[i + 1] - T_[i];
    const double s = (T - T_[i]) / h;
    const double d00 = 6 * s * s - 6 * s;
    const double d10 = 3 * s * s - 4 * s + 1;
    const double d01 = -6 * s * s + 6 * s;
    const double d11 = 3 * s * s - 2 * s;
    return (d00 * y_[i] + d01 * y_[i + 1]) / h + d10 * slope_[i] + d11 * slope_[i + 1];
}

void ThermoModel::validate() const {
    if (!std::isfinite(aStc0) || !std::isfinite(cStc)) throw ValidationError("thermo model: non-finite A_stc(0) or c_stc");
    constants.validate();
    modes.validate();
    if (expansion.empty()) throw ValidationError("thermo model: missing expansion table");
}

double bose_einstein(double energy_meV, double T, const PhysicalConstants& constants) {
    check_energy(energy_meV);
    check_temperature(T);
    if (T == 0.0) return 0.0;
    const double x = energy_meV / (constants.boltzmann_meVperK() * T);
    return 1.0 / std::expm1(x);
}

double bose_einstein_dT(double energy_meV, double T, const PhysicalConstants& constants) {
    check_energy(energy_meV);
    check_temperature(T);
    if (T == 0.0) return 0.0;
    const double x = energy_meV / (constants.boltzmann_meVperK() * T);
    if (x > 700) return 0.0;
    // dn/dT = (x/T)·eˣ/(eˣ − 1)²
    const double em1 = std::expm1(x);
    return x / T * (em1 + 1.0) / (em1 * em1);
}

double delta_A_dyn(const PhononModeTable& modes, double T, const PhysicalConstants& constants) {
    check_temperature(T);
    NeumaierSum s;
    for (const PhononMode& m : modes.modes) s.add(m.c * bose_einstein(m.energy_meV, T, constants));
    return s.value();
}

double delta_A_stc(const ThermoModel& model, double T) {
    check_temperature(T);
    return model.cStc * model.expansion.value(T);
}

double a_zero(const ThermoModel& model) {
    NeumaierSum s;
    s.add(model.aStc0);
    for (const PhononMode& m : model.modes.modes) s.add(0.5 * m.c);
    return s.value();
}

double a_of_T(const ThermoModel& model, double T) {
    return a_zero(model) + delta_A_stc(model, T) + delta_A_dyn(model.modes, T, model.constants);
}

TempDerivative dA_dT(const ThermoModel& model, double T) {
    TempDerivative out;
    out.stc = model.cStc * model.expansion.derivative(T);
    NeumaierSum s;
    for (const PhononMode& m : model.modes.modes) s.add(m.c * bose_einstein_dT(m.energy_meV, T, model.constants));
    out.dyn = s.value();
    out.total = out.stc + out.dyn;
    return out;
}

PhononModeTable merge_degenerate_modes(const PhononModeTable& modes, double window_meV) {
    if (!(window_meV >= 0)) throw DomainError("merge_degenerate_modes: window must be non-negative");
    std::vector<PhononMode> sorted = modes.modes;
    std::stable_sort(sorted.begin(), sorted.end(),
                     [](const PhononMode& a, const PhononMode& b) { return a.energy_meV < b.energy_meV; });
    PhononModeTable out;
    std::size_t i = 0;
    while (i < sorted.size()) {
        std::size_t j = i;
        while (j < sorted.size() && sorted[j].energy_meV - sorted[i].energy_meV <= window_meV) ++j;
        NeumaierSum c, b, weight, weighted, plain;
        for (std::size_t k = i; k < j; ++k) {
            c.add(sorted[k].c);
            b.add(sorted[k].b);
            weight.add(std::abs(sorted[k].c));
            weighted.add(std::abs(sorted[k].c) * sorted[k].energy_meV);
            plain.add(sorted[k].energy_meV);
        }
        PhononMode merged;
        merged.index = sorted[i].index;
        merged.c = c.value();
        merged.b = b.value();
        merged.energy_meV = weight.value() > 0 ? weighted.value() / weight.value()
                                               : plain.value() / static_cast<double>(j - i);
        out.modes.push_back(merged);
        i = j;
    }
    return out;
}

}  // namespace nvthermo
