// Copyright 2026 The nvthermo Authors
// SPDX-License-Identifier: Apache-2.0

#include "nvthermo/fitting.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <set>
#include <sstream>

#include "nvthermo/errors.hpp"

namespace nvthermo {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kMinPeriods = 3.0;

std::array<double, FringeParams::kCount> to_fixed(std::span<const double> p) {
    std::array<double, FringeParams::kCount> a{};
    std::copy(p.begin(), p.end(), a.begin());
    return a;
}

std::complex<double> fourier_sum(const RamseyTrace& trace, double mean, double f) {
    std::complex<double> acc = 0.0;
    for (std::size_t i = 0; i < trace.times.size(); ++i) {
        const double phase = -kTwoPi * f * trace.times[i];
        acc += (trace.signal[i] - mean) * std::complex<double>(std::cos(phase), std::sin(phase));
    }
    return acc;
}

double trace_mean(const RamseyTrace& trace) {
    double s = 0.0;
    for (double v : trace.signal) s += v;
    return s / static_cast<double>(trace.signal.size());
}

}  // namespace

NllsModel fringe_nlls_model() {
    NllsModel model;
    const auto& names = FringeParams::names();
    model.names.assign(names.begin(), names.end());
    model.value = [](double t, std::span<const double> p) {
        return fringe_model(t, FringeParams::from_array(to_fixed(p)));
    };
    model.gradient = [](double t, std::span<const double> p, std::span<double> grad) {
        const auto g = fringe_gradient(t, FringeParams::from_array(to_fixed(p)));
        std::copy(g.begin(), g.end(), grad.begin());
    };
    const double inf = std::numeric_limits<double>::infinity();
    model.lower = {0.0, -inf, -inf, -inf, 0.0, kStretchLower, -inf};
    model.upper = {inf, inf, inf, inf, inf, kStretchUpper, inf};
    return model;
}

double dominant_frequency(const RamseyTrace& trace) {
    trace.validate();
    const std::size_t n = trace.times.size();
    const double span = trace.times.back() - trace.times.front();
    if (n < 4 || !(span > 0)) throw ValidationError("dominant_frequency: trace too short");
    const double mean = trace_mean(trace);
    const double fmin = kMinPeriods / span;
    const double fmax = 0.5 * static_cast<double>(n - 1) / span;
    const double df = 0.25 / span;
    auto power = [&](double f) { return std::norm(fourier_sum(trace, mean, f)); };

    double best = fmin, bestPower = -1.0;
    for (double f = fmin; f <= fmax; f += df) {
        const double pw = power(f);
        if (pw > bestPower) {
            bestPower = pw;
            best = f;
        }
    }
    // Golden-section refinement inside the neighbouring grid cells.
    double lo = std::max(fmin, best - df), hi = std::min(fmax, best + df);
    const double g = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
    double p1 = power(x1), p2 = power(x2);
    for (int it = 0; it < 60; ++it) {
        if (p1 > p2) {
            hi = x2;
            x2 = x1;
            p2 = p1;
            x1 = hi - g * (hi - lo);
            p1 = power(x1);
        } else {
            lo = x1;
            x1 = x2;
            p1 = p2;
            x2 = lo + g * (hi - lo);
            p2 = power(x2);
        }
    }
    return 0.5 * (lo + hi);
}

FringeParams fringe_initial_guess(const RamseyTrace& trace) {
    trace.validate();
    const auto [mn, mx] = std::minmax_element(trace.signal.begin(), trace.signal.end());
    const double span = trace.times.back() - trace.times.front();
    const double mean = trace_mean(trace);
    FringeParams guess;
    guess.detuning = dominant_frequency(trace);
    // X(f) ≈ (a/2i)·e^{iφ0}·Σenv  ⇒  φ0 = arg X + π/2
    guess.phase = std::arg(fourier_sum(trace, mean, guess.detuning)) + 0.5 * std::numbers::pi;
    guess.amplitude = 0.5 * (*mx - *mn);
    guess.offset = 0.0;
    guess.baseline = mean;
    guess.t2star = 0.5 * span;
    guess.stretch = 1.0;
    return guess;
}

FitReport fit_fringe(const RamseyTrace& trace) {
    trace.validate();
    const auto [mn, mx] = std::minmax_element(trace.signal.begin(), trace.signal.end());
    if (*mx == *mn) throw RankError("fit_fringe: constant trace, no fringe parameters are identifiable");
    return fit_fringe(trace, fringe_initial_guess(trace));
}

FitReport fit_fringe(const RamseyTrace& trace, const FringeParams& initialGuess) {
    trace.validate();
    const auto [mn, mx] = std::minmax_element(trace.signal.begin(), trace.signal.end());
    if (*mx == *mn) throw RankError("fit_fringe: constant trace, no fringe parameters are identifiable");
    const double span = trace.times.back() - trace.times.front();
    if (!(std::abs(initialGuess.detuning) * span >= kMinPeriods)) {
        std::ostringstream msg;
        msg << "fit_fringe: trace spans " << std::abs(initialGuess.detuning) * span
            << " periods of the guessed detuning, at least " << kMinPeriods << " are required";
        throw ContractError(msg.str());
    }
    const NllsModel model = fringe_nlls_model();
    const auto guess = initialGuess.to_array();
    return nlls_fit(model, trace.times, trace.signal, {}, guess);
}

FringeParams fringe_params(const FitReport& report) {
    if (report.params.size() != FringeParams::kCount) {
        throw ValidationError("fringe_params: report does not hold a fringe fit");
    }
    return FringeParams::from_array(to_fixed(report.params));
}

double detuning_sigma_per_unit_noise(const FringeParams& truth, std::span<const double> times) {
    truth.validate();
    Eigen::MatrixXd J(static_cast<Eigen::Index>(times.size()), static_cast<Eigen::Index>(FringeParams::kCount));
    for (std::size_t i = 0; i < times.size(); ++i) {
        const auto g = fringe_gradient(times[i], truth);
        for (std::size_t j = 0; j < FringeParams::kCount; ++j) {
            J(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = g[j];
        }
    }
    const Eigen::MatrixXd cov = (J.transpose() * J).inverse();
    return std::sqrt(cov(1, 1));
}

FitReport fit_line_weighted(const TempSeries& series) {
    if (series.size() < 2) throw ValidationError("fit_line_weighted: need at least two points");
    std::set<double> distinct;
    double S = 0, Sx = 0, Sy = 0, Sxx = 0, Sxy = 0;
    for (const TempPoint& pt : series) {
        if (!std::isfinite(pt.T) || !std::isfinite(pt.value)) throw ValidationError("fit_line_weighted: non-finite point");
        if (!(pt.sigma > 0 && std::isfinite(pt.sigma))) throw ValidationError("fit_line_weighted: sigmas must be positive");
        distinct.insert(pt.T);
    }
    if (distinct.size() < 2) throw RankError("fit_line_weighted: all temperatures are identical");
    // Centre on the weighted mean temperature to keep Δ well conditioned.
    double Tw = 0, W = 0;
    for (const TempPoint& pt : series) {
        const double w = 1.0 / (pt.sigma * pt.sigma);
        Tw += w * pt.T;
        W += w;
    }
    Tw /= W;
    for (const TempPoint& pt : series) {
        const double w = 1.0 / (pt.sigma * pt.sigma);
        const double x = pt.T - Tw;
        S += w;
        Sx += w * x;
        Sy += w * pt.value;
        Sxx += w * x * x;
        Sxy += w * x * pt.value;
    }
    const double delta = S * Sxx - Sx * Sx;
    const double slope = (S * Sxy - Sx * Sy) / delta;
    const double atMean = (Sxx * Sy - Sx * Sxy) / delta;
    const double varSlope = S / delta;
    const double varAtMean = Sxx / delta;
    const double cov = -Sx / delta;

    FitReport report;
    report.names = {"slope", "intercept"};
    const double intercept = atMean - slope * Tw;
    report.params = {slope, intercept};
    const double varIntercept = varAtMean + Tw * Tw * varSlope - 2 * Tw * cov;
    report.sigmas = {std::sqrt(varSlope), std::sqrt(std::max(0.0, varIntercept))};
    report.covariance.resize(2, 2);
    report.covariance << varSlope, cov - Tw * varSlope, cov - Tw * varSlope, varIntercept;
    double chi2 = 0;
    for (const TempPoint& pt : series) {
        const double r = (pt.value - (intercept + slope * pt.T)) / pt.sigma;
        chi2 += r * r;
    }
    report.residualNorm = std::sqrt(chi2);
    report.reducedChiSquare = series.size() > 2 ? chi2 / static_cast<double>(series.size() - 2) : 0.0;
    report.converged = true;
    report.residualHistory = {report.residualNorm};
    return report;
}

WeightedMean weighted_mean(std::span<const double> values, std::span<const double> sigmas, Averaging mode) {
    if (values.empty()) throw ValidationError("weighted_mean: empty input");
    if (values.size() != sigmas.size()) throw ValidationError("weighted_mean: values and sigmas differ in length");
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!std::isfinite(values[i])) throw ValidationError("weighted_mean: non-finite value");
        if (!(sigmas[i] > 0 && std::isfinite(sigmas[i]))) throw ValidationError("weighted_mean: sigmas must be positive");
    }
    WeightedMean out;
    if (mode == Averaging::Plain) {
        double s = 0, v = 0;
        for (std::size_t i = 0; i < values.size(); ++i) {
            s += values[i];
            v += sigmas[i] * sigmas[i];
        }
        const double n = static_cast<double>(values.size());
        out.mean = s / n;
        out.sigma = std::sqrt(v) / n;
        return out;
    }
    double W = 0, s = 0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        const double w = 1.0 / (sigmas[i] * sigmas[i]);
        W += w;
        s += w * values[i];
    }
    out.mean = s / W;
    // Rounding may push a mean of identical values one ulp outside [min, max].
    const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    out.mean = std::clamp(out.mean, *lo, *hi);
    out.sigma = 1.0 / std::sqrt(W);
    return out;
}

double mode_quadratic_factor(double X, double frequency_Hz, const PhysicalConstants& constants) {
    constexpr double kAmu = 1.66053906660e-27;  // kg
    constexpr double kAngstrom = 1e-10;         // m
    const double Xsi = X * std::sqrt(kAmu) * kAngstrom;
    const double omega = kTwoPi * frequency_Hz;
    return omega / constants.hbar_Js() * Xsi * Xsi;
}

ModeCoefficients fit_mode_polynomial(std::span<const ModeSample> samples, double frequency_Hz,
                                     const PhysicalConstants& constants) {
    if (!(frequency_Hz > 0 && std::isfinite(frequency_Hz))) {
        throw DomainError("fit_mode_polynomial: phonon frequency must be positive");
    }
    std::set<double> distinct;
    for (const ModeSample& s : samples) {
        if (!std::isfinite(s.X) || !std::isfinite(s.A)) throw ValidationError("fit_mode_polynomial: non-finite sample");
        distinct.insert(s.X);
    }
    if (distinct.size() < 3) throw RankError("fit_mode_polynomial: need at least three distinct coordinates");
    const auto n = static_cast<Eigen::Index>(samples.size());
    Eigen::MatrixXd M(n, 3);
    Eigen::VectorXd y(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const ModeSample& s = samples[static_cast<std::size_t>(i)];
        M(i, 0) = 1.0;
        M(i, 1) = s.X;
        M(i, 2) = mode_quadratic_factor(s.X, frequency_Hz, constants);
        y(i) = s.A;
    }
    const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(M);
    if (qr.rank() < 3) throw RankError("fit_mode_polynomial: design matrix is rank deficient");
    const Eigen::VectorXd coef = qr.solve(y);
    ModeCoefficients out;
    out.a0 = coef(0);
    out.b = coef(1);
    out.c = coef(2);
    const Eigen::Index dof = n - 3;
    if (dof > 0) {
        const double s2 = (y - M * coef).squaredNorm() / static_cast<double>(dof);
        const Eigen::MatrixXd cov = (M.transpose() * M).inverse() * s2;
        out.sigmaB = std::sqrt(std::max(0.0, cov(1, 1)));
        out.sigmaC = std::sqrt(std::max(0.0, cov(2, 2)));
    } else {
        out.sigmaB = out.sigmaC = std::numeric_limits<double>::infinity();
    }
    return out;
}

ProportionalFit fit_proportional(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw ValidationError("fit_proportional: x and y differ in length");
    if (x.empty()) throw ValidationError("fit_proportional: need at least one point");
    double Sxx = 0, Sxy = 0, Syy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!std::isfinite(x[i]) || !std::isfinite(y[i])) throw ValidationError("fit_proportional: non-finite data");
        Sxx += x[i] * x[i];
        Sxy += x[i] * y[i];
        Syy += y[i] * y[i];
    }
    if (Sxx == 0.0) throw RankError("fit_proportional: every abscissa is zero");
    ProportionalFit out;
    out.slope = Sxy / Sxx;
    double rss = 0;
    for (std::size_t i = 0; i < x.size(); ++i) rss += std::pow(y[i] - out.slope * x[i], 2);
    out.relativeResidual = Syy > 0 ? std::sqrt(rss / Syy) : 0.0;
    out.sigma = x.size() > 1 ? std::sqrt(rss / static_cast<double>(x.size() - 1) / Sxx)
                             : std::numeric_limits<double>::infinity();
    return out;
}

FitReport fit_odmr_dips(std::span<const double> frequencies, std::span<const double> signal,
                        std::span<const double> centerGuesses, double widthGuess) {
    if (centerGuesses.empty()) throw ValidationError("fit_odmr_dips: no dip centers given");
    if (!(widthGuess > 0)) throw ValidationError("fit_odmr_dips: width guess must be positive");
    const std::size_t k = centerGuesses.size();
    NllsModel model;
    std::vector<double> guess;
    for (std::size_t i = 0; i < k; ++i) {
        model.names.push_back("center" + std::to_string(i));
        model.names.push_back("depth" + std::to_string(i));
        model.names.push_back("width" + std::to_string(i));
        // Depth guess from the sample nearest the guessed center.
        std::size_t nearest = 0;
        for (std::size_t j = 1; j < frequencies.size(); ++j) {
            if (std::abs(frequencies[j] - centerGuesses[i]) < std::abs(frequencies[nearest] - centerGuesses[i])) {
                nearest = j;
            }
        }
        guess.insert(guess.end(), {centerGuesses[i], std::max(1e-6, 1.0 - signal[nearest]), widthGuess});
    }
    model.value = [k](double f, std::span<const double> p) {
        double dip = 0.0;
        for (std::size_t i = 0; i < k; ++i) {
            const double d = f - p[3 * i];
            const double h2 = 0.25 * p[3 * i + 2] * p[3 * i + 2];
            dip += p[3 * i + 1] * h2 / (d * d + h2);
        }
        return 1.0 - dip;
    };
    model.gradient = [k](double f, std::span<const double> p, std::span<double> grad) {
        for (std::size_t i = 0; i < k; ++i) {
            const double d = f - p[3 * i];
            const double w = p[3 * i + 2];
            const double h2 = 0.25 * w * w;
            const double den = d * d + h2;
            const double L = h2 / den;
            grad[3 * i] = -p[3 * i + 1] * h2 * 2 * d / (den * den);
            grad[3 * i + 1] = -L;
            grad[3 * i + 2] = -p[3 * i + 1] * (0.5 * w * d * d) / (den * den);
        }
    };
    return nlls_fit(model, frequencies, signal, {}, guess);
}

}  // namespace nvthermo
