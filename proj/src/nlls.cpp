// Copyright 2026 The nvthermo Authors
// SPDX-License-Identifier: Apache-2.0

#include "nvthermo/nlls.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "nvthermo/errors.hpp"

namespace nvthermo {

std::size_t FitReport::index(const std::string& name) const {
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (names[i] == name) return i;
    }
    throw LookupError("fit report has no parameter '" + name + "'");
}

std::vector<double> numeric_gradient(const NllsModel& model, double x, std::span<const double> p) {
    std::vector<double> grad(p.size());
    std::vector<double> q(p.begin(), p.end());
    for (std::size_t j = 0; j < p.size(); ++j) {
        const double h = 1e-6 * std::max(std::abs(p[j]), 1e-3);
        q[j] = p[j] + h;
        const double up = model.value(x, q);
        q[j] = p[j] - h;
        const double down = model.value(x, q);
        q[j] = p[j];
        grad[j] = (up - down) / (2 * h);
    }
    return grad;
}

namespace {

struct Problem {
    const NllsModel& model;
    std::span<const double> x, y;
    Eigen::VectorXd sqrtw;

    Eigen::VectorXd residual(std::span<const double> p) const {
        Eigen::VectorXd r(static_cast<Eigen::Index>(x.size()));
        for (std::size_t i = 0; i < x.size(); ++i) {
            r(static_cast<Eigen::Index>(i)) = sqrtw(static_cast<Eigen::Index>(i)) * (y[i] - model.value(x[i], p));
        }
        return r;
    }

    // Weighted model Jacobian ∂(√w·f)/∂p.
    Eigen::MatrixXd jacobian(std::span<const double> p) const {
        const auto n = static_cast<Eigen::Index>(x.size());
        const auto m = static_cast<Eigen::Index>(p.size());
        Eigen::MatrixXd J(n, m);
        std::vector<double> grad(p.size());
        for (Eigen::Index i = 0; i < n; ++i) {
            const double xi = x[static_cast<std::size_t>(i)];
            if (model.gradient) {
                model.gradient(xi, p, grad);
            } else {
                grad = numeric_gradient(model, xi, p);
            }
            for (Eigen::Index j = 0; j < m; ++j) J(i, j) = sqrtw(i) * grad[static_cast<std::size_t>(j)];
        }
        return J;
    }
};

double scaled_gradient(const Eigen::MatrixXd& J, const Eigen::VectorXd& r, double ynorm) {
    const Eigen::VectorXd g = J.transpose() * r;
    double worst = 0.0;
    for (Eigen::Index j = 0; j < J.cols(); ++j) {
        const double cn = J.col(j).norm();
        if (cn == 0.0) continue;
        worst = std::max(worst, std::abs(g(j)) / (cn * ynorm));
    }
    return worst;
}

void clamp_to_bounds(const NllsModel& model, std::vector<double>& p) {
    for (std::size_t j = 0; j < p.size(); ++j) {
        if (!model.lower.empty()) p[j] = std::max(p[j], model.lower[j]);
        if (!model.upper.empty()) p[j] = std::min(p[j], model.upper[j]);
    }
}

}  // namespace

FitReport nlls_fit(const NllsModel& model, std::span<const double> x, std::span<const double> y,
                   std::span<const double> weights, std::span<const double> initial,
                   const NllsOptions& options) {
    const std::size_t n = x.size(), m = model.size();
    if (!model.value) throw ValidationError("nlls_fit: model has no value function");
    if (y.size() != n) throw ValidationError("nlls_fit: x and y differ in length");
    if (initial.size() != m) throw ValidationError("nlls_fit: initial guess has the wrong number of parameters");
    if (!weights.empty() && weights.size() != n) throw ValidationError("nlls_fit: weights differ in length from data");
    if ((!model.lower.empty() && model.lower.size() != m) || (!model.upper.empty() && model.upper.size() != m)) {
        throw ValidationError("nlls_fit: bounds have the wrong number of parameters");
    }
    if (n < m) throw RankError("nlls_fit: fewer data points than parameters");
    for (std::size_t i = 0; i < n; ++i) {
        if (!std::isfinite(x[i]) || !std::isfinite(y[i])) {
            throw ValidationError("nlls_fit: non-finite data at index " + std::to_string(i));
        }
        if (!weights.empty() && !(weights[i] > 0 && std::isfinite(weights[i]))) {
            throw ValidationError("nlls_fit: weights must be positive and finite");
        }
    }

    Problem problem{model, x, y, Eigen::VectorXd::Ones(static_cast<Eigen::Index>(n))};
    if (!weights.empty()) {
        for (std::size_t i = 0; i < n; ++i) problem.sqrtw(static_cast<Eigen::Index>(i)) = std::sqrt(weights[i]);
    }
    double ynorm = 0.0;
    for (std::size_t i = 0; i < n; ++i) ynorm += std::pow(problem.sqrtw(static_cast<Eigen::Index>(i)) * y[i], 2);
    ynorm = std::sqrt(ynorm);
    if (ynorm == 0.0) ynorm = 1.0;

    std::vector<double> p(initial.begin(), initial.end());
    clamp_to_bounds(model, p);
    Eigen::VectorXd r = problem.residual(p);
    if (!r.allFinite()) throw ValidationError("nlls_fit: model is not finite at the initial guess");
    double chi2 = r.squaredNorm();

    FitReport report;
    report.names = model.names;
    report.residualHistory.push_back(std::sqrt(chi2));

    double lambda = options.initialDamping;
    Eigen::MatrixXd J = problem.jacobian(p);
    bool stepSmall = false;
    int iter = 0;
    for (; iter < options.maxIterations; ++iter) {
        report.gradientNorm = scaled_gradient(J, r, ynorm);
        if (report.gradientNorm < options.gtol && (iter == 0 || stepSmall || chi2 == 0.0)) {
            report.converged = true;
            break;
        }

        const Eigen::MatrixXd A = J.transpose() * J;
        const Eigen::VectorXd g = J.transpose() * r;
        Eigen::VectorXd diag = A.diagonal();
        const double floor = std::max(diag.maxCoeff(), 1.0) * 1e-15;
        diag = diag.cwiseMax(floor);

        bool accepted = false;
        while (!accepted) {
            Eigen::MatrixXd damped = A;
            damped.diagonal() += lambda * diag;
            const Eigen::VectorXd delta = damped.ldlt().solve(g);
            std::vector<double> trial(m);
            for (std::size_t j = 0; j < m; ++j) trial[j] = p[j] + delta(static_cast<Eigen::Index>(j));
            clamp_to_bounds(model, trial);
            const Eigen::VectorXd rt = problem.residual(trial);
            const double chi2t = rt.allFinite() ? rt.squaredNorm() : std::numeric_limits<double>::infinity();
            if (chi2t < chi2) {
                double stepNorm = 0.0, pNorm = 0.0;
                for (std::size_t j = 0; j < m; ++j) {
                    stepNorm += std::pow(trial[j] - p[j], 2);
                    pNorm += trial[j] * trial[j];
                }
                stepSmall = std::sqrt(stepNorm) <= options.xtol * (std::sqrt(pNorm) + options.xtol);
                p = std::move(trial);
                r = rt;
                chi2 = chi2t;
                report.residualHistory.push_back(std::sqrt(chi2));
                lambda = std::max(lambda / 10.0, 1e-15);
                accepted = true;
            } else {
                lambda *= 10.0;
                if (lambda > 1e16) break;
            }
        }
        if (!accepted) {
            // No downhill step at any damping: we are at the rounding floor.
            report.gradientNorm = scaled_gradient(J, r, ynorm);
            report.converged = report.gradientNorm < options.gtol;
            ++iter;
            break;
        }
        J = problem.jacobian(p);
    }
    if (iter == options.maxIterations) {
        report.gradientNorm = scaled_gradient(J, r, ynorm);
        report.converged = report.gradientNorm < options.gtol && stepSmall;
    }
    report.iterations = iter;
    report.params = p;
    report.residualNorm = std::sqrt(chi2);
    const std::size_t dof = n - m;
    report.reducedChiSquare = dof > 0 ? chi2 / static_cast<double>(dof) : 0.0;

    // Covariance from the column-normalized Jacobian so the rank test is
    // independent of parameter units.
    Eigen::VectorXd colNorm(static_cast<Eigen::Index>(m));
    for (Eigen::Index j = 0; j < static_cast<Eigen::Index>(m); ++j) {
        colNorm(j) = J.col(j).norm();
        if (colNorm(j) == 0.0) {
            throw RankError("nlls_fit: parameter '" + model.names[static_cast<std::size_t>(j)] +
                            "' does not influence the model (zero Jacobian column)");
        }
    }
    const Eigen::MatrixXd Js = J * colNorm.cwiseInverse().asDiagonal();
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(Js, Eigen::ComputeThinV);
    const Eigen::VectorXd sv = svd.singularValues();
    // Central differences carry ~1e-10 relative noise, which would hide an
    // exactly dependent pair of columns from the analytic threshold.
    const double rankTol = model.gradient ? options.rankTolerance : std::max(options.rankTolerance, 1e-7);
    if (sv(sv.size() - 1) <= rankTol * sv(0)) {
        std::ostringstream msg;
        msg << "nlls_fit: singular normal equations (condition " << sv(0) / sv(sv.size() - 1)
            << "); parameters are not identifiable from the data";
        throw RankError(msg.str());
    }
    const Eigen::MatrixXd V = svd.matrixV();
    const Eigen::MatrixXd inv = V * sv.array().square().inverse().matrix().asDiagonal() * V.transpose();
    const Eigen::MatrixXd scaleInv = colNorm.cwiseInverse().asDiagonal();
    const double s2 = dof > 0 ? report.reducedChiSquare : 0.0;
    report.covariance = scaleInv * inv * scaleInv * s2;
    report.sigmas.resize(m);
    for (std::size_t j = 0; j < m; ++j) {
        report.sigmas[j] = std::sqrt(std::max(0.0, report.covariance(static_cast<Eigen::Index>(j),
                                                                        static_cast<Eigen::Index>(j))));
    }
    return report;
}

}  // namespace nvthermo
