// Copyright 2026 The cqedkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef CQED_LEAST_SQUARES_HPP
#define CQED_LEAST_SQUARES_HPP

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "cqed/errors.hpp"

namespace cqed {

/// A scalar model y = f(x; p) with named parameters.
struct Model {
    std::vector<std::string> names;
    std::function<double(double, std::span<const double>)> eval;
    /// Typical magnitude per parameter; sets finite-difference steps for
    /// parameters whose value may be near zero. Empty means "use |p|".
    std::vector<double> scales;

    std::size_t size() const {
        return names.size();
    }
};

struct FitResult {
    std::vector<std::string> names;
    std::vector<double> params;
    std::vector<double> sigmas;
    Eigen::MatrixXd covariance;
    double residual_rms = 0.0;
    bool converged = false;
    int iterations = 0;
    std::vector<std::string> warnings;

    std::size_t index(std::string_view name) const {
        for (std::size_t i = 0; i < names.size(); ++i) {
            if (names[i] == name) {
                return i;
            }
        }
        throw InputError("no fit parameter named '" + std::string(name) + "'");
    }

    double value(std::string_view name) const {
        return params[index(name)];
    }

    double sigma(std::string_view name) const {
        return sigmas[index(name)];
    }
};

struct LeastSquaresOptions {
    int max_iterations = 200;
    double xtol = 1e-12;        // relative parameter step
    double ftol = 1e-15;        // relative cost decrease
    double initial_lambda = 1e-3;
    double max_lambda = 1e16;
};

/// Central-difference Jacobian d f(x_i; p) / d p_j.
inline Eigen::MatrixXd finite_difference_jacobian(
    const Model &model, std::span<const double> p, std::span<const double> x) {
    const std::size_t np = p.size();
    const double rel_step = std::cbrt(std::numeric_limits<double>::epsilon());
    Eigen::MatrixXd jac(x.size(), np);
    std::vector<double> probe(p.begin(), p.end());
    for (std::size_t j = 0; j < np; ++j) {
        double scale = std::abs(p[j]);
        if (j < model.scales.size()) {
            scale = std::max(scale, std::abs(model.scales[j]));
        }
        if (scale == 0.0) {
            scale = 1.0;
        }
        // Exactly representable step so that (p + h) - (p - h) == 2h.
        const double h = (p[j] + rel_step * scale) - p[j];
        for (std::size_t i = 0; i < x.size(); ++i) {
            probe[j] = p[j] + h;
            double fp = model.eval(x[i], probe);
            probe[j] = p[j] - h;
            double fm = model.eval(x[i], probe);
            jac(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = (fp - fm) / (2.0 * h);
        }
        probe[j] = p[j];
    }
    return jac;
}

namespace detail {

inline Eigen::VectorXd residuals(
    const Model &model, std::span<const double> p, std::span<const double> x, std::span<const double> y) {
    Eigen::VectorXd r(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        r[static_cast<Eigen::Index>(i)] = y[i] - model.eval(x[i], p);
    }
    return r;
}

}  // namespace detail

/// Damped least squares (Levenberg-Marquardt with Marquardt diagonal
/// scaling) on a finite-difference Jacobian.
///
/// Returns converged = false when the iteration cap is reached. Throws
/// FitError when the normal matrix is singular at the solution. The
/// covariance is the residual-variance-scaled inverse of J^T J.
inline FitResult least_squares_core(
    const Model &model, std::span<const double> initial, std::span<const double> x, std::span<const double> y,
    const LeastSquaresOptions &options = {}) {
    const std::size_t np = model.size();
    detail::require(initial.size() == np, "initial guess has the wrong number of parameters");
    detail::require(x.size() == y.size(), "x and y lengths differ");
    detail::require(x.size() > np, "need more data points than parameters");
    for (double v : initial) {
        detail::require(std::isfinite(v), "initial guess must be finite");
    }

    std::vector<double> p(initial.begin(), initial.end());
    Eigen::VectorXd r = detail::residuals(model, p, x, y);
    double cost = 0.5 * r.squaredNorm();

    double y_scale = 0.0;
    for (double v : y) {
        y_scale = std::max(y_scale, std::abs(v));
    }
    // Residuals at this level are rounding noise: the data are reproduced exactly.
    const double cost_floor = 0.5 * static_cast<double>(x.size()) * std::pow(1e-14 * std::max(y_scale, 1e-300), 2);

    FitResult out;
    out.names = model.names;
    double lambda = options.initial_lambda;
    bool converged = cost <= cost_floor;
    int iterations = 0;

    while (!converged && iterations < options.max_iterations) {
        ++iterations;
        Eigen::MatrixXd jac = finite_difference_jacobian(model, p, x);
        Eigen::MatrixXd normal = jac.transpose() * jac;
        Eigen::VectorXd gradient = jac.transpose() * r;
        Eigen::VectorXd diag = normal.diagonal();
        const double diag_floor = std::max(diag.maxCoeff(), 1e-300) * 1e-15;
        for (Eigen::Index j = 0; j < diag.size(); ++j) {
            diag[j] = std::max(diag[j], diag_floor);
        }

        bool accepted = false;
        while (!accepted) {
            Eigen::MatrixXd damped = normal;
            damped.diagonal() += lambda * diag;
            Eigen::LDLT<Eigen::MatrixXd> ldlt(damped);
            Eigen::VectorXd step = ldlt.solve(gradient);
            if (ldlt.info() != Eigen::Success || !step.allFinite()) {
                lambda *= 10.0;
            } else {
                std::vector<double> trial(p);
                for (std::size_t j = 0; j < np; ++j) {
                    trial[j] += step[static_cast<Eigen::Index>(j)];
                }
                Eigen::VectorXd trial_r = detail::residuals(model, trial, x, y);
                double trial_cost = 0.5 * trial_r.squaredNorm();
                if (std::isfinite(trial_cost) && trial_cost < cost) {
                    double max_rel = 0.0;
                    for (std::size_t j = 0; j < np; ++j) {
                        double ref = std::abs(p[j]);
                        if (j < model.scales.size()) {
                            ref = std::max(ref, std::abs(model.scales[j]));
                        }
                        max_rel = std::max(max_rel, std::abs(step[static_cast<Eigen::Index>(j)]) / std::max(ref, 1e-300));
                    }
                    const double decrease = (cost - trial_cost) / cost;
                    // Small steps only signal convergence when they are close
                    // to Gauss-Newton steps, not artifacts of heavy damping.
                    const bool near_gauss_newton = lambda <= 1.0;
                    p = std::move(trial);
                    r = std::move(trial_r);
                    cost = trial_cost;
                    lambda = std::max(lambda / 10.0, 1e-12);
                    accepted = true;
                    if ((near_gauss_newton && (max_rel <= options.xtol || decrease <= options.ftol)) ||
                        cost <= cost_floor) {
                        converged = true;
                    }
                } else {
                    lambda *= 10.0;
                }
            }
            if (!accepted && lambda > options.max_lambda) {
                // No downhill step exists at working precision: stationary point.
                converged = true;
                break;
            }
        }
    }

    Eigen::MatrixXd jac = finite_difference_jacobian(model, p, x);
    Eigen::MatrixXd normal = jac.transpose() * jac;
    // Rank check on the column-equilibrated normal matrix.
    Eigen::VectorXd col_norm = normal.diagonal().cwiseSqrt();
    if ((col_norm.array() <= 0.0).any() || !col_norm.allFinite()) {
        throw FitError("singular normal matrix: a parameter does not affect the model");
    }
    Eigen::MatrixXd scaled = col_norm.cwiseInverse().asDiagonal() * normal * col_norm.cwiseInverse().asDiagonal();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(scaled, Eigen::EigenvaluesOnly);
    if (eig.info() != Eigen::Success || eig.eigenvalues().minCoeff() <= 1e-13 * eig.eigenvalues().maxCoeff()) {
        throw FitError("singular normal matrix: parameters are not identifiable from the data");
    }
    Eigen::MatrixXd scaled_inverse = scaled.ldlt().solve(Eigen::MatrixXd::Identity(np, np));
    Eigen::MatrixXd inverse = col_norm.cwiseInverse().asDiagonal() * scaled_inverse * col_norm.cwiseInverse().asDiagonal();

    const double dof = static_cast<double>(x.size() - np);
    const double variance = 2.0 * cost / dof;
    out.covariance = variance * 0.5 * (inverse + inverse.transpose());
    out.params = p;
    out.sigmas.resize(np);
    for (std::size_t j = 0; j < np; ++j) {
        out.sigmas[j] = std::sqrt(std::max(0.0, out.covariance(j, j)));
    }
    out.residual_rms = std::sqrt(2.0 * cost / static_cast<double>(x.size()));
    out.converged = converged;
    out.iterations = iterations;
    return out;
}

}  // namespace cqed

#endif  // CQED_LEAST_SQUARES_HPP
