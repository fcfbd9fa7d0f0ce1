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

#ifndef CQED_FIT_HPP
#define CQED_FIT_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>
#include <unsupported/Eigen/FFT>

#include "cqed/constants.hpp"
#include "cqed/errors.hpp"
#include "cqed/least_squares.hpp"
#include "cqed/text.hpp"

// Fits of the four measurement models:
//
//   T1 decay         A exp(-t/T1) + B
//   Ramsey / echo    A exp(-t/T2) cos(2 pi dnu t + phi) + B   (t in us, dnu in MHz)
//   resonance        P (kappa/2)^2 / ((f - f0)^2 + (kappa/2)^2) + B   (power, f in GHz)
//   histogram        A exp(-(x - mu)^2 / (2 s^2))

namespace cqed {

enum class TraceKind { T1Decay, Ramsey, Echo, ResonanceSweep };

inline const char *to_string(TraceKind k) {
    switch (k) {
        case TraceKind::T1Decay:
            return "t1";
        case TraceKind::Ramsey:
            return "ramsey";
        case TraceKind::Echo:
            return "echo";
        case TraceKind::ResonanceSweep:
            return "resonance";
    }
    return "?";
}

inline TraceKind parse_trace_kind(const std::string &s) {
    if (s == "t1") {
        return TraceKind::T1Decay;
    }
    if (s == "ramsey") {
        return TraceKind::Ramsey;
    }
    if (s == "echo") {
        return TraceKind::Echo;
    }
    if (s == "resonance") {
        return TraceKind::ResonanceSweep;
    }
    throw InputError("unknown trace kind '" + s + "'");
}

inline constexpr std::size_t kMinTracePoints = 8;

/// Sampled measurement: x in us for time-domain kinds, GHz for sweeps.
struct TimeTrace {
    TraceKind kind = TraceKind::T1Decay;
    std::vector<double> x;
    std::vector<double> y;
    std::map<std::string, std::string> meta;

    void validate() const {
        detail::require(x.size() == y.size(), "trace x and y lengths differ");
        detail::require(x.size() >= kMinTracePoints, "trace needs at least 8 points");
        for (std::size_t i = 0; i < x.size(); ++i) {
            detail::require(std::isfinite(x[i]) && std::isfinite(y[i]), "trace values must be finite");
            if (i > 0) {
                detail::require(x[i] > x[i - 1], "trace abscissa must be strictly increasing");
            }
        }
    }
};

namespace detail {

inline void require_kind(const TimeTrace &t, std::initializer_list<TraceKind> kinds) {
    for (auto k : kinds) {
        if (t.kind == k) {
            return;
        }
    }
    throw InputError(std::string("trace kind '") + to_string(t.kind) + "' does not match this fit");
}

inline void require_varying(std::span<const double> y) {
    auto [lo, hi] = std::minmax_element(y.begin(), y.end());
    double scale = std::max(std::abs(*lo), std::abs(*hi));
    if (!(*hi - *lo > 1e-12 * scale) || *hi == *lo) {
        throw FitError("constant signal: nothing to fit");
    }
}

inline double mean_of(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) {
        s += x;
    }
    return s / static_cast<double>(v.size());
}

inline double median_of(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

inline void require_converged(const FitResult &r, const char *what) {
    if (!r.converged) {
        throw FitError(std::string(what) + " fit did not converge in " + std::to_string(r.iterations) + " iterations");
    }
    for (double v : r.params) {
        if (!std::isfinite(v)) {
            throw FitError(std::string(what) + " fit produced non-finite parameters");
        }
    }
}

/// Negates parameter j and the matching covariance row and column.
inline void flip_sign(FitResult &r, std::size_t j) {
    r.params[j] = -r.params[j];
    r.covariance.row(static_cast<Eigen::Index>(j)) *= -1.0;
    r.covariance.col(static_cast<Eigen::Index>(j)) *= -1.0;
}

inline double wrap_phase(double phi) {
    double w = std::remainder(phi, kTwoPi);
    return w <= -std::numbers::pi ? w + kTwoPi : w;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Model definitions

inline Model exponential_decay_model(double amplitude_scale = 1.0) {
    return {{"amplitude", "t1_us", "offset"},
            [](double t, std::span<const double> p) { return p[0] * std::exp(-t / p[1]) + p[2]; },
            {amplitude_scale, 0.0, amplitude_scale}};
}

inline Model damped_sinusoid_model(double amplitude_scale = 1.0) {
    return {{"amplitude", "t2_us", "detuning_mhz", "phase", "offset"},
            [](double t, std::span<const double> p) {
                return p[0] * std::exp(-t / p[1]) * std::cos(kTwoPi * p[2] * t + p[3]) + p[4];
            },
            {amplitude_scale, 0.0, 0.0, 1.0, amplitude_scale}};
}

inline double lorentzian(double f, double f0, double kappa, double peak, double offset) {
    const double hw2 = 0.25 * kappa * kappa;
    const double d = f - f0;
    return peak * hw2 / (d * d + hw2) + offset;
}

inline Model lorentzian_model(double amplitude_scale = 1.0, double width_scale = 1.0) {
    return {{"f0_ghz", "kappa_ghz", "peak", "offset"},
            [](double f, std::span<const double> p) { return lorentzian(f, p[0], p[1], p[2], p[3]); },
            {width_scale, width_scale, amplitude_scale, amplitude_scale}};
}

inline double gaussian(double x, double amplitude, double mean, double sigma) {
    const double z = (x - mean) / sigma;
    return amplitude * std::exp(-0.5 * z * z);
}

inline Model gaussian_model(double amplitude_scale = 1.0, double width_scale = 1.0) {
    return {{"amplitude", "mean", "sigma"},
            [](double x, std::span<const double> p) { return gaussian(x, p[0], p[1], p[2]); },
            {amplitude_scale, width_scale, width_scale}};
}

// ---------------------------------------------------------------------------
// Initial guesses

/// Offset from the trace tail, amplitude from the first sample, T1 from the
/// delay where the baseline-subtracted signal falls to 1/e.
inline std::vector<double> guess_exponential(const TimeTrace &t) {
    const std::size_t n = t.y.size();
    const std::size_t tail = std::max<std::size_t>(2, n / 10);
    std::vector<double> tail_values(t.y.end() - static_cast<std::ptrdiff_t>(tail), t.y.end());
    const double offset = detail::mean_of(tail_values);
    const double amplitude = t.y.front() - offset;
    double t1 = 0.0;
    if (amplitude != 0.0) {
        const double target = std::exp(-1.0);
        for (std::size_t i = 1; i < n; ++i) {
            double prev = (t.y[i - 1] - offset) / amplitude;
            double cur = (t.y[i] - offset) / amplitude;
            if (cur <= target && prev > target) {
                double frac = (prev - target) / (prev - cur);
                t1 = t.x[i - 1] + frac * (t.x[i] - t.x[i - 1]) - t.x.front();
                break;
            }
        }
    }
    if (!(t1 > 0.0)) {
        t1 = (t.x.back() - t.x.front()) / 3.0;
    }
    return {amplitude, t1, offset};
}

/// Frequency (MHz) of the largest peak of the zero-padded discrete spectrum
/// of the mean-subtracted signal, searched within [f_lo, f_hi].
inline double dominant_frequency(const TimeTrace &t, double f_lo, double f_hi) {
    const std::size_t n = t.x.size();
    const double span = t.x.back() - t.x.front();
    const double dt = span / static_cast<double>(n - 1);
    const double mean = detail::mean_of(t.y);

    bool uniform = true;
    for (std::size_t i = 1; i < n && uniform; ++i) {
        uniform = std::abs((t.x[i] - t.x[i - 1]) - dt) <= 1e-9 * dt;
    }

    // Power on a grid of spacing `resolution`, then a parabolic peak refinement.
    std::vector<double> power;
    double resolution = 0.0;
    if (uniform) {
        std::size_t padded = 1;
        while (padded < 8 * n) {
            padded <<= 1;
        }
        std::vector<double> buffer(padded, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            buffer[i] = t.y[i] - mean;
        }
        Eigen::FFT<double> fft;
        std::vector<std::complex<double>> spectrum;
        fft.fwd(spectrum, buffer);
        resolution = 1.0 / (static_cast<double>(padded) * dt);
        power.resize(padded / 2 + 1);
        for (std::size_t k = 0; k < power.size(); ++k) {
            power[k] = std::norm(spectrum[k]);
        }
    } else {
        resolution = 1.0 / (8.0 * span);
        const auto bins = static_cast<std::size_t>(std::ceil(f_hi / resolution)) + 2;
        power.resize(bins);
        for (std::size_t k = 0; k < bins; ++k) {
            const double f = static_cast<double>(k) * resolution;
            double re = 0.0;
            double im = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                const double arg = kTwoPi * f * t.x[i];
                re += (t.y[i] - mean) * std::cos(arg);
                im += (t.y[i] - mean) * std::sin(arg);
            }
            power[k] = re * re + im * im;
        }
    }

    const auto k_lo = static_cast<std::size_t>(std::max(0.0, std::ceil(f_lo / resolution)));
    const auto k_hi = std::min(power.size() - 1, static_cast<std::size_t>(std::floor(f_hi / resolution)));
    detail::require(k_lo <= k_hi, "empty frequency search window");
    std::size_t best = k_lo;
    for (std::size_t k = k_lo; k <= k_hi; ++k) {
        if (power[k] > power[best]) {
            best = k;
        }
    }
    double f = static_cast<double>(best) * resolution;
    if (best > 0 && best + 1 < power.size()) {
        const double denom = power[best - 1] - 2.0 * power[best] + power[best + 1];
        if (denom < 0.0) {
            const double shift = 0.5 * (power[best - 1] - power[best + 1]) / denom;
            if (std::abs(shift) <= 1.0) {
                f += shift * resolution;
            }
        }
    }
    return f;
}

namespace detail {

/// Linear least squares for (A cos phi, A sin phi, B) with T2 and detuning held fixed.
inline std::vector<double> linear_sinusoid_parameters(const TimeTrace &t, double t2, double detuning, double *sse) {
    const Eigen::Index n = static_cast<Eigen::Index>(t.x.size());
    Eigen::MatrixXd design(n, 3);
    Eigen::VectorXd rhs(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        double env = std::exp(-t.x[i] / t2);
        double arg = kTwoPi * detuning * t.x[i];
        design(i, 0) = env * std::cos(arg);
        design(i, 1) = -env * std::sin(arg);
        design(i, 2) = 1.0;
        rhs[i] = t.y[i];
    }
    Eigen::Vector3d c = design.colPivHouseholderQr().solve(rhs);
    if (sse) {
        *sse = (design * c - rhs).squaredNorm();
    }
    const double amplitude = std::hypot(c[0], c[1]);
    const double phase = std::atan2(c[1], c[0]);
    return {amplitude, t2, detuning, phase, c[2]};
}

}  // namespace detail

/// Detuning from the discrete spectrum, then T2 by a log-spaced scan with
/// amplitude, phase and offset solved linearly at each T2.
inline std::vector<double> guess_damped_sinusoid(const TimeTrace &t, std::optional<double> detuning_hint = {}) {
    const double span = t.x.back() - t.x.front();
    const double dt = span / static_cast<double>(t.x.size() - 1);
    const double nyquist = 0.5 / dt;
    double detuning = 0.0;
    if (detuning_hint) {
        detuning = dominant_frequency(t, 0.5 * std::abs(*detuning_hint), std::min(2.0 * std::abs(*detuning_hint), nyquist));
    } else {
        detuning = dominant_frequency(t, 1.0 / span, nyquist);
    }
    if (detuning * span < 2.0) {
        throw FitError("fewer than two oscillation periods sampled");
    }
    std::vector<double> best;
    double best_sse = std::numeric_limits<double>::infinity();
    const int steps = 40;
    for (int k = 0; k <= steps; ++k) {
        double t2 = span / 50.0 * std::pow(500.0, static_cast<double>(k) / steps);
        double sse = 0.0;
        auto p = detail::linear_sinusoid_parameters(t, t2, detuning, &sse);
        if (sse < best_sse) {
            best_sse = sse;
            best = p;
        }
    }
    return best;
}

inline std::vector<double> guess_lorentzian(const TimeTrace &t, std::vector<std::string> *warnings = nullptr) {
    auto max_it = std::max_element(t.y.begin(), t.y.end());
    const std::size_t peak_index = static_cast<std::size_t>(max_it - t.y.begin());
    const double offset = *std::min_element(t.y.begin(), t.y.end());
    const double peak = *max_it - offset;
    const double half = offset + 0.5 * peak;
    if (warnings && (peak_index == 0 || peak_index + 1 == t.y.size())) {
        warnings->push_back("peak at sweep boundary");
    }
    double left = t.x.front();
    for (std::size_t i = peak_index; i > 0; --i) {
        if (t.y[i - 1] < half) {
            double frac = (t.y[i] - half) / (t.y[i] - t.y[i - 1]);
            left = t.x[i] - frac * (t.x[i] - t.x[i - 1]);
            break;
        }
    }
    double right = t.x.back();
    for (std::size_t i = peak_index; i + 1 < t.y.size(); ++i) {
        if (t.y[i + 1] < half) {
            double frac = (t.y[i] - half) / (t.y[i] - t.y[i + 1]);
            right = t.x[i] + frac * (t.x[i + 1] - t.x[i]);
            break;
        }
    }
    double kappa = right - left;
    if (!(kappa > 0.0)) {
        kappa = (t.x.back() - t.x.front()) / 10.0;
    }
    return {t.x[peak_index], kappa, peak, offset};
}

// ---------------------------------------------------------------------------
// Fits

/// Optional initial parameters, in the order of the model's names.
using InitialGuess = std::optional<std::vector<double>>;

inline FitResult fit_exponential_decay(const TimeTrace &trace, const InitialGuess &initial = {}) {
    trace.validate();
    detail::require_kind(trace, {TraceKind::T1Decay});
    detail::require_varying(trace.y);
    auto p0 = initial ? *initial : guess_exponential(trace);
    auto model = exponential_decay_model(std::abs(p0[0]));
    auto r = least_squares_core(model, p0, trace.x, trace.y);
    detail::require_converged(r, "exponential decay");
    if (!(r.value("t1_us") > 0.0)) {
        throw FitError("fitted T1 is not positive");
    }
    return r;
}

/// Shared by Ramsey and echo traces. A supplied detuning is refined on the
/// discrete spectrum within a factor of two, and amplitude, phase and offset
/// are re-solved linearly at the supplied T2 before the nonlinear fit.
inline FitResult fit_damped_sinusoid(const TimeTrace &trace, const InitialGuess &initial = {}) {
    trace.validate();
    detail::require_kind(trace, {TraceKind::Ramsey, TraceKind::Echo});
    detail::require_varying(trace.y);
    std::vector<double> p0;
    if (initial) {
        detail::require(initial->size() == 5, "damped sinusoid needs 5 initial parameters");
        const double span = trace.x.back() - trace.x.front();
        const double nyquist = 0.5 * static_cast<double>(trace.x.size() - 1) / span;
        const double hint = std::abs((*initial)[2]);
        detail::require(hint > 0.0 && (*initial)[1] > 0.0, "initial T2 and detuning must be positive");
        double detuning = dominant_frequency(trace, 0.5 * hint, std::min(2.0 * hint, nyquist));
        if (detuning * span < 2.0) {
            throw FitError("fewer than two oscillation periods sampled");
        }
        p0 = detail::linear_sinusoid_parameters(trace, (*initial)[1], detuning, nullptr);
    } else {
        p0 = guess_damped_sinusoid(trace);
    }
    auto model = damped_sinusoid_model(std::abs(p0[0]));
    auto r = least_squares_core(model, p0, trace.x, trace.y);
    detail::require_converged(r, "damped sinusoid");

    // Canonical form: amplitude > 0, detuning > 0, phase in (-pi, pi].
    if (r.params[2] < 0.0) {
        detail::flip_sign(r, 2);
        detail::flip_sign(r, 3);
    }
    if (r.params[0] < 0.0) {
        detail::flip_sign(r, 0);
        r.params[3] += std::numbers::pi;
    }
    r.params[3] = detail::wrap_phase(r.params[3]);
    if (!(r.value("t2_us") > 0.0)) {
        throw FitError("fitted T2 is not positive");
    }
    if (r.params[0] <= 3.0 * r.sigmas[0]) {
        r.warnings.push_back("oscillation amplitude is not significant: degenerate fit");
    }
    return r;
}

/// Power Lorentzian. The fit runs on the abscissa mapped to [-1, 1] so that
/// linewidths far below the carrier frequency stay well conditioned.
inline FitResult fit_lorentzian(const TimeTrace &trace, const InitialGuess &initial = {}) {
    trace.validate();
    detail::require_kind(trace, {TraceKind::ResonanceSweep});
    detail::require_varying(trace.y);
    std::vector<std::string> warnings;
    auto p0 = guess_lorentzian(trace, &warnings);
    if (initial) {
        detail::require(initial->size() == 4, "Lorentzian needs 4 initial parameters");
        p0 = *initial;
    }
    const double center = 0.5 * (trace.x.front() + trace.x.back());
    const double half_span = 0.5 * (trace.x.back() - trace.x.front());
    std::vector<double> u(trace.x.size());
    for (std::size_t i = 0; i < u.size(); ++i) {
        u[i] = (trace.x[i] - center) / half_span;
    }
    std::vector<double> q0{(p0[0] - center) / half_span, p0[1] / half_span, p0[2], p0[3]};
    auto model = lorentzian_model(std::abs(q0[2]), std::abs(q0[1]));
    auto r = least_squares_core(model, q0, u, trace.y);
    detail::require_converged(r, "Lorentzian");

    // Back to GHz.
    Eigen::Vector4d scale(half_span, half_span, 1.0, 1.0);
    r.params[0] = center + half_span * r.params[0];
    r.params[1] = std::abs(half_span * r.params[1]);
    r.covariance = scale.asDiagonal() * r.covariance * scale.asDiagonal();
    for (std::size_t j = 0; j < 4; ++j) {
        r.sigmas[j] = std::sqrt(std::max(0.0, r.covariance(j, j)));
    }
    r.warnings = warnings;
    if (r.params[0] < trace.x.front() || r.params[0] > trace.x.back()) {
        r.warnings.push_back("fitted center lies outside the sweep");
    }
    return r;
}

/// Gaussian curve fit to sampled (x, y), e.g. histogram counts over bin centers.
inline FitResult fit_gaussian_curve(std::span<const double> x, std::span<const double> y, const InitialGuess &initial = {}) {
    detail::require(x.size() == y.size(), "x and y lengths differ");
    detail::require(x.size() >= 4, "need at least 4 points for a Gaussian fit");
    std::vector<double> p0;
    if (initial) {
        detail::require(initial->size() == 3, "Gaussian needs 3 initial parameters");
        p0 = *initial;
    } else {
        double w = 0.0;
        double m1 = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            w += y[i];
            m1 += y[i] * x[i];
        }
        detail::require(w > 0.0, "Gaussian fit needs positive weights");
        m1 /= w;
        double m2 = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            m2 += y[i] * (x[i] - m1) * (x[i] - m1);
        }
        p0 = {*std::max_element(y.begin(), y.end()), m1, std::sqrt(std::max(m2 / w, 1e-300))};
    }
    auto model = gaussian_model(std::abs(p0[0]), std::abs(p0[2]));
    auto r = least_squares_core(model, p0, x, y);
    detail::require_converged(r, "Gaussian");
    r.params[2] = std::abs(r.params[2]);
    return r;
}

// ---------------------------------------------------------------------------
// Histogram statistics

struct BinningPolicy {
    std::optional<int> bins;  // default: ceil(sqrt(n))
};

struct HistogramStats {
    std::vector<double> values;
    std::vector<double> bin_edges;
    std::vector<int> counts;
    double mean = 0.0;
    double sigma = 0.0;
    std::vector<std::size_t> outliers;  // indices into values
    FitResult fit;
};

inline constexpr std::size_t kMinStatsValues = 20;

namespace detail {

/// Mean and standard deviation with their standard errors, in the layout of
/// a Gaussian fit result. converged is false: these are not fitted values.
inline FitResult moment_estimates(std::span<const double> values, double bin_width) {
    const double n = static_cast<double>(values.size());
    const double mean = mean_of(values);
    double ss = 0.0;
    for (double v : values) {
        ss += (v - mean) * (v - mean);
    }
    const double sigma = std::sqrt(ss / (n - 1.0));
    FitResult r;
    r.names = {"amplitude", "mean", "sigma"};
    r.params = {n * bin_width / (std::sqrt(kTwoPi) * sigma), mean, sigma};
    r.sigmas = {0.0, sigma / std::sqrt(n), sigma / std::sqrt(2.0 * (n - 1.0))};
    r.covariance = Eigen::Vector3d(r.sigmas[0], r.sigmas[1], r.sigmas[2]).array().square().matrix().asDiagonal();
    return r;
}

}  // namespace detail

/// Histogram, Gaussian least-squares fit over the bin centers, and the
/// values lying more than 3 fitted sigmas from the fitted mean.
inline HistogramStats gaussian_stats(std::span<const double> values, const BinningPolicy &binning = {}) {
    detail::require(values.size() >= kMinStatsValues, "need at least 20 values");
    for (double v : values) {
        detail::require(std::isfinite(v), "values must be finite");
    }
    auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
    const double lo = *lo_it;
    const double hi = *hi_it;
    detail::require(hi > lo, "all values are identical");

    const int bins = binning.bins.value_or(static_cast<int>(std::ceil(std::sqrt(static_cast<double>(values.size())))));
    detail::require(bins >= 4, "need at least 4 bins");

    HistogramStats s;
    s.values.assign(values.begin(), values.end());
    s.bin_edges.resize(bins + 1);
    for (int i = 0; i <= bins; ++i) {
        s.bin_edges[i] = (lo * (bins - i) + hi * i) / bins;
    }
    s.counts.assign(bins, 0);
    const double width = (hi - lo) / bins;
    for (double v : values) {
        int b = static_cast<int>(std::floor((v - lo) / width));
        s.counts[std::clamp(b, 0, bins - 1)] += 1;
    }

    std::vector<double> centers(bins);
    std::vector<double> heights(bins);
    for (int i = 0; i < bins; ++i) {
        centers[i] = 0.5 * (s.bin_edges[i] + s.bin_edges[i + 1]);
        heights[i] = s.counts[i];
    }

    // Robust start: median and scaled median absolute deviation.
    std::vector<double> sorted(values.begin(), values.end());
    const double median = detail::median_of(sorted);
    std::vector<double> deviations(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        deviations[i] = std::abs(values[i] - median);
    }
    double spread = 1.4826 * detail::median_of(deviations);
    if (!(spread > 0.0)) {
        spread = (hi - lo) / 4.0;
    }
    const double amplitude = static_cast<double>(values.size()) * width / (std::sqrt(kTwoPi) * spread);
    try {
        s.fit = fit_gaussian_curve(centers, heights, std::vector<double>{amplitude, median, spread});
        s.mean = s.fit.value("mean");
        s.sigma = s.fit.value("sigma");
    } catch (const FitError &e) {
        // Histograms without a Gaussian shape (e.g. two spikes): fall back to
        // sample moments and say so.
        s.fit = detail::moment_estimates(values, width);
        s.fit.warnings.push_back(std::string("Gaussian fit failed (") + e.what() + "); sample moments reported");
        s.mean = s.fit.value("mean");
        s.sigma = s.fit.value("sigma");
    }
    if (!(s.sigma > 0.0)) {
        throw FitError("Gaussian fit produced a non-positive width");
    }
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (values[i] < s.mean - 3.0 * s.sigma || values[i] > s.mean + 3.0 * s.sigma) {
            s.outliers.push_back(i);
        }
    }
    return s;
}

// ---------------------------------------------------------------------------
// JSON

inline nlohmann::ordered_json to_json(const FitResult &r) {
    auto params = nlohmann::ordered_json::object();
    auto sigmas = nlohmann::ordered_json::object();
    for (std::size_t i = 0; i < r.names.size(); ++i) {
        params[r.names[i]] = round_to_output(r.params[i]);
        sigmas[r.names[i]] = round_to_output(r.sigmas[i]);
    }
    // ordered_json is vector-backed: no references are held across inserts.
    nlohmann::ordered_json j;
    j["params"] = std::move(params);
    j["sigmas"] = std::move(sigmas);
    j["residual_rms"] = round_to_output(r.residual_rms);
    j["converged"] = r.converged;
    j["iterations"] = r.iterations;
    if (!r.warnings.empty()) {
        j["warnings"] = r.warnings;
    }
    return j;
}

inline nlohmann::ordered_json to_json(const HistogramStats &s) {
    nlohmann::ordered_json j;
    j["n"] = s.values.size();
    j["mean"] = round_to_output(s.mean);
    j["sigma"] = round_to_output(s.sigma);
    j["mean_sigma"] = round_to_output(s.fit.sigma("mean"));
    j["sigma_sigma"] = round_to_output(s.fit.sigma("sigma"));
    auto edges = nlohmann::ordered_json::array();
    for (double e : s.bin_edges) {
        edges.push_back(round_to_output(e));
    }
    j["bin_edges"] = edges;
    j["counts"] = s.counts;
    j["outliers"] = s.outliers;
    auto outlier_values = nlohmann::ordered_json::array();
    for (auto i : s.outliers) {
        outlier_values.push_back(round_to_output(s.values[i]));
    }
    j["outlier_values"] = outlier_values;
    if (!s.fit.warnings.empty()) {
        j["warnings"] = s.fit.warnings;
    }
    return j;
}

}  // namespace cqed

#endif  // CQED_FIT_HPP
