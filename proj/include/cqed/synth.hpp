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

#ifndef CQED_SYNTH_HPP
#define CQED_SYNTH_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <vector>

#include "cqed/cavity_qed.hpp"
#include "cqed/circuit_model.hpp"
#include "cqed/constants.hpp"
#include "cqed/errors.hpp"
#include "cqed/fit.hpp"
#include "cqed/flux_qubit.hpp"

// Seeded synthetic measurement data.
//
// The random stream is part of the output contract: xoshiro256** (Blackman
// and Vigna, reference implementation at prng.di.unimi.it) with its state
// filled by SplitMix64 from the 64-bit seed. Uniform doubles take the top 53
// bits; normal variates use the Marsaglia polar method. Only IEEE-exact
// operations plus std::log are involved, so output is bit-identical on any
// platform whose libm rounds log correctly.

namespace cqed {

class SplitMix64 {
  public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

  private:
    std::uint64_t state_;
};

class Xoshiro256StarStar {
  public:
    explicit Xoshiro256StarStar(std::uint64_t seed) {
        SplitMix64 sm(seed);
        for (auto &word : s_) {
            word = sm.next();
        }
    }

    std::uint64_t next() {
        const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    /// Uniform in [0, 1).
    double uniform() {
        return static_cast<double>(next() >> 11) * 0x1.0p-53;
    }

    /// Standard normal variate.
    double normal() {
        if (spare_) {
            double v = *spare_;
            spare_.reset();
            return v;
        }
        double u = 0.0;
        double v = 0.0;
        double s = 0.0;
        do {
            u = 2.0 * uniform() - 1.0;
            v = 2.0 * uniform() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double factor = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * factor;
        return u * factor;
    }

  private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }

    std::array<std::uint64_t, 4> s_{};
    std::optional<double> spare_;
};

/// Additive Gaussian noise; sigma in signal units.
struct NoiseSpec {
    double sigma = 0.0;
    std::uint64_t seed = 0;

    void validate() const {
        detail::require(std::isfinite(sigma) && sigma >= 0.0, "noise sigma must be non-negative");
    }
};

/// Default noise level relative to the signal amplitude.
inline constexpr double kDefaultRelativeNoise = 0.02;

namespace detail {

inline void add_noise(std::vector<double> &y, const NoiseSpec &noise) {
    noise.validate();
    if (noise.sigma == 0.0) {
        return;
    }
    Xoshiro256StarStar rng(noise.seed);
    for (auto &v : y) {
        v += noise.sigma * rng.normal();
    }
}

inline std::vector<double> time_grid(double t_max_us, std::size_t n) {
    require(std::isfinite(t_max_us) && t_max_us > 0.0, "t_max must be positive");
    require(n >= kMinTracePoints, "need at least 8 points");
    std::vector<double> t(n);
    for (std::size_t i = 0; i < n; ++i) {
        t[i] = t_max_us * static_cast<double>(i) / static_cast<double>(n - 1);
    }
    return t;
}

}  // namespace detail

/// A exp(-t/T1) + B + noise on a uniform grid over [0, t_max].
inline TimeTrace gen_t1_trace(
    double t1_us, std::size_t n_points, double t_max_us, double amplitude, double offset, const NoiseSpec &noise = {}) {
    detail::require(std::isfinite(t1_us) && t1_us > 0.0, "T1 must be positive");
    TimeTrace trace;
    trace.kind = TraceKind::T1Decay;
    trace.x = detail::time_grid(t_max_us, n_points);
    trace.y.resize(n_points);
    for (std::size_t i = 0; i < n_points; ++i) {
        trace.y[i] = amplitude * std::exp(-trace.x[i] / t1_us) + offset;
    }
    detail::add_noise(trace.y, noise);
    return trace;
}

/// A exp(-t/T2) cos(2 pi dnu t + phi) + B + noise; kind is Ramsey or Echo.
inline TimeTrace gen_ramsey_trace(
    double t2_us, double detuning_mhz, std::size_t n_points, double t_max_us, double amplitude, double phase,
    double offset, const NoiseSpec &noise = {}, TraceKind kind = TraceKind::Ramsey) {
    detail::require(std::isfinite(t2_us) && t2_us > 0.0, "T2 must be positive");
    detail::require(std::isfinite(detuning_mhz) && detuning_mhz >= 0.0, "detuning must be non-negative");
    detail::require(kind == TraceKind::Ramsey || kind == TraceKind::Echo, "kind must be Ramsey or Echo");
    TimeTrace trace;
    trace.kind = kind;
    trace.x = detail::time_grid(t_max_us, n_points);
    trace.y.resize(n_points);
    for (std::size_t i = 0; i < n_points; ++i) {
        const double t = trace.x[i];
        trace.y[i] = amplitude * std::exp(-t / t2_us) * std::cos(kTwoPi * detuning_mhz * t + phase) + offset;
    }
    detail::add_noise(trace.y, noise);
    return trace;
}

/// Power Lorentzian sampled over f0 +- span/2 (GHz).
inline TimeTrace gen_resonance_sweep(
    double f0_ghz, double kappa_ghz, double span_ghz, std::size_t n_points, double peak, double offset,
    const NoiseSpec &noise = {}) {
    detail::require(f0_ghz > 0.0 && kappa_ghz > 0.0, "f0 and kappa must be positive");
    detail::require(span_ghz >= 10.0 * kappa_ghz, "sweep span must cover at least 10 linewidths");
    detail::require(n_points >= kMinTracePoints, "need at least 8 points");
    TimeTrace trace;
    trace.kind = TraceKind::ResonanceSweep;
    trace.x.resize(n_points);
    trace.y.resize(n_points);
    const double lo = f0_ghz - 0.5 * span_ghz;
    const double hi = f0_ghz + 0.5 * span_ghz;
    const double last = static_cast<double>(n_points - 1);
    for (std::size_t i = 0; i < n_points; ++i) {
        trace.x[i] = (lo * (last - i) + hi * i) / last;
        trace.y[i] = lorentzian(trace.x[i], f0_ghz, kappa_ghz, peak, offset);
    }
    detail::add_noise(trace.y, noise);
    return trace;
}

/// Transmission magnitude over a (flux, probe frequency) grid. Rows follow
/// the flux grid; each row holds one value per probe frequency.
struct FluxMap {
    std::vector<double> flux;
    std::vector<double> probe_ghz;
    std::vector<std::vector<double>> magnitude;
};

/// Each flux point contributes two power Lorentzians of width kappa at the
/// dressed frequencies, weighted by their resonator content.
inline FluxMap gen_flux_map(
    const DeviceParams &device, double omega_r_ghz, double g_ghz, double kappa_ghz, double f_start, double f_end,
    int n_flux, double probe_start, double probe_end, int n_probe, int cutoff = kDefaultChargeCutoff) {
    detail::require(kappa_ghz > 0.0, "linewidth must be positive");
    detail::require(probe_start < probe_end && n_probe >= 2, "need an increasing probe grid of at least 2 points");
    auto spectrum = spectrum_sweep(device, f_start, f_end, n_flux, cutoff);
    FluxMap map;
    map.probe_ghz = flux_grid(probe_start, probe_end, n_probe);
    for (const auto &p : spectrum.points) {
        CoupledSystem sys{omega_r_ghz, p.omega01_ghz, g_ghz, kappa_ghz};
        auto dressed = dressed_frequencies(sys);
        const double w_upper = upper_photon_weight(sys);
        std::vector<double> row(map.probe_ghz.size());
        for (std::size_t k = 0; k < row.size(); ++k) {
            const double f = map.probe_ghz[k];
            row[k] = w_upper * lorentzian(f, dressed.upper_ghz, kappa_ghz, 1.0, 0.0) +
                     (1.0 - w_upper) * lorentzian(f, dressed.lower_ghz, kappa_ghz, 1.0, 0.0);
        }
        map.flux.push_back(p.flux_frac);
        map.magnitude.push_back(std::move(row));
    }
    return map;
}

/// Gaussian draws (negative draws resampled) with a fixed number
/// round(fraction * n) of low-side outliers, drawn uniformly from
/// [mean - 8 sigma, mean - 4 sigma] (kept positive) at random positions.
inline std::vector<double> gen_t1_series(
    double mean_us, double sigma_us, std::size_t n, std::uint64_t seed, double outlier_fraction = 0.0) {
    detail::require(n >= 1, "need at least one value");
    detail::require(std::isfinite(mean_us) && mean_us > 0.0, "mean must be positive");
    detail::require(std::isfinite(sigma_us) && sigma_us >= 0.0, "sigma must be non-negative");
    detail::require(outlier_fraction >= 0.0 && outlier_fraction < 1.0, "outlier fraction must lie in [0, 1)");
    Xoshiro256StarStar rng(seed);
    std::vector<double> values(n);
    for (auto &v : values) {
        do {
            v = mean_us + sigma_us * rng.normal();
        } while (v <= 0.0);
    }
    const auto n_outliers = static_cast<std::size_t>(std::llround(outlier_fraction * static_cast<double>(n)));
    if (n_outliers == 0) {
        return values;
    }
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    for (std::size_t i = 0; i < n_outliers; ++i) {
        std::size_t j = i + static_cast<std::size_t>(rng.next() % (n - i));
        std::swap(order[i], order[j]);
    }
    const double hi = mean_us - 4.0 * sigma_us;
    const double lo = std::max(mean_us - 8.0 * sigma_us, 0.0);
    detail::require(sigma_us > 0.0 && hi > 0.0, "low-side outliers need sigma > 0 and mean > 4 sigma");
    for (std::size_t i = 0; i < n_outliers; ++i) {
        double v = 0.0;
        do {
            v = lo + (hi - lo) * rng.uniform();
        } while (v <= 0.0);
        values[order[i]] = v;
    }
    return values;
}

}  // namespace cqed

#endif  // CQED_SYNTH_HPP
