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

#ifndef CQED_CAVITY_QED_HPP
#define CQED_CAVITY_QED_HPP

#include <cmath>
#include <vector>

#include "cqed/circuit_model.hpp"
#include "cqed/constants.hpp"
#include "cqed/errors.hpp"
#include "cqed/flux_qubit.hpp"

// Two-level qubit coupled to a single resonator mode (Jaynes-Cummings,
// one excitation). Frequencies are ordinary frequencies in GHz; factors of
// 2 pi appear only where a rate is converted to a time.

namespace cqed {

struct CoupledSystem {
    double omega_r_ghz = 0.0;
    double omega_q_ghz = 0.0;
    double g_ghz = 0.0;
    double kappa_ghz = 0.0;

    double detuning() const {
        return omega_q_ghz - omega_r_ghz;
    }

    void validate() const {
        detail::require(std::isfinite(omega_r_ghz) && omega_r_ghz > 0.0, "resonator frequency must be positive");
        detail::require(std::isfinite(omega_q_ghz), "qubit frequency must be finite");
        detail::require(std::isfinite(g_ghz) && g_ghz >= 0.0, "coupling must be non-negative");
        detail::require(std::isfinite(kappa_ghz) && kappa_ghz >= 0.0, "linewidth must be non-negative");
    }
};

struct DressedPair {
    double upper_ghz = 0.0;
    double lower_ghz = 0.0;

    double splitting() const {
        return upper_ghz - lower_ghz;
    }
};

/// (w_r + w_q)/2 +- sqrt(Delta^2/4 + g^2).
inline DressedPair dressed_frequencies(const CoupledSystem &sys) {
    sys.validate();
    const double mean = 0.5 * (sys.omega_r_ghz + sys.omega_q_ghz);
    const double half = std::hypot(0.5 * sys.detuning(), sys.g_ghz);
    return {mean + half, mean - half};
}

inline double vacuum_rabi_splitting(double g_ghz) {
    detail::require(std::isfinite(g_ghz) && g_ghz > 0.0, "coupling must be positive");
    return 2.0 * g_ghz;
}

/// Purcell-limited T1 = [2 pi kappa (g/Delta)^2]^-1, in us.
inline double purcell_t1(const CoupledSystem &sys) {
    sys.validate();
    detail::require(sys.g_ghz > 0.0, "Purcell T1 is unbounded for g = 0");
    detail::require(sys.kappa_ghz > 0.0, "Purcell T1 needs a positive linewidth");
    const double delta = sys.detuning();
    detail::require(delta != 0.0, "Purcell formula is invalid on resonance");
    const double ratio = sys.g_ghz / delta;
    const double rate_per_us = kTwoPi * sys.kappa_ghz * kGiga * ratio * ratio * kMicro;
    return 1.0 / rate_per_us;
}

/// Fraction of the resonator excitation carried by the upper dressed state.
inline double upper_photon_weight(const CoupledSystem &sys) {
    sys.validate();
    const double delta = sys.detuning();
    const double width = std::hypot(delta, 2.0 * sys.g_ghz);
    if (width == 0.0) {
        return 0.5;
    }
    return 0.5 * (1.0 - delta / width);
}

struct AnticrossingPoint {
    double flux_frac = 0.0;
    double upper_ghz = 0.0;
    double lower_ghz = 0.0;
};

/// Dressed branches across a flux window, with omega_q(f) = omega01 from the
/// flux-qubit spectrum.
inline std::vector<AnticrossingPoint> anticrossing_curve(
    const DeviceParams &device, double omega_r_ghz, double g_ghz, double f_start, double f_end, int n_points,
    int cutoff = kDefaultChargeCutoff) {
    auto spectrum = spectrum_sweep(device, f_start, f_end, n_points, cutoff);
    std::vector<AnticrossingPoint> out;
    out.reserve(spectrum.points.size());
    for (const auto &p : spectrum.points) {
        auto pair = dressed_frequencies({omega_r_ghz, p.omega01_ghz, g_ghz, 0.0});
        out.push_back({p.flux_frac, pair.upper_ghz, pair.lower_ghz});
    }
    return out;
}

}  // namespace cqed

#endif  // CQED_CAVITY_QED_HPP
