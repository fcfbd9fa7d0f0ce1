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

#ifndef CQED_CIRCUIT_MODEL_HPP
#define CQED_CIRCUIT_MODEL_HPP

#include <cmath>
#include <optional>
#include <string>

#include "cqed/constants.hpp"
#include "cqed/errors.hpp"

// Circuit parameters of a three-junction capacitively shunted flux qubit,
// derived from junction geometry and material constants.
//
// Units at this interface: capacitance in fF, energies as E/h in GHz,
// lengths in um (diameters) and nm (barrier thickness), currents in uA.

namespace cqed {

/// Default AlN barrier permittivity; reproduces C = 31.2 fF for a 1.07 um
/// disk over a 1.8 nm barrier.
inline constexpr double kDefaultBarrierPermittivity = 7.05;

struct JunctionGeometry {
    double diameter_um = 0.0;
    double barrier_thickness_nm = 0.0;
    double eps_r_barrier = kDefaultBarrierPermittivity;

    void validate() const {
        detail::require(std::isfinite(diameter_um) && diameter_um > 0.0, "junction diameter must be positive");
        detail::require(
            std::isfinite(barrier_thickness_nm) && barrier_thickness_nm > 0.0, "barrier thickness must be positive");
        detail::require(std::isfinite(eps_r_barrier) && eps_r_barrier > 1.0, "barrier permittivity must exceed 1");
    }
};

/// Parallel-plate capacitance eps_r * eps0 * A / t of a circular junction, in fF.
inline double junction_capacitance(const JunctionGeometry &g) {
    g.validate();
    const double radius_m = 0.5 * g.diameter_um * kMicro;
    const double area_m2 = std::numbers::pi * radius_m * radius_m;
    const double c_farad = g.eps_r_barrier * PhysicalConstants::eps0 * area_m2 / (g.barrier_thickness_nm * kNano);
    return c_farad / kFemto;
}

/// Total junction capacitance (alpha + 1/2) C of the loop as seen by the qubit mode.
inline double total_junction_capacitance(double alpha, double c_large_ff) {
    detail::require(alpha > 0.0 && alpha < 1.0, "alpha must lie in (0, 1)");
    detail::require(std::isfinite(c_large_ff) && c_large_ff > 0.0, "junction capacitance must be positive");
    return (alpha + 0.5) * c_large_ff;
}

/// Rescales a reference capacitance to a substrate of different permittivity.
inline double scale_shunt_capacitance(double c_ref_ff, double eps_ref, double eps_new) {
    detail::require(c_ref_ff > 0.0, "reference capacitance must be positive");
    detail::require(eps_ref > 0.0 && eps_new > 0.0, "permittivities must be positive");
    return c_ref_ff * eps_new / eps_ref;
}

/// E_C/h = e^2 / (2 C_sigma h) in GHz. Infinite capacitance gives zero.
inline double charging_energy(double c_sigma_ff) {
    detail::require(c_sigma_ff > 0.0, "capacitance must be positive");
    if (std::isinf(c_sigma_ff)) {
        return 0.0;
    }
    constexpr double e = PhysicalConstants::e;
    return e * e / (2.0 * c_sigma_ff * kFemto * PhysicalConstants::h) / kGiga;
}

/// Inverse of charging_energy: C_sigma in fF for a given E_C/h in GHz.
inline double capacitance_from_charging_energy(double ec_ghz) {
    detail::require(std::isfinite(ec_ghz) && ec_ghz > 0.0, "charging energy must be positive");
    constexpr double e = PhysicalConstants::e;
    return e * e / (2.0 * ec_ghz * kGiga * PhysicalConstants::h) / kFemto;
}

/// E_J/h = Phi0 I_c / (2 pi h), in GHz, for a critical current in uA.
inline double josephson_energy_from_critical_current(double ic_ua) {
    detail::require(std::isfinite(ic_ua) && ic_ua > 0.0, "critical current must be positive");
    return PhysicalConstants::Phi0 * ic_ua * kMicro / (kTwoPi * PhysicalConstants::h) / kGiga;
}

inline double critical_current_from_ej(double ej_ghz) {
    detail::require(std::isfinite(ej_ghz) && ej_ghz > 0.0, "Josephson energy must be positive");
    return kTwoPi * PhysicalConstants::h * ej_ghz * kGiga / PhysicalConstants::Phi0 / kMicro;
}

/// Critical current in uA of a circular junction with current density jc (A/cm^2).
inline double critical_current_from_density(double jc_a_per_cm2, double diameter_um) {
    detail::require(jc_a_per_cm2 > 0.0, "critical current density must be positive");
    detail::require(diameter_um > 0.0, "junction diameter must be positive");
    const double radius_cm = 0.5 * diameter_um * 1e-4;
    return jc_a_per_cm2 * std::numbers::pi * radius_cm * radius_cm / kMicro;
}

/// Electrical description of the qubit. Construct through make(); the
/// derived members are kept consistent with the primary ones.
struct DeviceParams {
    double alpha = 0.0;
    double c_large_ff = 0.0;
    double c_shunt_ff = 0.0;
    double ej_ghz = 0.0;
    double ec_ghz = 0.0;
    double c_j_ff = 0.0;
    double c_sigma_ff = 0.0;
    // True when ec_ghz was supplied rather than computed from c_sigma_ff.
    bool ec_override = false;

    static DeviceParams make(
        double alpha, double c_large_ff, double c_shunt_ff, double ej_ghz, std::optional<double> ec_ghz = {}) {
        DeviceParams p;
        p.alpha = alpha;
        p.c_large_ff = c_large_ff;
        p.c_shunt_ff = c_shunt_ff;
        p.ej_ghz = ej_ghz;
        detail::require(std::isfinite(c_shunt_ff) && c_shunt_ff >= 0.0, "shunt capacitance must be non-negative");
        detail::require(std::isfinite(ej_ghz) && ej_ghz >= 0.0, "Josephson energy must be non-negative");
        p.c_j_ff = total_junction_capacitance(alpha, c_large_ff);
        p.c_sigma_ff = c_shunt_ff + p.c_j_ff;
        if (ec_ghz) {
            detail::require(std::isfinite(*ec_ghz) && *ec_ghz > 0.0, "charging energy must be positive");
            p.ec_ghz = *ec_ghz;
            p.ec_override = true;
        } else {
            p.ec_ghz = charging_energy(p.c_sigma_ff);
        }
        return p;
    }

    /// Same device with E_J and every charging energy multiplied by factor.
    DeviceParams scaled_energies(double factor) const {
        detail::require(factor > 0.0, "scale factor must be positive");
        return make(alpha, c_large_ff, c_shunt_ff, ej_ghz * factor, ec_ghz * factor);
    }
};

/// Josephson energy inferred from a current density, next to the configured
/// value; the two need not agree.
struct JosephsonConsistency {
    double ic_from_density_ua = 0.0;
    double ej_from_density_ghz = 0.0;
    double ic_from_ej_ua = 0.0;
    double relative_discrepancy = 0.0;  // (from density - configured) / configured
};

inline JosephsonConsistency josephson_consistency(double ej_ghz, double jc_a_per_cm2, double diameter_um) {
    JosephsonConsistency r;
    r.ic_from_density_ua = critical_current_from_density(jc_a_per_cm2, diameter_um);
    r.ej_from_density_ghz = josephson_energy_from_critical_current(r.ic_from_density_ua);
    r.ic_from_ej_ua = critical_current_from_ej(ej_ghz);
    r.relative_discrepancy = (r.ej_from_density_ghz - ej_ghz) / ej_ghz;
    return r;
}

}  // namespace cqed

#endif  // CQED_CIRCUIT_MODEL_HPP
