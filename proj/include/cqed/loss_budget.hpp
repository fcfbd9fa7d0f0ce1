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

#ifndef CQED_LOSS_BUDGET_HPP
#define CQED_LOSS_BUDGET_HPP

#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "cqed/cavity_qed.hpp"
#include "cqed/circuit_model.hpp"
#include "cqed/config.hpp"
#include "cqed/constants.hpp"
#include "cqed/errors.hpp"
#include "cqed/text.hpp"

// Quality-factor arithmetic for the resonator and the qubit, and the
// aggregated loss-budget report.

namespace cqed {

inline double loaded_q(double f_r_ghz, double kappa_ghz) {
    detail::require(f_r_ghz > 0.0 && kappa_ghz > 0.0, "resonance frequency and linewidth must be positive");
    return f_r_ghz / kappa_ghz;
}

/// Q_int = Q_L / (1 - 10^(-IL/20)).
inline double internal_q(double q_loaded, double il_db) {
    detail::require(q_loaded > 0.0, "loaded Q must be positive");
    detail::require(il_db > 0.0, "insertion loss must be positive");
    return q_loaded / (1.0 - std::pow(10.0, -il_db / 20.0));
}

inline double loss_tangent(double q_internal) {
    detail::require(q_internal > 0.0, "internal Q must be positive");
    return 1.0 / q_internal;
}

/// Fraction of the qubit capacitance that sits on the substrate.
inline double participation_si(double c_shunt_ff, double c_sigma_ff) {
    detail::require(c_shunt_ff > 0.0, "shunt capacitance must be positive");
    detail::require(c_shunt_ff <= c_sigma_ff, "shunt capacitance exceeds total capacitance");
    return c_shunt_ff / c_sigma_ff;
}

/// 2 pi f T, with f in GHz and T in us.
inline double qubit_quality_factor(double f01_ghz, double t_us) {
    detail::require(f01_ghz > 0.0, "qubit frequency must be positive");
    detail::require(t_us >= 0.0, "time must be non-negative");
    return kTwoPi * f01_ghz * kGiga * t_us * kMicro;
}

/// Inverse of qubit_quality_factor: Q / (2 pi f), in us.
inline double time_from_quality_factor(double q, double f01_ghz) {
    detail::require(q > 0.0 && f01_ghz > 0.0, "quality factor and frequency must be positive");
    return q / (kTwoPi * f01_ghz * kGiga) / kMicro;
}

/// T1 if dielectric loss on the substrate were the only channel:
/// (Q_int / p_si) / (2 pi f01).
inline double t1_from_dielectric_budget(double q_internal, double p_si, double omega01_ghz) {
    detail::require(q_internal > 0.0, "internal Q must be positive");
    detail::require(p_si > 0.0, "participation must be positive");
    detail::require(p_si <= 1.0, "participation cannot exceed 1");
    return time_from_quality_factor(q_internal / p_si, omega01_ghz);
}

/// 1 / sum(1/Q_i) over the supplied channels; absent channels are lossless.
inline double combine_q(const std::vector<std::optional<double>> &components) {
    double inverse = 0.0;
    int present = 0;
    for (const auto &q : components) {
        if (!q) {
            continue;
        }
        detail::require(*q > 0.0, "quality factors must be positive");
        inverse += 1.0 / *q;
        ++present;
    }
    detail::require(present > 0, "need at least one loss channel");
    return 1.0 / inverse;
}

/// Pure dephasing time from 1/T2 = 1/(2 T1) + 1/T_phi.
struct PureDephasing {
    // Infinite when T2 = 2 T1.
    double t_phi_us = std::numeric_limits<double>::infinity();

    bool dephasing_free() const {
        return std::isinf(t_phi_us);
    }
};

inline PureDephasing pure_dephasing_time(double t1_us, double t2_us) {
    detail::require(t1_us > 0.0 && t2_us > 0.0, "coherence times must be positive");
    detail::require(t2_us <= 2.0 * t1_us, "T2 exceeds 2 T1");
    if (t2_us == 2.0 * t1_us) {
        return {};
    }
    return {1.0 / (1.0 / t2_us - 1.0 / (2.0 * t1_us))};
}

/// Forward relation: T2 from T1 and T_phi (infinite T_phi allowed).
inline double t2_from_components(double t1_us, double t_phi_us) {
    detail::require(t1_us > 0.0 && t_phi_us > 0.0, "coherence times must be positive");
    return 1.0 / (1.0 / (2.0 * t1_us) + 1.0 / t_phi_us);
}

struct ResonatorParams {
    double f_r_ghz = 0.0;
    double kappa_ghz = 0.0;
    double q_loaded = 0.0;
    double insertion_loss_db = 0.0;
    double q_internal = 0.0;
    double tan_delta = 0.0;

    static ResonatorParams make(double f_r_ghz, double kappa_ghz, double il_db) {
        ResonatorParams r;
        r.f_r_ghz = f_r_ghz;
        r.kappa_ghz = kappa_ghz;
        r.insertion_loss_db = il_db;
        r.q_loaded = loaded_q(f_r_ghz, kappa_ghz);
        r.q_internal = internal_q(r.q_loaded, il_db);
        r.tan_delta = loss_tangent(r.q_internal);
        return r;
    }
};

struct CoherenceSet {
    double t1_us = 0.0;
    double t2_echo_us = 0.0;
    std::optional<double> t2_ramsey_us;
    double omega01_ghz = 0.0;
    double q1 = 0.0;
    double q2 = 0.0;
    PureDephasing t_phi;

    static CoherenceSet make(double t1_us, double t2_echo_us, double omega01_ghz, std::optional<double> t2_ramsey_us = {}) {
        CoherenceSet c;
        c.t1_us = t1_us;
        c.t2_echo_us = t2_echo_us;
        c.t2_ramsey_us = t2_ramsey_us;
        c.omega01_ghz = omega01_ghz;
        if (t2_ramsey_us) {
            detail::require(*t2_ramsey_us > 0.0, "Ramsey time must be positive");
        }
        c.t_phi = pure_dephasing_time(t1_us, t2_echo_us);
        c.q1 = qubit_quality_factor(omega01_ghz, t1_us);
        c.q2 = qubit_quality_factor(omega01_ghz, t2_echo_us);
        return c;
    }
};

struct LossBudget {
    double p_si = 0.0;
    double q_cap = 0.0;
    std::optional<double> q_ind;
    std::optional<double> q_rad;
    double q1_total = 0.0;
    double t1_budget_us = 0.0;
    double purcell_t1_us = 0.0;
};

/// Participation inputs and optional extra loss channels.
struct LossReportOptions {
    std::optional<double> c_shunt_ff;  // overrides the device value
    std::optional<double> c_sigma_ff;  // overrides the device value
    std::optional<double> q_ind;
    std::optional<double> q_rad;
};

struct LossReport {
    DeviceParams device;
    ResonatorParams resonator;
    CoherenceSet coherence;
    CoupledSystem coupled;
    LossBudget budget;
    double c_shunt_used_ff = 0.0;
    double c_sigma_used_ff = 0.0;
    std::string c_shunt_source;
    std::string c_sigma_source;
};

inline LossReport loss_report(
    const DeviceParams &device, const ResonatorParams &resonator, const CoherenceSet &coherence,
    const CoupledSystem &coupled, const LossReportOptions &options = {}) {
    LossReport r;
    r.device = device;
    r.resonator = resonator;
    r.coherence = coherence;
    r.coupled = coupled;

    r.c_shunt_used_ff = options.c_shunt_ff.value_or(device.c_shunt_ff);
    r.c_shunt_source = options.c_shunt_ff ? "measured" : "device";
    r.c_sigma_used_ff = options.c_sigma_ff.value_or(device.c_sigma_ff);
    r.c_sigma_source = options.c_sigma_ff ? "measured" : "device";

    auto &b = r.budget;
    try {
        b.p_si = participation_si(r.c_shunt_used_ff, r.c_sigma_used_ff);
    } catch (const InputError &e) {
        throw InputError(std::string("participation (c_shunt_ff, c_sigma_ff): ") + e.what());
    }
    b.q_cap = resonator.q_internal / b.p_si;
    b.q_ind = options.q_ind;
    b.q_rad = options.q_rad;
    try {
        b.q1_total = combine_q({b.q_cap, b.q_ind, b.q_rad});
    } catch (const InputError &e) {
        throw InputError(std::string("loss channels (q_ind, q_rad): ") + e.what());
    }
    b.t1_budget_us = time_from_quality_factor(b.q1_total, coherence.omega01_ghz);
    try {
        b.purcell_t1_us = purcell_t1(coupled);
    } catch (const InputError &e) {
        throw InputError(std::string("Purcell limit (g_ghz, kappa_ghz, fr_ghz, omega01_ghz): ") + e.what());
    }
    return r;
}

namespace detail {

inline nlohmann::ordered_json quantity(double value, const char *formula) {
    nlohmann::ordered_json q;
    q["value"] = round_to_output(value);
    q["formula"] = formula;
    return q;
}

inline nlohmann::ordered_json optional_quantity(const std::optional<double> &value, const char *formula) {
    if (value) {
        return quantity(*value, formula);
    }
    nlohmann::ordered_json q;
    q["value"] = nullptr;
    q["formula"] = formula;
    q["absent"] = true;
    return q;
}

}  // namespace detail

/// JSON report; every number carries 9 significant digits so that
/// dump -> parse -> dump is stable.
inline nlohmann::ordered_json to_json(const LossReport &r) {
    using detail::optional_quantity;
    using detail::quantity;
    nlohmann::ordered_json j;

    auto &dev = j["device"];
    dev["alpha"] = round_to_output(r.device.alpha);
    dev["c_large_ff"] = round_to_output(r.device.c_large_ff);
    dev["c_shunt_ff"] = round_to_output(r.device.c_shunt_ff);
    dev["c_j_ff"] = round_to_output(r.device.c_j_ff);
    dev["c_sigma_ff"] = round_to_output(r.device.c_sigma_ff);
    dev["ej_ghz"] = round_to_output(r.device.ej_ghz);
    dev["ec_ghz"] = round_to_output(r.device.ec_ghz);

    auto &res = j["resonator"];
    res["f_r_ghz"] = round_to_output(r.resonator.f_r_ghz);
    res["kappa_ghz"] = round_to_output(r.resonator.kappa_ghz);
    res["insertion_loss_db"] = round_to_output(r.resonator.insertion_loss_db);
    res["q_loaded"] = quantity(r.resonator.q_loaded, "f_r / kappa");
    res["q_internal"] = quantity(r.resonator.q_internal, "Q_L / (1 - 10^(-IL/20))");
    res["tan_delta"] = quantity(r.resonator.tan_delta, "1 / Q_int");

    auto &coh = j["coherence"];
    coh["omega01_ghz"] = round_to_output(r.coherence.omega01_ghz);
    coh["t1_us"] = round_to_output(r.coherence.t1_us);
    coh["t2_echo_us"] = round_to_output(r.coherence.t2_echo_us);
    coh["t2_ramsey_us"] = r.coherence.t2_ramsey_us ? nlohmann::ordered_json(round_to_output(*r.coherence.t2_ramsey_us))
                                                   : nlohmann::ordered_json(nullptr);
    coh["q1"] = quantity(r.coherence.q1, "2 pi f01 T1");
    coh["q2"] = quantity(r.coherence.q2, "2 pi f01 T2");
    if (r.coherence.t_phi.dephasing_free()) {
        coh["t_phi_us"] = optional_quantity(std::nullopt, "1 / (1/T2 - 1/(2 T1))");
        coh["dephasing_free"] = true;
    } else {
        coh["t_phi_us"] = quantity(r.coherence.t_phi.t_phi_us, "1 / (1/T2 - 1/(2 T1))");
        coh["dephasing_free"] = false;
    }

    auto &cpl = j["coupling"];
    cpl["g_ghz"] = round_to_output(r.coupled.g_ghz);
    cpl["detuning_ghz"] = quantity(r.coupled.omega_r_ghz - r.coupled.omega_q_ghz, "f_r - f01");

    auto &lb = j["loss_budget"];
    lb["c_shunt_ff"] = round_to_output(r.c_shunt_used_ff);
    lb["c_shunt_source"] = r.c_shunt_source;
    lb["c_sigma_ff"] = round_to_output(r.c_sigma_used_ff);
    lb["c_sigma_source"] = r.c_sigma_source;
    lb["p_si"] = quantity(r.budget.p_si, "C_S / C_sigma");
    lb["q_cap"] = quantity(r.budget.q_cap, "Q_int / p_Si");
    lb["q_ind"] = optional_quantity(r.budget.q_ind, "supplied");
    lb["q_rad"] = optional_quantity(r.budget.q_rad, "supplied");
    lb["q1_total"] = quantity(r.budget.q1_total, "1 / (1/Q_cap + 1/Q_ind + 1/Q_rad)");
    lb["t1_budget_us"] = quantity(r.budget.t1_budget_us, "Q1_total / (2 pi f01)");
    lb["purcell_t1_us"] = quantity(r.budget.purcell_t1_us, "1 / (2 pi kappa (g / (f_r - f01))^2)");
    return j;
}

inline const std::set<std::string> &measured_config_keys() {
    static const std::set<std::string> keys{
        "fr_ghz", "kappa_ghz", "il_db", "omega01_ghz", "t1_us", "t2_us", "t2_ramsey_us",
        "g_ghz",  "q_ind",     "q_rad", "c_shunt_ff",  "c_sigma_ff",
    };
    return keys;
}

/// Assembles the report from a device and a measured-values config.
inline LossReport loss_report_from_config(const DeviceParams &device, const KeyValueConfig &measured) {
    auto wrap = [&](const std::string &keys, auto &&fn) {
        try {
            return fn();
        } catch (const InputError &e) {
            throw InputError(measured.source() + " (" + keys + "): " + e.what());
        }
    };
    auto resonator = wrap("fr_ghz, kappa_ghz, il_db", [&] {
        return ResonatorParams::make(
            measured.require("fr_ghz"), measured.require("kappa_ghz"), measured.require("il_db"));
    });
    auto coherence = wrap("t1_us, t2_us, omega01_ghz", [&] {
        return CoherenceSet::make(
            measured.require("t1_us"), measured.require("t2_us"), measured.require("omega01_ghz"),
            measured.get("t2_ramsey_us"));
    });
    CoupledSystem coupled{resonator.f_r_ghz, coherence.omega01_ghz, measured.require("g_ghz"), resonator.kappa_ghz};
    LossReportOptions options{
        measured.get("c_shunt_ff"), measured.get("c_sigma_ff"), measured.get("q_ind"), measured.get("q_rad")};
    return wrap("loss budget", [&] { return loss_report(device, resonator, coherence, coupled, options); });
}

}  // namespace cqed

#endif  // CQED_LOSS_BUDGET_HPP
