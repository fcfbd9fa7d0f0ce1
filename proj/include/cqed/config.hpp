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

#ifndef CQED_CONFIG_HPP
#define CQED_CONFIG_HPP

#include <algorithm>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>

#include "cqed/circuit_model.hpp"
#include "cqed/errors.hpp"
#include "cqed/text.hpp"

namespace cqed {

/// Flat `key = value` file with `#` comments. Values are numeric.
class KeyValueConfig {
  public:
    struct Entry {
        double value = 0.0;
        int line = 0;
    };

    /// Parses from a stream; `source` names the input in error messages.
    /// Keys outside `allowed` are rejected with their line number.
    static KeyValueConfig parse(std::istream &in, const std::set<std::string> &allowed, const std::string &source) {
        KeyValueConfig cfg;
        cfg.source_ = source;
        std::string raw;
        int line_no = 0;
        while (std::getline(in, raw)) {
            ++line_no;
            auto hash = raw.find('#');
            std::string_view line = trim(std::string_view(raw).substr(0, hash));
            if (line.empty()) {
                continue;
            }
            auto eq = line.find('=');
            auto where = source + ":" + std::to_string(line_no);
            if (eq == std::string_view::npos) {
                throw InputError(where + ": expected 'key = value'");
            }
            std::string key(trim(line.substr(0, eq)));
            std::string_view value_text = trim(line.substr(eq + 1));
            if (key.empty()) {
                throw InputError(where + ": empty key");
            }
            if (!allowed.contains(key)) {
                throw InputError(where + ": unknown key '" + key + "'");
            }
            if (cfg.entries_.contains(key)) {
                throw InputError(where + ": duplicate key '" + key + "'");
            }
            auto value = parse_double(value_text);
            if (!value) {
                throw InputError(where + ": value for '" + key + "' is not a number");
            }
            cfg.entries_[key] = Entry{*value, line_no};
        }
        return cfg;
    }

    static KeyValueConfig load(const std::string &path, const std::set<std::string> &allowed) {
        std::ifstream in(path);
        if (!in) {
            throw InputError("cannot open '" + path + "'");
        }
        return parse(in, allowed, path);
    }

    bool has(const std::string &key) const {
        return entries_.contains(key);
    }

    std::optional<double> get(const std::string &key) const {
        auto it = entries_.find(key);
        if (it == entries_.end()) {
            return std::nullopt;
        }
        return it->second.value;
    }

    double require(const std::string &key) const {
        auto v = get(key);
        if (!v) {
            throw InputError(source_ + ": missing required key '" + key + "'");
        }
        return *v;
    }

    /// "file:line" for a present key, or just the file name.
    std::string location(const std::string &key) const {
        auto it = entries_.find(key);
        if (it == entries_.end()) {
            return source_;
        }
        return source_ + ":" + std::to_string(it->second.line);
    }

    const std::string &source() const {
        return source_;
    }

  private:
    std::string source_;
    std::map<std::string, Entry> entries_;
};

inline const std::set<std::string> &device_config_keys() {
    static const std::set<std::string> keys{
        "alpha",
        "d_large_um",
        "d_small_um",
        "t_barrier_nm",
        "eps_r_barrier",
        "c_large_ff",
        "c_shunt_ff",
        "ej_ghz",
        "ec_ghz",
    };
    return keys;
}

/// Builds DeviceParams from a device config.
///
/// Geometric entries (d_large_um, t_barrier_nm, eps_r_barrier) give the large
/// junction capacitance; c_large_ff overrides it. alpha defaults to the area
/// ratio (d_small/d_large)^2 when absent. ec_ghz, when present, overrides the
/// charging energy derived from the capacitances.
inline DeviceParams device_from_config(const KeyValueConfig &cfg) {
    auto at = [&](const std::string &key) { return cfg.location(key) + ": "; };

    double c_large = 0.0;
    if (auto c = cfg.get("c_large_ff")) {
        c_large = *c;
    } else if (cfg.has("d_large_um") && cfg.has("t_barrier_nm")) {
        JunctionGeometry g;
        g.diameter_um = cfg.require("d_large_um");
        g.barrier_thickness_nm = cfg.require("t_barrier_nm");
        g.eps_r_barrier = cfg.get("eps_r_barrier").value_or(kDefaultBarrierPermittivity);
        try {
            c_large = junction_capacitance(g);
        } catch (const InputError &e) {
            throw InputError(at("d_large_um") + e.what());
        }
    } else {
        throw InputError(cfg.source() + ": need c_large_ff or (d_large_um, t_barrier_nm)");
    }

    double alpha = 0.0;
    if (auto a = cfg.get("alpha")) {
        alpha = *a;
    } else if (cfg.has("d_small_um") && cfg.has("d_large_um")) {
        double ratio = cfg.require("d_small_um") / cfg.require("d_large_um");
        alpha = ratio * ratio;
    } else {
        throw InputError(cfg.source() + ": need alpha or (d_small_um, d_large_um)");
    }

    double ej = cfg.require("ej_ghz");
    double c_shunt = cfg.require("c_shunt_ff");
    try {
        return DeviceParams::make(alpha, c_large, c_shunt, ej, cfg.get("ec_ghz"));
    } catch (const InputError &e) {
        throw InputError(cfg.source() + ": " + e.what());
    }
}

inline DeviceParams load_device(const std::string &path) {
    return device_from_config(KeyValueConfig::load(path, device_config_keys()));
}

}  // namespace cqed

#endif  // CQED_CONFIG_HPP
