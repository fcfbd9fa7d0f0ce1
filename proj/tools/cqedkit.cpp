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

#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cqed/cavity_qed.hpp"
#include "cqed/circuit_model.hpp"
#include "cqed/config.hpp"
#include "cqed/errors.hpp"
#include "cqed/fit.hpp"
#include "cqed/flux_qubit.hpp"
#include "cqed/loss_budget.hpp"
#include "cqed/synth.hpp"
#include "cqed/text.hpp"

namespace {

using namespace cqed;

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitFit = 3;
constexpr int kExitSolver = 4;

bool g_verbose = false;

void note(const std::string &msg) {
    if (g_verbose) {
        std::cerr << "cqedkit: " << msg << '\n';
    }
}

// Output goes to a file, or to stdout for "-". Everything is rendered into a
// string first so that a failing command leaves no partial file behind.
void emit(const std::string &path, const std::string &text) {
    if (path == "-") {
        std::cout << text;
        std::cout.flush();
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw InputError("cannot write '" + path + "'");
    }
    out << text;
    if (!out) {
        throw InputError("write to '" + path + "' failed");
    }
}

void require_readable(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw InputError("cannot open '" + path + "'");
    }
}

std::string json_text(const nlohmann::ordered_json &j) {
    return j.dump(2) + "\n";
}

std::string csv_text(const CsvTable &t) {
    std::ostringstream out;
    out.imbue(std::locale::classic());
    write_csv(out, t);
    return out.str();
}

CsvTable trace_table(const TimeTrace &t) {
    return {{"x", "y"}, {t.x, t.y}};
}

TimeTrace load_trace(const std::string &path, TraceKind kind) {
    auto table = read_csv_file(path);
    TimeTrace t;
    t.kind = kind;
    try {
        t.x = table.column("x");
        t.y = table.column("y");
        t.validate();
    } catch (const InputError &e) {
        throw InputError(path + ": " + e.what());
    }
    return t;
}

std::vector<double> load_values(const std::string &path) {
    auto table = read_csv_file(path);
    try {
        return table.column("value");
    } catch (const InputError &e) {
        throw InputError(path + ": " + e.what());
    }
}

// Histogram bars with the fitted Gaussian overlaid.
std::string histogram_svg(const HistogramStats &s) {
    const double w = 480.0;
    const double h = 320.0;
    const double margin = 40.0;
    const double x0 = s.bin_edges.front();
    const double x1 = s.bin_edges.back();
    double y_max = 0.0;
    for (int c : s.counts) {
        y_max = std::max(y_max, static_cast<double>(c));
    }
    y_max = std::max(y_max, s.fit.value("amplitude")) * 1.1;
    auto px = [&](double x) { return margin + (x - x0) / (x1 - x0) * (w - 2 * margin); };
    auto py = [&](double y) { return h - margin - y / y_max * (h - 2 * margin); };
    auto num = [](double v) { return format_number(v, 6); };

    std::ostringstream o;
    o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(w) << "\" height=\"" << num(h) << "\">\n";
    o << "<line x1=\"" << num(margin) << "\" y1=\"" << num(h - margin) << "\" x2=\"" << num(w - margin) << "\" y2=\""
      << num(h - margin) << "\" stroke=\"black\"/>\n";
    o << "<line x1=\"" << num(margin) << "\" y1=\"" << num(margin) << "\" x2=\"" << num(margin) << "\" y2=\""
      << num(h - margin) << "\" stroke=\"black\"/>\n";
    for (std::size_t i = 0; i < s.counts.size(); ++i) {
        const double left = px(s.bin_edges[i]);
        const double right = px(s.bin_edges[i + 1]);
        const double top = py(s.counts[i]);
        o << "<rect x=\"" << num(left) << "\" y=\"" << num(top) << "\" width=\"" << num(right - left) << "\" height=\""
          << num(h - margin - top) << "\" fill=\"#9ab\" stroke=\"#456\"/>\n";
    }
    o << "<polyline fill=\"none\" stroke=\"#c22\" points=\"";
    const int samples = 200;
    for (int i = 0; i <= samples; ++i) {
        const double x = x0 + (x1 - x0) * i / samples;
        const double y = gaussian(x, s.fit.value("amplitude"), s.mean, s.sigma);
        o << (i ? " " : "") << num(px(x)) << "," << num(py(y));
    }
    o << "\"/>\n";
    o << "<text x=\"" << num(margin) << "\" y=\"" << num(h - 8) << "\" font-size=\"12\">" << num(x0) << "</text>\n";
    o << "<text x=\"" << num(w - margin) << "\" y=\"" << num(h - 8) << "\" font-size=\"12\" text-anchor=\"end\">"
      << num(x1) << "</text>\n";
    o << "</svg>\n";
    return o.str();
}

double noise_sigma(const std::optional<double> &given, double amplitude) {
    return given.value_or(kDefaultRelativeNoise * std::abs(amplitude));
}

}  // namespace

int main(int argc, char **argv) {
    std::locale::global(std::locale::classic());

    CLI::App app{"cqedkit: flux-qubit spectra, loss budgets and coherence fits", "cqedkit"};
    app.set_version_flag("--version", std::string("cqedkit ") + CQED_VERSION);
    app.add_flag("-v,--verbose", g_verbose, "Diagnostics on stderr");
    app.require_subcommand(1);

    std::function<void()> action;

    // spectrum
    auto *spectrum = app.add_subcommand("spectrum", "omega01 (and omega12) versus flux, CSV");
    std::string sp_config;
    std::string sp_out;
    double sp_start = 0.45;
    double sp_end = 0.55;
    int sp_points = 201;
    int sp_cutoff = kDefaultChargeCutoff;
    bool sp_omega12 = false;
    spectrum->add_option("--config", sp_config, "Device config file")->required();
    spectrum->add_option("--f-start", sp_start, "First flux point (units of the flux quantum)")->capture_default_str();
    spectrum->add_option("--f-end", sp_end, "Last flux point")->capture_default_str();
    spectrum->add_option("--points", sp_points, "Number of flux points")->capture_default_str();
    spectrum->add_option("--cutoff", sp_cutoff, "Charge cutoff N per island")->capture_default_str();
    spectrum->add_flag("--omega12", sp_omega12, "Add the omega12 column");
    spectrum->add_option("--out", sp_out, "Output CSV path, '-' for stdout")->required();
    spectrum->callback([&] {
        action = [&] {
            require_readable(sp_config);
            auto device = load_device(sp_config);
            note("E_J = " + format_number(device.ej_ghz) + " GHz, E_C = " + format_number(device.ec_ghz) + " GHz");
            auto curve = spectrum_sweep(device, sp_start, sp_end, sp_points, sp_cutoff, sp_omega12);
            CsvTable t;
            t.header = {"flux_frac", "omega01_ghz"};
            if (sp_omega12) {
                t.header.push_back("omega12_ghz");
            }
            t.columns.resize(t.header.size());
            for (const auto &p : curve.points) {
                t.columns[0].push_back(p.flux_frac);
                t.columns[1].push_back(p.omega01_ghz);
                if (sp_omega12) {
                    t.columns[2].push_back(*p.omega12_ghz);
                }
            }
            emit(sp_out, csv_text(t));
        };
    });

    // anticrossing
    auto *anti = app.add_subcommand("anticrossing", "Dressed qubit-resonator branches versus flux, CSV");
    std::string ac_config;
    std::string ac_out;
    double ac_fr = 9.796;
    double ac_g = 0.09;
    double ac_start = 0.45;
    double ac_end = 0.55;
    int ac_points = 201;
    int ac_cutoff = kDefaultChargeCutoff;
    anti->add_option("--config", ac_config, "Device config file")->required();
    anti->add_option("--fr-ghz", ac_fr, "Bare resonator frequency")->capture_default_str();
    anti->add_option("--g-ghz", ac_g, "Coupling strength g")->capture_default_str();
    anti->add_option("--f-start", ac_start, "First flux point")->capture_default_str();
    anti->add_option("--f-end", ac_end, "Last flux point")->capture_default_str();
    anti->add_option("--points", ac_points, "Number of flux points")->capture_default_str();
    anti->add_option("--cutoff", ac_cutoff, "Charge cutoff N per island")->capture_default_str();
    anti->add_option("--out", ac_out, "Output CSV path, '-' for stdout")->required();
    anti->callback([&] {
        action = [&] {
            require_readable(ac_config);
            auto device = load_device(ac_config);
            auto curve = anticrossing_curve(device, ac_fr, ac_g, ac_start, ac_end, ac_points, ac_cutoff);
            CsvTable t{{"flux_frac", "upper_ghz", "lower_ghz"}, {{}, {}, {}}};
            for (const auto &p : curve) {
                t.columns[0].push_back(p.flux_frac);
                t.columns[1].push_back(p.upper_ghz);
                t.columns[2].push_back(p.lower_ghz);
            }
            emit(ac_out, csv_text(t));
        };
    });

    // lossbudget
    auto *loss = app.add_subcommand("lossbudget", "Resonator, coherence and loss-budget report, JSON");
    std::string lb_config;
    std::string lb_measured;
    std::string lb_out;
    loss->add_option("--config", lb_config, "Device config file")->required();
    loss->add_option("--measured", lb_measured, "Measured-values file")->required();
    loss->add_option("--out", lb_out, "Output JSON path, '-' for stdout")->required();
    loss->callback([&] {
        action = [&] {
            require_readable(lb_config);
            require_readable(lb_measured);
            auto device = load_device(lb_config);
            auto measured = KeyValueConfig::load(lb_measured, measured_config_keys());
            auto report = loss_report_from_config(device, measured);
            emit(lb_out, json_text(to_json(report)));
        };
    });

    // fit
    auto *fit = app.add_subcommand("fit", "Fit a measured trace, JSON");
    std::string fit_kind;
    std::string fit_in;
    std::string fit_out;
    std::vector<double> fit_guess;
    fit->add_option("kind", fit_kind, "t1 | ramsey | echo | resonance")
        ->required()
        ->check(CLI::IsMember({"t1", "ramsey", "echo", "resonance"}));
    fit->add_option("--in", fit_in, "Input CSV with columns x,y")->required();
    fit->add_option("--out", fit_out, "Output JSON path, '-' for stdout")->required();
    fit->add_option("--guess", fit_guess, "Initial parameters in model order")->delimiter(',');
    fit->callback([&] {
        action = [&] {
            require_readable(fit_in);
            const TraceKind kind = parse_trace_kind(fit_kind);
            auto trace = load_trace(fit_in, kind);
            InitialGuess guess;
            if (!fit_guess.empty()) {
                guess = fit_guess;
            }
            FitResult r;
            switch (kind) {
                case TraceKind::T1Decay:
                    r = fit_exponential_decay(trace, guess);
                    break;
                case TraceKind::Ramsey:
                case TraceKind::Echo:
                    r = fit_damped_sinusoid(trace, guess);
                    break;
                case TraceKind::ResonanceSweep:
                    r = fit_lorentzian(trace, guess);
                    break;
            }
            for (const auto &w : r.warnings) {
                std::cerr << "cqedkit: warning: " << w << '\n';
            }
            note("iterations: " + std::to_string(r.iterations));
            auto j = to_json(r);
            nlohmann::ordered_json out;
            out["kind"] = fit_kind;
            out["n_points"] = trace.x.size();
            for (auto it = j.begin(); it != j.end(); ++it) {
                out[it.key()] = it.value();
            }
            emit(fit_out, json_text(out));
        };
    });

    // stats
    auto *stats = app.add_subcommand("stats", "Histogram with Gaussian fit and outliers, JSON (+ SVG)");
    std::string st_in;
    std::string st_out;
    std::string st_svg;
    std::optional<int> st_bins;
    stats->add_option("--in", st_in, "Input CSV with column 'value'")->required();
    stats->add_option("--bins", st_bins, "Number of bins (default ceil(sqrt(n)))");
    stats->add_option("--svg", st_svg, "Also write an SVG histogram here");
    stats->add_option("--out", st_out, "Output JSON path, '-' for stdout")->required();
    stats->callback([&] {
        action = [&] {
            require_readable(st_in);
            auto values = load_values(st_in);
            auto s = gaussian_stats(values, BinningPolicy{st_bins});
            for (const auto &w : s.fit.warnings) {
                std::cerr << "cqedkit: warning: " << w << '\n';
            }
            std::string json = json_text(to_json(s));
            std::string svg = st_svg.empty() ? std::string() : histogram_svg(s);
            emit(st_out, json);
            if (!st_svg.empty()) {
                emit(st_svg, svg);
            }
        };
    });

    // simulate
    auto *sim = app.add_subcommand("simulate", "Seeded synthetic data in the formats the other commands read");
    sim->require_subcommand(1);
    std::uint64_t seed = 1;
    std::string sim_out;
    std::optional<double> noise;
    auto common = [&](CLI::App *c, bool with_noise) {
        c->add_option("--seed", seed, "64-bit seed")->capture_default_str();
        c->add_option("--out", sim_out, "Output CSV path, '-' for stdout")->required();
        if (with_noise) {
            c->add_option("--noise", noise, "Noise sigma in signal units (default 2% of the amplitude)");
        }
    };

    auto *sim_t1 = sim->add_subcommand("t1", "A exp(-t/T1) + B trace");
    double t1_us = 18.25;
    int n_points = 201;
    double t_max = 80.0;
    double amplitude = 1.0;
    double offset = 0.0;
    sim_t1->add_option("--t1-us", t1_us)->capture_default_str();
    sim_t1->add_option("--points", n_points)->capture_default_str();
    sim_t1->add_option("--t-max-us", t_max)->capture_default_str();
    sim_t1->add_option("--amplitude", amplitude)->capture_default_str();
    sim_t1->add_option("--offset", offset)->capture_default_str();
    common(sim_t1, true);
    sim_t1->callback([&] {
        action = [&] {
            detail::require(n_points > 0, "points must be positive");
            auto t = gen_t1_trace(t1_us, n_points, t_max, amplitude, offset, {noise_sigma(noise, amplitude), seed});
            emit(sim_out, csv_text(trace_table(t)));
        };
    });

    double t2_us = 3.33;
    double detuning = 5.0;
    double phase = 0.0;
    double ramsey_t_max = 10.0;
    auto ramsey_like = [&](const char *name, TraceKind kind) {
        auto *c = sim->add_subcommand(name, "A exp(-t/T2) cos(2 pi dnu t + phi) + B trace");
        c->add_option("--t2-us", t2_us)->capture_default_str();
        c->add_option("--detuning-mhz", detuning)->capture_default_str();
        c->add_option("--points", n_points)->capture_default_str();
        c->add_option("--t-max-us", ramsey_t_max)->capture_default_str();
        c->add_option("--amplitude", amplitude)->capture_default_str();
        c->add_option("--phase", phase)->capture_default_str();
        c->add_option("--offset", offset)->capture_default_str();
        common(c, true);
        c->callback([&, kind] {
            action = [&, kind] {
                detail::require(n_points > 0, "points must be positive");
                auto t = gen_ramsey_trace(
                    t2_us, detuning, n_points, ramsey_t_max, amplitude, phase, offset,
                    {noise_sigma(noise, amplitude), seed}, kind);
                emit(sim_out, csv_text(trace_table(t)));
            };
        });
    };
    ramsey_like("ramsey", TraceKind::Ramsey);
    ramsey_like("echo", TraceKind::Echo);

    auto *sim_res = sim->add_subcommand("resonance", "Power-Lorentzian resonance sweep");
    double f0 = 9.796;
    double kappa = 0.000697;
    double span = 0.01;
    double peak = 1.0;
    sim_res->add_option("--f0-ghz", f0)->capture_default_str();
    sim_res->add_option("--kappa-ghz", kappa)->capture_default_str();
    sim_res->add_option("--span-ghz", span)->capture_default_str();
    sim_res->add_option("--points", n_points)->capture_default_str();
    sim_res->add_option("--peak", peak)->capture_default_str();
    sim_res->add_option("--offset", offset)->capture_default_str();
    common(sim_res, true);
    sim_res->callback([&] {
        action = [&] {
            detail::require(n_points > 0, "points must be positive");
            auto t = gen_resonance_sweep(f0, kappa, span, n_points, peak, offset, {noise_sigma(noise, peak), seed});
            emit(sim_out, csv_text(trace_table(t)));
        };
    });

    auto *sim_map = sim->add_subcommand("fluxmap", "Transmission magnitude over flux and probe frequency");
    std::string map_config;
    double map_fr = 9.796;
    double map_g = 0.09;
    double map_kappa = 0.000697;
    double map_f_start = 0.45;
    double map_f_end = 0.55;
    int map_flux_points = 51;
    double map_p_start = 9.5;
    double map_p_end = 10.1;
    int map_probe_points = 301;
    int map_cutoff = kDefaultChargeCutoff;
    sim_map->add_option("--config", map_config, "Device config file")->required();
    sim_map->add_option("--fr-ghz", map_fr)->capture_default_str();
    sim_map->add_option("--g-ghz", map_g)->capture_default_str();
    sim_map->add_option("--kappa-ghz", map_kappa)->capture_default_str();
    sim_map->add_option("--f-start", map_f_start)->capture_default_str();
    sim_map->add_option("--f-end", map_f_end)->capture_default_str();
    sim_map->add_option("--flux-points", map_flux_points)->capture_default_str();
    sim_map->add_option("--probe-start", map_p_start)->capture_default_str();
    sim_map->add_option("--probe-end", map_p_end)->capture_default_str();
    sim_map->add_option("--probe-points", map_probe_points)->capture_default_str();
    sim_map->add_option("--cutoff", map_cutoff)->capture_default_str();
    common(sim_map, false);
    sim_map->callback([&] {
        action = [&] {
            require_readable(map_config);
            auto device = load_device(map_config);
            auto map = gen_flux_map(
                device, map_fr, map_g, map_kappa, map_f_start, map_f_end, map_flux_points, map_p_start, map_p_end,
                map_probe_points, map_cutoff);
            CsvTable t{{"flux_frac", "probe_ghz", "magnitude"}, {{}, {}, {}}};
            for (std::size_t i = 0; i < map.flux.size(); ++i) {
                for (std::size_t k = 0; k < map.probe_ghz.size(); ++k) {
                    t.columns[0].push_back(map.flux[i]);
                    t.columns[1].push_back(map.probe_ghz[k]);
                    t.columns[2].push_back(map.magnitude[i][k]);
                }
            }
            emit(sim_out, csv_text(t));
        };
    });

    auto *sim_series = sim->add_subcommand("t1series", "Repeated T1 values, one per row");
    double series_mean = 16.3;
    double series_sigma = 1.73;
    int series_count = 100;
    double outlier_fraction = 0.0;
    sim_series->add_option("--mean-us", series_mean)->capture_default_str();
    sim_series->add_option("--sigma-us", series_sigma)->capture_default_str();
    sim_series->add_option("--count", series_count)->capture_default_str();
    sim_series->add_option("--outlier-fraction", outlier_fraction)->capture_default_str();
    common(sim_series, false);
    sim_series->callback([&] {
        action = [&] {
            detail::require(series_count > 0, "count must be positive");
            auto values = gen_t1_series(series_mean, series_sigma, series_count, seed, outlier_fraction);
            emit(sim_out, csv_text(CsvTable{{"value"}, {values}}));
        };
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp &e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        app.exit(e, std::cerr, std::cerr);
        return kExitInput;
    }

    try {
        if (action) {
            action();
        }
    } catch (const InputError &e) {
        std::cerr << "cqedkit: input error: " << e.what() << '\n';
        return kExitInput;
    } catch (const FitError &e) {
        std::cerr << "cqedkit: fit failed: " << e.what() << '\n';
        return kExitFit;
    } catch (const SolverError &e) {
        std::cerr << "cqedkit: solver failure: " << e.what() << '\n';
        return kExitSolver;
    } catch (const std::exception &e) {
        std::cerr << "cqedkit: internal error: " << e.what() << '\n';
        return kExitSolver;
    }
    return kExitOk;
}
