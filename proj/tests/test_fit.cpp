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

#include "cqed/fit.hpp"

#include <numeric>

#include "cqed/loss_budget.hpp"
#include "cqed/synth.hpp"
#include "gtest/gtest.h"

using namespace cqed;

namespace {

void expect_recovered(const FitResult &r, const std::vector<double> &truth, double tol) {
    ASSERT_EQ(r.params.size(), truth.size());
    EXPECT_TRUE(r.converged);
    for (std::size_t i = 0; i < truth.size(); ++i) {
        EXPECT_NEAR(r.params[i], truth[i], tol * std::abs(truth[i])) << r.names[i];
    }
}

std::vector<double> perturbed(const std::vector<double> &p, double frac) {
    std::vector<double> out(p);
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] *= (i % 2 == 0) ? 1.0 + frac : 1.0 - frac;
    }
    return out;
}

const std::vector<double> kT1Truth{1.0, 18.25, 0.05};
const std::vector<double> kRamseyTruth{1.0, 3.33, 5.0, 0.3, 0.05};
const std::vector<double> kEchoTruth{0.8, 23.2, 5.0, -0.7, 0.1};
const std::vector<double> kLorentzTruth{9.796, 0.000697, 1.0, 0.05};

TimeTrace t1_trace(const NoiseSpec &noise = {}) {
    return gen_t1_trace(18.25, 201, 80.0, 1.0, 0.05, noise);
}

TimeTrace ramsey_trace(const NoiseSpec &noise = {}) {
    return gen_ramsey_trace(3.33, 5.0, 201, 10.0, 1.0, 0.3, 0.05, noise);
}

TimeTrace echo_trace(const NoiseSpec &noise = {}) {
    return gen_ramsey_trace(23.2, 5.0, 801, 40.0, 0.8, -0.7, 0.1, noise, TraceKind::Echo);
}

TimeTrace resonance_trace(const NoiseSpec &noise = {}) {
    return gen_resonance_sweep(9.796, 0.000697, 0.01, 201, 1.0, 0.05, noise);
}

}  // namespace

TEST(trace, kinds_round_trip_through_names) {
    for (auto k : {TraceKind::T1Decay, TraceKind::Ramsey, TraceKind::Echo, TraceKind::ResonanceSweep}) {
        EXPECT_EQ(parse_trace_kind(to_string(k)), k);
    }
    EXPECT_THROW(parse_trace_kind("rabi"), InputError);
}

TEST(trace, validation) {
    TimeTrace t = t1_trace();
    t.x[5] = t.x[4];
    EXPECT_THROW(fit_exponential_decay(t), InputError);
    TimeTrace short_trace;
    short_trace.x = {0, 1, 2, 3, 4, 5, 6};
    short_trace.y = {7, 6, 5, 4, 3, 2, 1};
    EXPECT_THROW(fit_exponential_decay(short_trace), InputError);
    TimeTrace ragged = t1_trace();
    ragged.y.pop_back();
    EXPECT_THROW(fit_exponential_decay(ragged), InputError);
    TimeTrace inf_trace = t1_trace();
    inf_trace.y[3] = std::numeric_limits<double>::infinity();
    EXPECT_THROW(fit_exponential_decay(inf_trace), InputError);
}

TEST(fit_exponential_decay, noiseless_round_trip) {
    expect_recovered(fit_exponential_decay(t1_trace()), kT1Truth, 1e-6);
    expect_recovered(fit_exponential_decay(t1_trace(), perturbed(kT1Truth, 0.2)), kT1Truth, 1e-6);
    expect_recovered(fit_exponential_decay(t1_trace(), perturbed(kT1Truth, -0.2)), kT1Truth, 1e-6);
}

TEST(fit_exponential_decay, guess_follows_one_over_e) {
    auto g = guess_exponential(t1_trace());
    EXPECT_NEAR(g[1], 18.25, 0.1 * 18.25);
    EXPECT_NEAR(g[2], 0.05, 0.05);
}

TEST(fit_exponential_decay, one_percent_noise_matches_quoted_scale) {
    auto r = fit_exponential_decay(t1_trace({0.01, 2024}));
    EXPECT_NEAR(r.value("t1_us"), 18.25, 0.91);
    EXPECT_GT(r.sigma("t1_us"), 0.0);
    EXPECT_LT(r.sigma("t1_us"), 0.91);
    EXPECT_NEAR(r.residual_rms, 0.01, 0.002);
}

TEST(fit_exponential_decay, errors) {
    TimeTrace flat = t1_trace();
    std::fill(flat.y.begin(), flat.y.end(), 0.4);
    EXPECT_THROW(fit_exponential_decay(flat), FitError);
    EXPECT_THROW(fit_exponential_decay(ramsey_trace()), InputError);
    EXPECT_THROW(fit_exponential_decay(t1_trace(), std::vector<double>{1.0, 2.0}), InputError);
}

TEST(fit_damped_sinusoid, ramsey_noiseless_round_trip) {
    expect_recovered(fit_damped_sinusoid(ramsey_trace()), kRamseyTruth, 1e-6);
    expect_recovered(fit_damped_sinusoid(ramsey_trace(), perturbed(kRamseyTruth, 0.2)), kRamseyTruth, 1e-6);
    expect_recovered(fit_damped_sinusoid(ramsey_trace(), perturbed(kRamseyTruth, -0.2)), kRamseyTruth, 1e-6);
}

TEST(fit_damped_sinusoid, echo_noiseless_round_trip) {
    expect_recovered(fit_damped_sinusoid(echo_trace()), kEchoTruth, 1e-6);
    expect_recovered(fit_damped_sinusoid(echo_trace(), perturbed(kEchoTruth, 0.2)), kEchoTruth, 1e-6);
}

TEST(fit_damped_sinusoid, detuning_from_spectrum_peak) {
    EXPECT_NEAR(dominant_frequency(ramsey_trace(), 0.0, 10.0), 5.0, 0.05);
    auto g = guess_damped_sinusoid(ramsey_trace());
    EXPECT_NEAR(g[2], 5.0, 0.05);
}

TEST(fit_damped_sinusoid, canonical_form) {
    // Negative amplitude and phase outside (-pi, pi] describe the same curve.
    auto t = gen_ramsey_trace(3.33, 5.0, 201, 10.0, -1.0, 4.0, 0.05);
    auto r = fit_damped_sinusoid(t);
    EXPECT_GT(r.value("amplitude"), 0.0);
    EXPECT_GT(r.value("detuning_mhz"), 0.0);
    EXPECT_NEAR(r.value("amplitude"), 1.0, 1e-6);
    EXPECT_NEAR(r.value("phase"), 4.0 + std::numbers::pi - kTwoPi, 1e-6);
}

TEST(fit_damped_sinusoid, too_few_periods) {
    auto t = gen_ramsey_trace(20.0, 0.15, 101, 10.0, 1.0, 0.0, 0.0);
    EXPECT_THROW(fit_damped_sinusoid(t), FitError);
    EXPECT_THROW(fit_damped_sinusoid(t, std::vector<double>{1.0, 20.0, 0.15, 0.0, 0.0}), FitError);
}

TEST(fit_damped_sinusoid, zero_amplitude_is_flagged) {
    auto t = gen_ramsey_trace(3.33, 5.0, 201, 10.0, 0.0, 0.0, 0.5, {0.02, 3});
    auto r = fit_damped_sinusoid(t);
    ASSERT_FALSE(r.warnings.empty());
    EXPECT_NE(r.warnings.front().find("degenerate"), std::string::npos);
    EXPECT_LT(r.value("amplitude"), 3 * r.sigma("amplitude"));
}

TEST(fit_damped_sinusoid, errors) {
    EXPECT_THROW(fit_damped_sinusoid(t1_trace()), InputError);
    EXPECT_THROW(fit_damped_sinusoid(ramsey_trace(), std::vector<double>{1.0, 3.0, 5.0}), InputError);
    EXPECT_THROW(fit_damped_sinusoid(ramsey_trace(), std::vector<double>{1.0, -3.0, 5.0, 0.0, 0.0}), InputError);
    TimeTrace flat = ramsey_trace();
    std::fill(flat.y.begin(), flat.y.end(), 0.0);
    EXPECT_THROW(fit_damped_sinusoid(flat), FitError);
}

TEST(fit_lorentzian, noiseless_round_trip) {
    expect_recovered(fit_lorentzian(resonance_trace()), kLorentzTruth, 1e-6);
    for (double s : {0.2, -0.2}) {
        std::vector<double> guess{9.796 + s * 0.000697, 0.000697 * (1 + s), 1.0 * (1 - s), 0.05 * (1 + s)};
        expect_recovered(fit_lorentzian(resonance_trace(), guess), kLorentzTruth, 1e-6);
    }
}

TEST(fit_lorentzian, linewidth_feeds_loaded_q) {
    auto r = fit_lorentzian(resonance_trace());
    EXPECT_NEAR(loaded_q(r.value("f0_ghz"), r.value("kappa_ghz")), 1.405e4, 1.405e4 * 1e-3);
}

TEST(fit_lorentzian, symmetric_data_centers_exactly) {
    TimeTrace t;
    t.kind = TraceKind::ResonanceSweep;
    for (int i = -50; i <= 50; ++i) {
        double d = 0.02 * i;
        t.x.push_back(5.0 + d);
        t.y.push_back(1.0 / (1.0 + d * d / 0.01) + 0.01 * std::cos(7 * d));
    }
    auto r = fit_lorentzian(t);
    EXPECT_NEAR(r.value("f0_ghz"), 5.0, 1e-9);
}

TEST(fit_lorentzian, boundary_peak_is_flagged) {
    auto t = gen_resonance_sweep(9.796, 0.000697, 0.01, 201, 1.0, 0.05);
    TimeTrace half;
    half.kind = TraceKind::ResonanceSweep;
    half.x.assign(t.x.begin() + 100, t.x.end());
    half.y.assign(t.y.begin() + 100, t.y.end());
    auto r = fit_lorentzian(half);
    ASSERT_FALSE(r.warnings.empty());
    EXPECT_NE(r.warnings.front().find("boundary"), std::string::npos);
}

TEST(fit_lorentzian, errors) {
    EXPECT_THROW(fit_lorentzian(t1_trace()), InputError);
    TimeTrace flat = resonance_trace();
    std::fill(flat.y.begin(), flat.y.end(), 1.0);
    EXPECT_THROW(fit_lorentzian(flat), FitError);
}

TEST(fit, noisy_estimates_cover_truth) {
    // Smaller version of the 100-seed coverage study.
    int t1_hits = 0;
    int ramsey_hits = 0;
    int lorentz_hits = 0;
    const int runs = 20;
    auto covered = [](const FitResult &r, const std::vector<double> &truth) {
        for (std::size_t i = 0; i < truth.size(); ++i) {
            if (std::abs(r.params[i] - truth[i]) > 3.0 * r.sigmas[i]) {
                return false;
            }
        }
        return true;
    };
    for (int s = 0; s < runs; ++s) {
        t1_hits += covered(fit_exponential_decay(t1_trace({0.02, 100u + s})), kT1Truth);
        ramsey_hits += covered(fit_damped_sinusoid(ramsey_trace({0.02, 200u + s})), kRamseyTruth);
        lorentz_hits += covered(fit_lorentzian(resonance_trace({0.02, 300u + s})), kLorentzTruth);
    }
    EXPECT_GE(t1_hits, 17);
    EXPECT_GE(ramsey_hits, 17);
    EXPECT_GE(lorentz_hits, 17);
}

TEST(fit, covariance_is_symmetric_psd) {
    auto r = fit_damped_sinusoid(ramsey_trace({0.02, 77}));
    EXPECT_LT((r.covariance - r.covariance.transpose()).cwiseAbs().maxCoeff(), 1e-18);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(r.covariance);
    EXPECT_GE(eig.eigenvalues().minCoeff(), 0.0);
    for (double s : r.sigmas) {
        EXPECT_GE(s, 0.0);
    }
}

TEST(fit, y_scaling_leaves_shape_parameters) {
    auto t = ramsey_trace({0.02, 12});
    auto scaled = t;
    for (auto &v : scaled.y) {
        v *= 250.0;
    }
    auto a = fit_damped_sinusoid(t);
    auto b = fit_damped_sinusoid(scaled);
    for (const char *name : {"t2_us", "detuning_mhz"}) {
        EXPECT_NEAR(b.value(name), a.value(name), 1e-9 * a.value(name)) << name;
    }
    EXPECT_NEAR(b.value("amplitude"), 250.0 * a.value("amplitude"), 1e-9 * 250.0);
    EXPECT_NEAR(b.sigma("amplitude"), 250.0 * a.sigma("amplitude"), 1e-6 * 250.0 * a.sigma("amplitude"));

    auto l = resonance_trace({0.02, 13});
    auto ls = l;
    for (auto &v : ls.y) {
        v *= 0.001;
    }
    auto la = fit_lorentzian(l);
    auto lb = fit_lorentzian(ls);
    EXPECT_NEAR(lb.value("kappa_ghz"), la.value("kappa_ghz"), 1e-9 * la.value("kappa_ghz"));
    EXPECT_NEAR(lb.value("f0_ghz"), la.value("f0_ghz"), 1e-9 * la.value("f0_ghz"));
}

TEST(fit, deterministic) {
    auto t = ramsey_trace({0.02, 5});
    auto a = fit_damped_sinusoid(t);
    auto b = fit_damped_sinusoid(t);
    EXPECT_EQ(a.params, b.params);
    EXPECT_EQ(a.sigmas, b.sigmas);
    EXPECT_EQ(to_json(a).dump(), to_json(b).dump());
}

TEST(fit, json_fields) {
    auto j = to_json(fit_exponential_decay(t1_trace({0.02, 1})));
    EXPECT_TRUE(j["params"].contains("t1_us"));
    EXPECT_TRUE(j["sigmas"].contains("offset"));
    EXPECT_TRUE(j["converged"].get<bool>());
    EXPECT_GE(j["iterations"].get<int>(), 1);
    EXPECT_GT(j["residual_rms"].get<double>(), 0.0);
}

TEST(gaussian_stats, recovers_drift_distribution) {
    auto values = gen_t1_series(16.3, 1.73, 100, 7);
    auto s = gaussian_stats(values);
    EXPECT_NEAR(s.mean, 16.3, 0.6);
    EXPECT_NEAR(s.sigma, 1.73, 0.5);
    EXPECT_EQ(s.counts.size(), 10u);
    EXPECT_EQ(std::accumulate(s.counts.begin(), s.counts.end(), 0), 100);
    EXPECT_EQ(s.bin_edges.front(), *std::min_element(values.begin(), values.end()));
    EXPECT_EQ(s.bin_edges.back(), *std::max_element(values.begin(), values.end()));
}

TEST(gaussian_stats, ramsey_series_analogue) {
    auto s = gaussian_stats(gen_t1_series(3.25, 0.44, 100, 11));
    EXPECT_NEAR(s.mean, 3.25, 0.6 * 0.44 / 1.73);
    EXPECT_NEAR(s.sigma, 0.44, 0.5 * 0.44 / 1.73);
}

TEST(gaussian_stats, flags_low_outliers) {
    auto values = gen_t1_series(16.3, 1.73, 100, 7, 0.05);
    auto s = gaussian_stats(values);
    EXPECT_GE(s.outliers.size(), 4u);
    for (auto i : s.outliers) {
        EXPECT_LT(values[i], s.mean);
    }
}

TEST(gaussian_stats, symmetric_two_point_data) {
    std::vector<double> values;
    for (int i = 0; i < 12; ++i) {
        values.push_back(2.0);
        values.push_back(4.0);
    }
    // Two spikes carry no Gaussian shape: sample moments are reported.
    auto s = gaussian_stats(values);
    EXPECT_NEAR(s.mean, 3.0, 1e-12);
    EXPECT_NEAR(s.sigma, std::sqrt(24.0 / 23.0), 1e-12);
    EXPECT_FALSE(s.fit.converged);
    ASSERT_EQ(s.fit.warnings.size(), 1u);
    EXPECT_TRUE(s.outliers.empty());
    EXPECT_TRUE(to_json(s).contains("warnings"));
}

TEST(gaussian_stats, binning_override) {
    auto values = gen_t1_series(16.3, 1.73, 100, 7);
    auto s = gaussian_stats(values, BinningPolicy{12});
    EXPECT_EQ(s.counts.size(), 12u);
    EXPECT_EQ(s.bin_edges.size(), 13u);
    EXPECT_THROW(gaussian_stats(values, BinningPolicy{3}), InputError);
}

TEST(gaussian_stats, errors) {
    EXPECT_THROW(gaussian_stats(std::vector<double>(19, 1.0)), InputError);
    EXPECT_THROW(gaussian_stats(std::vector<double>(30, 1.0)), InputError);
    std::vector<double> bad(30, 1.0);
    bad[3] = std::nan("");
    EXPECT_THROW(gaussian_stats(bad), InputError);
}

TEST(gaussian_stats, json_fields) {
    auto j = to_json(gaussian_stats(gen_t1_series(16.3, 1.73, 100, 7, 0.05)));
    EXPECT_EQ(j["n"].get<int>(), 100);
    EXPECT_EQ(j["outliers"].size(), j["outlier_values"].size());
    EXPECT_EQ(j["bin_edges"].size(), j["counts"].size() + 1);
}
