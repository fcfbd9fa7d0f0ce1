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

#include "cqed/synth.hpp"

#include <algorithm>

#include "gtest/gtest.h"

using namespace cqed;

TEST(prng, splitmix_reference_sequence) {
    SplitMix64 sm(0);
    EXPECT_EQ(sm.next(), 0xe220a8397b1dcdafULL);
    EXPECT_EQ(sm.next(), 0x6e789e6aa1b965f4ULL);
    EXPECT_EQ(sm.next(), 0x06c45d188009454fULL);
}

TEST(prng, xoshiro_golden_values) {
    Xoshiro256StarStar rng(42);
    EXPECT_EQ(rng.next(), 1546998764402558742ULL);
    EXPECT_EQ(rng.next(), 6990951692964543102ULL);
    EXPECT_EQ(rng.next(), 12544586762248559009ULL);
    EXPECT_EQ(rng.next(), 17057574109182124193ULL);
}

TEST(prng, uniform_range) {
    Xoshiro256StarStar rng(9);
    for (int i = 0; i < 10000; ++i) {
        double u = rng.uniform();
        ASSERT_GE(u, 0.0);
        ASSERT_LT(u, 1.0);
    }
}

TEST(prng, normal_moments) {
    Xoshiro256StarStar rng(2024);
    const int n = 20000;
    double sum = 0.0;
    double sum2 = 0.0;
    for (int i = 0; i < n; ++i) {
        double v = rng.normal();
        sum += v;
        sum2 += v * v;
    }
    double mean = sum / n;
    double var = sum2 / n - mean * mean;
    EXPECT_LT(std::abs(mean), 5.0 / std::sqrt(n));
    EXPECT_NEAR(var, 1.0, 0.2);
}

TEST(synth, trace_noise_moments) {
    const double sigma = 0.3;
    auto clean = gen_t1_trace(18.25, 5000, 80.0, 1.0, 0.0);
    auto noisy = gen_t1_trace(18.25, 5000, 80.0, 1.0, 0.0, {sigma, 77});
    double sum = 0.0;
    double sum2 = 0.0;
    for (std::size_t i = 0; i < clean.y.size(); ++i) {
        double e = noisy.y[i] - clean.y[i];
        sum += e;
        sum2 += e * e;
    }
    const double n = static_cast<double>(clean.y.size());
    double mean = sum / n;
    EXPECT_LT(std::abs(mean), 5.0 * sigma / std::sqrt(n));
    EXPECT_NEAR(sum2 / n - mean * mean, sigma * sigma, 0.2 * sigma * sigma);
}

TEST(synth, noiseless_t1_is_model_curve) {
    auto t = gen_t1_trace(18.25, 101, 80.0, 0.9, 0.05);
    ASSERT_EQ(t.x.size(), 101u);
    EXPECT_EQ(t.kind, TraceKind::T1Decay);
    EXPECT_EQ(t.x.front(), 0.0);
    EXPECT_EQ(t.x.back(), 80.0);
    for (std::size_t i = 0; i < t.x.size(); ++i) {
        EXPECT_EQ(t.y[i], 0.9 * std::exp(-t.x[i] / 18.25) + 0.05);
    }
}

TEST(synth, seeded_output_is_bit_identical) {
    auto a = gen_ramsey_trace(3.33, 5.0, 201, 10.0, 1.0, 0.0, 0.0, {0.02, 123});
    auto b = gen_ramsey_trace(3.33, 5.0, 201, 10.0, 1.0, 0.0, 0.0, {0.02, 123});
    auto c = gen_ramsey_trace(3.33, 5.0, 201, 10.0, 1.0, 0.0, 0.0, {0.02, 124});
    EXPECT_EQ(a.y, b.y);
    EXPECT_NE(a.y, c.y);
    EXPECT_EQ(gen_t1_series(16.3, 1.73, 100, 5, 0.05), gen_t1_series(16.3, 1.73, 100, 5, 0.05));
}

TEST(synth, t1_series_golden_values) {
    // From an independent Python implementation of the generator and the polar method.
    auto v = gen_t1_series(16.3, 1.73, 5, 1);
    std::vector<double> expected{19.5600052612832, 16.62832094746239, 18.552616133715603, 12.996678605712042,
                                 17.05829518314966};
    EXPECT_EQ(v, expected);
}

TEST(synth, ramsey_fringes_visible) {
    auto t = gen_ramsey_trace(3.33, 5.0, 667, 3.33, 1.0, 0.0, 0.0);
    int crossings = 0;
    for (std::size_t i = 1; i < t.y.size(); ++i) {
        if ((t.y[i - 1] > 0) != (t.y[i] > 0)) {
            ++crossings;
        }
    }
    // 16.65 periods: two sign changes each.
    EXPECT_EQ(crossings, 33);
}

TEST(synth, zero_detuning_is_pure_decay) {
    auto t = gen_ramsey_trace(3.33, 0.0, 51, 10.0, 1.0, 0.0, 0.2);
    for (std::size_t i = 0; i < t.x.size(); ++i) {
        EXPECT_DOUBLE_EQ(t.y[i], std::exp(-t.x[i] / 3.33) + 0.2);
    }
}

TEST(synth, phase_pi_flips_sign) {
    auto a = gen_ramsey_trace(3.33, 5.0, 101, 10.0, 1.0, 0.4, 0.2);
    auto b = gen_ramsey_trace(3.33, 5.0, 101, 10.0, 1.0, 0.4 + std::numbers::pi, 0.2);
    for (std::size_t i = 0; i < a.y.size(); ++i) {
        EXPECT_NEAR(a.y[i] - 0.2, -(b.y[i] - 0.2), 1e-12);
    }
}

TEST(synth, echo_kind) {
    auto t = gen_ramsey_trace(23.2, 5.0, 101, 40.0, 1.0, 0.0, 0.0, {}, TraceKind::Echo);
    EXPECT_EQ(t.kind, TraceKind::Echo);
    EXPECT_THROW(gen_ramsey_trace(23.2, 5.0, 101, 40.0, 1.0, 0.0, 0.0, {}, TraceKind::T1Decay), InputError);
}

TEST(synth, resonance_half_width) {
    const double f0 = 9.796;
    const double kappa = 0.000697;
    auto t = gen_resonance_sweep(f0, kappa, 10 * kappa, 2001, 1.0, 0.0);
    const double dx = t.x[1] - t.x[0];
    auto peak = std::max_element(t.y.begin(), t.y.end());
    EXPECT_NEAR(t.x[peak - t.y.begin()], f0, dx);
    EXPECT_NEAR(*peak, 1.0, 1e-6);
    // Linear interpolation of the half-maximum crossings.
    std::vector<double> crossings;
    for (std::size_t i = 1; i < t.y.size(); ++i) {
        if ((t.y[i - 1] - 0.5) * (t.y[i] - 0.5) < 0) {
            double w = (0.5 - t.y[i - 1]) / (t.y[i] - t.y[i - 1]);
            crossings.push_back(t.x[i - 1] + w * dx);
        }
    }
    ASSERT_EQ(crossings.size(), 2u);
    EXPECT_NEAR(crossings[1] - crossings[0], kappa, dx);
}

TEST(synth, generator_errors) {
    EXPECT_THROW(gen_resonance_sweep(9.796, 0.000697, 0.005, 201, 1.0, 0.0), InputError);
    EXPECT_THROW(gen_t1_trace(18.25, 7, 80.0, 1.0, 0.0), InputError);
    EXPECT_THROW(gen_t1_trace(-1.0, 101, 80.0, 1.0, 0.0), InputError);
    EXPECT_THROW(gen_t1_trace(18.25, 101, 0.0, 1.0, 0.0), InputError);
    EXPECT_THROW(gen_t1_trace(18.25, 101, 80.0, 1.0, 0.0, {-0.1, 1}), InputError);
    EXPECT_THROW(gen_ramsey_trace(3.33, -5.0, 101, 10.0, 1.0, 0.0, 0.0), InputError);
}

TEST(synth, flux_map_at_sweet_spot) {
    auto d = DeviceParams::make(0.358, 31.2, 52.8, 140.0, 0.244);
    auto map = gen_flux_map(d, 9.796, 0.09, 0.000697, 0.45, 0.55, 3, 9.78, 9.81, 601, 10);
    ASSERT_EQ(map.flux.size(), 3u);
    ASSERT_EQ(map.magnitude[1].size(), 601u);
    EXPECT_EQ(map.flux[1], 0.5);
    const auto &row = map.magnitude[1];
    auto peak = std::max_element(row.begin(), row.end()) - row.begin();
    // Dispersive shift g^2 / Delta is about 2.5 MHz.
    EXPECT_NEAR(map.probe_ghz[peak], 9.796, 0.003);
    EXPECT_GT(row[peak], 0.99);
}

TEST(synth, flux_map_resolves_avoided_crossing) {
    auto d = DeviceParams::make(0.358, 31.2, 52.8, 140.0, 0.244);
    const double g = 0.09;
    // Resonator inside the qubit band; pick the flux row nearest resonance.
    auto map = gen_flux_map(d, 7.5, g, 0.002, 0.45, 0.5, 41, 7.0, 8.0, 2001, 10);
    auto spectrum = spectrum_sweep(d, 0.45, 0.5, 41, 10);
    std::size_t best = 0;
    for (std::size_t i = 0; i < spectrum.points.size(); ++i) {
        if (std::abs(spectrum.points[i].omega01_ghz - 7.5) < std::abs(spectrum.points[best].omega01_ghz - 7.5)) {
            best = i;
        }
    }
    const auto &row = map.magnitude[best];
    std::vector<double> peaks;
    for (std::size_t k = 1; k + 1 < row.size(); ++k) {
        if (row[k] > row[k - 1] && row[k] >= row[k + 1] && row[k] > 0.05) {
            peaks.push_back(map.probe_ghz[k]);
        }
    }
    ASSERT_EQ(peaks.size(), 2u);
    const double step = map.probe_ghz[1] - map.probe_ghz[0];
    EXPECT_GE(peaks[1] - peaks[0], 2 * g - step);
}

TEST(synth, flux_map_decoupled_limit) {
    auto d = DeviceParams::make(0.358, 31.2, 52.8, 140.0, 0.244);
    auto map = gen_flux_map(d, 9.796, 1e-6, 0.000697, 0.45, 0.55, 5, 9.79, 9.80, 201, 10);
    for (const auto &row : map.magnitude) {
        for (std::size_t k = 0; k < row.size(); ++k) {
            EXPECT_NEAR(row[k], lorentzian(map.probe_ghz[k], 9.796, 0.000697, 1.0, 0.0), 1e-6);
        }
    }
}

TEST(synth, t1_series) {
    auto flat = gen_t1_series(16.3, 0.0, 10, 1);
    for (double v : flat) {
        EXPECT_EQ(v, 16.3);
    }
    auto values = gen_t1_series(16.3, 1.73, 100, 3, 0.05);
    int low = 0;
    for (double v : values) {
        EXPECT_GT(v, 0.0);
        low += v <= 16.3 - 4 * 1.73;
    }
    EXPECT_GE(low, 5);
    // Wide distribution close to zero: draws stay positive.
    for (double v : gen_t1_series(1.0, 2.0, 1000, 4)) {
        EXPECT_GT(v, 0.0);
    }
    EXPECT_THROW(gen_t1_series(16.3, 1.73, 0, 1), InputError);
    EXPECT_THROW(gen_t1_series(16.3, 1.73, 10, 1, 1.0), InputError);
    EXPECT_THROW(gen_t1_series(16.3, 1.73, 10, 1, -0.1), InputError);
    EXPECT_THROW(gen_t1_series(16.3, -1.0, 10, 1), InputError);
}
