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

#ifndef CQED_CONSTANTS_HPP
#define CQED_CONSTANTS_HPP

#include <numbers>

namespace cqed {

/// CODATA 2018 exact/recommended values, SI units.
struct PhysicalConstants {
    static constexpr double e = 1.602176634e-19;       // C
    static constexpr double h = 6.62607015e-34;        // J s
    static constexpr double eps0 = 8.8541878128e-12;   // F/m
    static constexpr double Phi0 = h / (2.0 * e);      // Wb
};

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Unit scale factors used at the SI boundary.
inline constexpr double kFemto = 1e-15;
inline constexpr double kGiga = 1e9;
inline constexpr double kMicro = 1e-6;
inline constexpr double kNano = 1e-9;

}  // namespace cqed

#endif  // CQED_CONSTANTS_HPP
