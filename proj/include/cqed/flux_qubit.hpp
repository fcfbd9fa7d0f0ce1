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

#ifndef CQED_FLUX_QUBIT_HPP
#define CQED_FLUX_QUBIT_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "cqed/circuit_model.hpp"
#include "cqed/constants.hpp"
#include "cqed/errors.hpp"
#include "cqed/text.hpp"

// Three-junction capacitively shunted flux qubit in the two-island charge
// basis.
//
// Phases theta1, theta2 sit across the two large junctions; fluxoid
// quantization puts the flux in the small-junction term:
//
//   H = (2e)^2/2 n^T M^-1 n - E_J cos(theta1) - E_J cos(theta2)
//       - alpha E_J cos(2 pi f - theta1 - theta2)
//
//   M = [[C + C', C'], [C', C + C']],  C = C_large,  C' = alpha C + C_shunt.
//
// Charges n1, n2 run over [-N, N]. All energies are E/h in GHz.

namespace cqed {

inline constexpr int kMinChargeCutoff = 4;
inline constexpr int kDefaultChargeCutoff = 12;
/// Largest allowed change of omega01 between cutoffs N and N + 2, in GHz.
inline constexpr double kConvergenceLimitGhz = 1e-3;

struct QubitHamiltonianSpec {
    DeviceParams device;
    double flux_frac = 0.5;
    int charge_cutoff = kDefaultChargeCutoff;

    void validate() const {
        detail::require(charge_cutoff >= kMinChargeCutoff, "charge cutoff must be at least 4");
        detail::require(std::isfinite(flux_frac), "flux must be finite");
    }

    int basis_size() const {
        int d = 2 * charge_cutoff + 1;
        return d * d;
    }
};

struct EnergyLevels {
    std::vector<double> levels;     // ascending, levels[0] == 0
    double convergence_delta = 0.0; // |omega01(N) - omega01(N + 2)|, GHz
};

struct SpectrumPoint {
    double flux_frac = 0.0;
    double omega01_ghz = 0.0;
    std::optional<double> omega12_ghz;
};

struct SpectrumCurve {
    std::vector<SpectrumPoint> points;
};

/// Capacitance matrix in fF, rescaled so that e^2 / (2 C_sigma) reproduces
/// the device's charging energy when that energy was supplied directly.
inline Eigen::Matrix2d capacitance_matrix(const DeviceParams &d) {
    const double c = d.c_large_ff;
    const double cp = d.alpha * d.c_large_ff + d.c_shunt_ff;
    Eigen::Matrix2d m;
    m << c + cp, cp, cp, c + cp;
    if (d.ec_override) {
        m *= capacitance_from_charging_energy(d.ec_ghz) / d.c_sigma_ff;
    }
    return m;
}

/// Kinetic-energy matrix K with E_kin = n^T K n, i.e. K = (2e)^2/2 M^-1 / h, in GHz.
inline Eigen::Matrix2d charge_energy_matrix(const DeviceParams &d) {
    Eigen::Matrix2d m = capacitance_matrix(d);
    double det = m.determinant();
    if (!(std::abs(det) > 1e-12 * m.squaredNorm())) {
        throw InputError("singular capacitance matrix");
    }
    constexpr double e = PhysicalConstants::e;
    return (2.0 * e * e / (PhysicalConstants::h * kFemto * kGiga)) * m.inverse();
}

namespace detail {

/// Sparse Hermitian operator in the full charge basis, stored as adjacency
/// lists. Every off-diagonal element is stored together with its mirror.
struct ChargeHamiltonian {
    struct Hop {
        int to = 0;
        std::complex<double> value;
    };

    int cutoff = 0;
    int width = 0;  // 2N + 1
    std::vector<double> diagonal;
    std::vector<std::vector<Hop>> hops;  // hops[col] lists H(to, col)

    int index(int n1, int n2) const {
        return (n1 + cutoff) * width + (n2 + cutoff);
    }

    int size() const {
        return width * width;
    }
};

inline ChargeHamiltonian charge_hamiltonian(const DeviceParams &device, double flux, int cutoff) {
    const Eigen::Matrix2d k = charge_energy_matrix(device);
    ChargeHamiltonian h;
    h.cutoff = cutoff;
    h.width = 2 * cutoff + 1;
    h.diagonal.assign(h.size(), 0.0);
    h.hops.assign(h.size(), {});

    const double half_ej = 0.5 * device.ej_ghz;
    const double half_alpha_ej = 0.5 * device.alpha * device.ej_ghz;
    const double phase = kTwoPi * flux;
    // Lowering both charges carries exp(+i 2 pi f); raising carries the conjugate.
    const std::complex<double> lower_both = -half_alpha_ej * std::complex<double>(std::cos(phase), std::sin(phase));

    auto link = [&h](int from, int to, std::complex<double> v) {
        h.hops[from].push_back({to, v});
        h.hops[to].push_back({from, std::conj(v)});
    };

    for (int n1 = -cutoff; n1 <= cutoff; ++n1) {
        for (int n2 = -cutoff; n2 <= cutoff; ++n2) {
            const int i = h.index(n1, n2);
            h.diagonal[i] = k(0, 0) * n1 * n1 + 2.0 * k(0, 1) * n1 * n2 + k(1, 1) * n2 * n2;
            if (n1 > -cutoff) {
                link(i, h.index(n1 - 1, n2), -half_ej);
            }
            if (n2 > -cutoff) {
                link(i, h.index(n1, n2 - 1), -half_ej);
            }
            if (n1 > -cutoff && n2 > -cutoff) {
                link(i, h.index(n1 - 1, n2 - 1), lower_both);
            }
        }
    }
    return h;
}

/// Real orthonormal basis adapted to the two symmetries of H: exchange of
/// the islands (n1 <-> n2) and inversion combined with complex conjugation
/// (n -> -n, K). In each exchange sector the antiunitary symmetry makes the
/// projected Hamiltonian real symmetric.
struct SymmetryBasis {
    struct Term {
        int state = 0;
        std::complex<double> coeff;
    };
    using Vector = std::vector<Term>;

    std::array<std::vector<Vector>, 2> sectors;  // exchange-even, exchange-odd
};

inline SymmetryBasis symmetry_basis(const ChargeHamiltonian &h) {
    const int n = h.cutoff;
    SymmetryBasis basis;
    const std::complex<double> i_unit(0.0, 1.0);
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);

    // Exchange-symmetrized state |a,b> + s|b,a>, normalized.
    auto sym = [&](int a, int b, int s) {
        SymmetryBasis::Vector v;
        if (a == b) {
            v.push_back({h.index(a, a), 1.0});
        } else {
            v.push_back({h.index(a, b), inv_sqrt2});
            v.push_back({h.index(b, a), s * inv_sqrt2});
        }
        return v;
    };
    auto combine = [](const SymmetryBasis::Vector &x, const SymmetryBasis::Vector &y, std::complex<double> cx,
                      std::complex<double> cy) {
        SymmetryBasis::Vector out;
        for (const auto &t : x) {
            out.push_back({t.state, cx * t.coeff});
        }
        for (const auto &t : y) {
            out.push_back({t.state, cy * t.coeff});
        }
        return out;
    };

    for (int sector = 0; sector < 2; ++sector) {
        const int s = sector == 0 ? 1 : -1;
        for (int a = -n; a <= n; ++a) {
            for (int b = -n; b <= n; ++b) {
                // Orbit {(a,b), (b,a), (-a,-b), (-b,-a)}; emit once from its
                // lexicographically smallest member.
                std::array<std::pair<int, int>, 4> orbit{{{a, b}, {b, a}, {-a, -b}, {-b, -a}}};
                if (*std::min_element(orbit.begin(), orbit.end()) != std::make_pair(a, b)) {
                    continue;
                }
                if (a == b && s == -1) {
                    continue;
                }
                auto w = sym(a, b, s);
                if (a == 0 && b == 0) {
                    basis.sectors[sector].push_back(w);
                } else if (b == -a) {
                    // Inversion maps w to s * w.
                    basis.sectors[sector].push_back(s == 1 ? w : combine(w, {}, i_unit, 0.0));
                } else {
                    auto w_inv = sym(-a, -b, s);
                    basis.sectors[sector].push_back(combine(w, w_inv, inv_sqrt2, inv_sqrt2));
                    basis.sectors[sector].push_back(combine(w, w_inv, i_unit * inv_sqrt2, -i_unit * inv_sqrt2));
                }
            }
        }
    }
    return basis;
}

/// Real symmetric projection of H onto one symmetry sector.
inline Eigen::MatrixXd project_sector(const ChargeHamiltonian &h, const std::vector<SymmetryBasis::Vector> &vectors) {
    const int dim = static_cast<int>(vectors.size());
    std::vector<std::vector<std::pair<int, std::complex<double>>>> membership(h.size());
    for (int k = 0; k < dim; ++k) {
        for (const auto &t : vectors[k]) {
            membership[t.state].push_back({k, t.coeff});
        }
    }

    Eigen::MatrixXcd block = Eigen::MatrixXcd::Zero(dim, dim);
    for (int l = 0; l < dim; ++l) {
        for (const auto &t : vectors[l]) {
            auto scatter = [&](int row, std::complex<double> v) {
                for (const auto &[k, c] : membership[row]) {
                    block(k, l) += std::conj(c) * v;
                }
            };
            scatter(t.state, h.diagonal[t.state] * t.coeff);
            for (const auto &hop : h.hops[t.state]) {
                scatter(hop.to, hop.value * t.coeff);
            }
        }
    }

    const double scale = std::max(1.0, block.cwiseAbs().maxCoeff());
    if (block.imag().cwiseAbs().maxCoeff() > 1e-9 * scale) {
        throw SolverError("symmetry-adapted Hamiltonian block is not real");
    }
    Eigen::MatrixXd real = block.real();
    return 0.5 * (real + real.transpose());
}

/// All eigenvalues (GHz, ascending, not ground-referenced). No cutoff bound
/// is enforced here so that small bases can be cross-checked.
inline std::vector<double> raw_eigenvalues(const DeviceParams &device, double flux, int cutoff) {
    auto h = charge_hamiltonian(device, flux, cutoff);
    auto basis = symmetry_basis(h);
    std::vector<double> values;
    values.reserve(h.size());
    for (const auto &sector : basis.sectors) {
        if (sector.empty()) {
            continue;
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(project_sector(h, sector), Eigen::EigenvaluesOnly);
        if (solver.info() != Eigen::Success) {
            throw SolverError(
                "eigen-solver did not converge (flux " + format_number(flux) + ", cutoff " + std::to_string(cutoff) +
                ", block dimension " + std::to_string(sector.size()) + ")");
        }
        for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) {
            values.push_back(solver.eigenvalues()[i]);
        }
    }
    if (static_cast<int>(values.size()) != h.size()) {
        throw SolverError("symmetry basis does not span the charge space");
    }
    std::sort(values.begin(), values.end());
    return values;
}

inline std::vector<double> ground_referenced(std::vector<double> values, int k) {
    values.resize(k);
    const double ground = values.front();
    for (auto &v : values) {
        v -= ground;
    }
    values.front() = 0.0;
    return values;
}

}  // namespace detail

/// Dense Hermitian Hamiltonian in the full (2N+1)^2 charge basis, state
/// index (n1 + N)(2N + 1) + (n2 + N).
inline Eigen::MatrixXcd build_hamiltonian(const QubitHamiltonianSpec &spec) {
    spec.validate();
    auto h = detail::charge_hamiltonian(spec.device, spec.flux_frac, spec.charge_cutoff);
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(h.size(), h.size());
    for (int col = 0; col < h.size(); ++col) {
        m(col, col) = h.diagonal[col];
        for (const auto &hop : h.hops[col]) {
            m(hop.to, col) += hop.value;
        }
    }
    return m;
}

/// k lowest levels at the spec's cutoff. omega01 is re-evaluated at N + 2;
/// a change above 1 MHz is a SolverError.
inline EnergyLevels eigenlevels(const QubitHamiltonianSpec &spec, int k) {
    spec.validate();
    detail::require(k >= 1 && k <= spec.basis_size(), "level count out of range");
    auto values = detail::raw_eigenvalues(spec.device, spec.flux_frac, spec.charge_cutoff);
    auto finer = detail::raw_eigenvalues(spec.device, spec.flux_frac, spec.charge_cutoff + 2);

    EnergyLevels out;
    out.convergence_delta = std::abs((values[1] - values[0]) - (finer[1] - finer[0]));
    if (out.convergence_delta > kConvergenceLimitGhz) {
        throw SolverError(
            "charge basis not converged at cutoff " + std::to_string(spec.charge_cutoff) + " (flux " +
            format_number(spec.flux_frac) + "): omega01 changes by " + format_number(out.convergence_delta) + " GHz");
    }
    out.levels = detail::ground_referenced(std::move(values), k);
    return out;
}

/// levels[j] - levels[i] in GHz.
inline double transition_frequency(const QubitHamiltonianSpec &spec, int i, int j) {
    detail::require(i >= 0 && j >= 0, "level index must be non-negative");
    detail::require(i <= j, "transition requires i <= j");
    detail::require(j < spec.basis_size(), "level index out of range");
    auto levels = eigenlevels(spec, j + 1).levels;
    return levels[j] - levels[i];
}

/// omega12 - omega01 in GHz.
inline double anharmonicity(const DeviceParams &device, double flux, int cutoff = kDefaultChargeCutoff) {
    auto levels = eigenlevels({device, flux, cutoff}, 3).levels;
    return (levels[2] - levels[1]) - levels[1];
}

/// Uniform flux grid with f_start and f_end included; symmetric grids have
/// an exact midpoint.
inline std::vector<double> flux_grid(double f_start, double f_end, int n_points) {
    detail::require(std::isfinite(f_start) && std::isfinite(f_end) && f_start < f_end, "need f_start < f_end");
    detail::require(n_points >= 2, "need at least two flux points");
    std::vector<double> grid(n_points);
    const double last = n_points - 1;
    for (int i = 0; i < n_points; ++i) {
        grid[i] = (f_start * (last - i) + f_end * i) / last;
    }
    return grid;
}

/// omega01 (optionally omega12) on a uniform flux grid.
///
/// Grid points are independent. Basis convergence is checked at N + 2 on the
/// first, middle and last point; a change above 1 MHz is a SolverError.
inline SpectrumCurve spectrum_sweep(
    const DeviceParams &device, double f_start, double f_end, int n_points, int cutoff = kDefaultChargeCutoff,
    bool with_omega12 = false) {
    detail::require(cutoff >= kMinChargeCutoff, "charge cutoff must be at least 4");
    auto grid = flux_grid(f_start, f_end, n_points);
    const std::array<int, 3> checked{0, (n_points - 1) / 2, n_points - 1};

    SpectrumCurve curve;
    curve.points.reserve(grid.size());
    for (int i = 0; i < n_points; ++i) {
        const double f = grid[i];
        try {
            auto values = detail::raw_eigenvalues(device, f, cutoff);
            SpectrumPoint p;
            p.flux_frac = f;
            p.omega01_ghz = values[1] - values[0];
            if (with_omega12) {
                p.omega12_ghz = values[2] - values[1];
            }
            if (std::find(checked.begin(), checked.end(), i) != checked.end()) {
                auto finer = detail::raw_eigenvalues(device, f, cutoff + 2);
                double delta = std::abs(p.omega01_ghz - (finer[1] - finer[0]));
                if (delta > kConvergenceLimitGhz) {
                    throw SolverError(
                        "charge basis not converged: omega01 changes by " + format_number(delta) + " GHz at N + 2");
                }
            }
            if (!(p.omega01_ghz > 0.0)) {
                throw SolverError("non-positive transition frequency");
            }
            curve.points.push_back(p);
        } catch (const SolverError &e) {
            throw SolverError(std::string(e.what()) + " [flux " + format_number(f) + "]");
        }
    }
    return curve;
}

}  // namespace cqed

#endif  // CQED_FLUX_QUBIT_HPP
