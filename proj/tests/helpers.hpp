// Copyright 2026 The oqtherm Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <random>
#include <vector>

#include "oqtherm/dynamics.hpp"
#include "oqtherm/models.hpp"
#include "oqtherm/spectral.hpp"
#include "oqtherm/superop.hpp"

namespace oqtherm::testing {

inline std::vector<double> linspace(double a, double b, int n) {
    std::vector<double> out(n);
    for (int i = 0; i < n; ++i) out[i] = a + (b - a) * i / (n - 1);
    return out;
}

inline Matrix random_hermitian(std::mt19937_64& rng, int dim, double scale) {
    std::normal_distribution<double> n(0.0, 1.0);
    Matrix g(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) g(i, j) = Complex(n(rng), n(rng));
    return scale * 0.5 * (g + g.adjoint());
}

inline Matrix random_complex(std::mt19937_64& rng, int dim, double scale) {
    std::normal_distribution<double> n(0.0, 1.0);
    Matrix g(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) g(i, j) = Complex(n(rng), n(rng));
    return scale * g;
}

inline Matrix random_unitary(std::mt19937_64& rng, int dim = 2) {
    Matrix g = random_complex(rng, dim, 1.0);
    Eigen::HouseholderQR<Matrix> qr(g);
    Matrix q = qr.householderQ();
    Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int i = 0; i < dim; ++i) q.col(i) *= r(i, i) / std::abs(r(i, i));
    return q;
}

inline Matrix random_density(std::mt19937_64& rng, int dim = 2) {
    Matrix g = random_complex(rng, dim, 1.0);
    Matrix rho = g * g.adjoint();
    rho /= rho.trace();
    return rho;
}

/// Random constant-coefficient qubit Lindblad model on [0, tau] with energies
/// of order `energy_peV` and a single random jump channel.
inline LindbladModel random_model(std::mt19937_64& rng, double tau = 3e-3,
                                  double energy_peV = 80.0) {
    std::uniform_real_distribution<double> rate(100.0, 2000.0);
    const Matrix h = random_hermitian(rng, 2, energy_peV);
    Matrix jump = random_complex(rng, 2, 1.0);
    jump *= std::sqrt(2.0) / jump.norm();
    const double g0 = rate(rng);
    LindbladModel model;
    model.dim = 2;
    model.hamiltonian = [h](double) { return h; };
    model.constant_hamiltonian = true;
    model.t_begin = 0.0;
    model.t_end = tau;
    model.dissipators.push_back({[jump](double) { return jump; }, [g0](double) { return g0; }, true});
    return model;
}

/// Dephasing-qubit model H = hw sx, jump sz, arbitrary gamma(t).
inline LindbladModel dephasing_model(double hbar_omega_peV, std::function<double(double)> gamma,
                                     double tau) {
    Matrix sx(2, 2), sz(2, 2);
    sx << 0, 1, 1, 0;
    sz << -1, 0, 0, 1;
    LindbladModel model;
    model.dim = 2;
    const Matrix h = hbar_omega_peV * sx;
    model.hamiltonian = [h](double) { return h; };
    model.constant_hamiltonian = true;
    model.t_begin = 0.0;
    model.t_end = tau;
    model.dissipators.push_back(
        {[sz](double) { return sz; }, std::move(gamma), true});
    return model;
}

/// Adiabatic final state assembled step by step through the public
/// decompose/track interface, with an arbitrary diagonal gauge injected at the
/// initial frame. Used to verify gauge covariance of the evolved state.
inline Vector chained_adiabatic_state(const LindbladModel& model, const std::vector<double>& grid,
                                      const Vector& rho0, const Vector& gauge0,
                                      const PhysicalConstants& pc = kDefaultConstants) {
    const BasisPtr basis = OperatorBasis::for_dim(model.dim);
    const int n = basis->size();
    const int T = static_cast<int>(grid.size());

    std::vector<SpectralDecomposition> frames;
    frames.reserve(T);
    for (int k = 0; k < T; ++k) {
        SpectralDecomposition dec = decompose(assemble_liouvillian(model, grid[k], basis, pc));
        if (k == 0) {
            for (int a = 0; a < n; ++a) {
                dec.right.col(a) *= gauge0[a];
                dec.left.row(a) /= gauge0[a];
            }
        } else {
            track(frames.back(), dec);
        }
        frames.push_back(std::move(dec));
    }

    // lambda_tilde by central differences of the tracked right frames.
    Matrix lt(n, T);
    for (int k = 0; k < T; ++k) {
        const int lo = std::max(k - 1, 0);
        const int hi = std::min(k + 1, T - 1);
        const double dt = grid[hi] - grid[lo];
        const Matrix ddot = (frames[hi].right - frames[lo].right) / dt;
        for (int a = 0; a < n; ++a)
            lt(a, k) = frames[k].eigenvalues[a] - (frames[k].left.row(a) * ddot.col(a))(0, 0);
    }
    Vector cum = Vector::Zero(n);
    for (int k = 1; k < T; ++k)
        cum += 0.5 * (grid[k] - grid[k - 1]) * (lt.col(k) + lt.col(k - 1));

    const Vector coeffs = frames.front().left * rho0;
    return frames.back().right * coeffs.cwiseProduct(cum.array().exp().matrix());
}

}  // namespace oqtherm::testing
