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

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "helpers.hpp"
#include "oqtherm/spectral.hpp"

using namespace oqtherm;
namespace t = oqtherm::testing;

namespace {
const double kHw = 82.662;  // peV

Superoperator dephasing_liouvillian(double gamma, double hbar_omega = kHw, double time = 0.0) {
    const BasisPtr b = OperatorBasis::pauli();
    const LindbladModel model =
        t::dephasing_model(hbar_omega, [gamma](double) { return gamma; }, 1.0);
    return assemble_liouvillian(model, time, b);
}
}  // namespace

TEST_CASE("dephasing spectrum {0, -2g, -g +- i sqrt(4w^2 - g^2)}") {
    const double gamma = 314.0;
    const double omega = kHw / kDefaultConstants.hbar_peV_s();
    const SpectralDecomposition dec = decompose(dephasing_liouvillian(gamma));

    std::vector<Complex> expect = {
        {0.0, 0.0},
        {-2 * gamma, 0.0},
        {-gamma, std::sqrt(4 * omega * omega - gamma * gamma)},
        {-gamma, -std::sqrt(4 * omega * omega - gamma * gamma)}};
    for (const Complex& e : expect) {
        double best = 1e300;
        for (int a = 0; a < 4; ++a) best = std::min(best, std::abs(dec.eigenvalues[a] - e));
        CHECK(best < 1e-6 * omega);
    }

    // |1>> in the kernel, |x>> at -2 gamma.
    const Superoperator l = dephasing_liouvillian(gamma);
    Vector one = Vector::Zero(4), x = Vector::Zero(4);
    one[0] = 1.0;
    x[1] = 1.0;
    CHECK((l.mat * one).norm() < 1e-9 * omega);
    CHECK((l.mat * x + 2 * gamma * x).norm() < 1e-9 * omega);
}

TEST_CASE("zero Liouvillian is degenerate but not defective") {
    const BasisPtr b = OperatorBasis::pauli();
    const Superoperator zero{b, Matrix::Zero(4, 4)};
    const SpectralDecomposition dec = decompose(zero);
    CHECK(dec.degenerate);
    CHECK(dec.eigenvalues.norm() == doctest::Approx(0.0));
    CHECK(dec.biorth_residual < 1e-12);
}

TEST_CASE("nontrivial Jordan block is refused") {
    const BasisPtr b = OperatorBasis::pauli();
    Matrix m = Matrix::Zero(4, 4);
    m(1, 2) = 1.0;  // nilpotent: eigenvalue 0 with a 2-chain
    CHECK_THROWS_AS(decompose({b, m}), DefectiveLiouvillian);
}

TEST_CASE("bi-orthonormality and reconstruction on 100 random models") {
    const BasisPtr b = OperatorBasis::pauli();
    std::mt19937_64 rng(41);
    for (int i = 0; i < 100; ++i) {
        const LindbladModel model = t::random_model(rng);
        const Superoperator l = assemble_liouvillian(model, 0.0, b);
        const SpectralDecomposition dec = decompose(l);
        CHECK(dec.biorth_residual < 1e-10);
        Matrix rebuilt = Matrix::Zero(4, 4);
        for (int a = 0; a < 4; ++a)
            rebuilt += dec.eigenvalues[a] * dec.right.col(a) * dec.left.row(a);
        CHECK((rebuilt - l.mat).norm() < 1e-9 * l.mat.norm());
    }
}

TEST_CASE("track: static Liouvillian gives identity permutation, unit gauge") {
    const SpectralDecomposition prev = decompose(dephasing_liouvillian(500.0));
    SpectralDecomposition next = decompose(dephasing_liouvillian(500.0));
    const TrackResult r = track(prev, next);
    for (int a = 0; a < 4; ++a) {
        CHECK(r.permutation[a] == a);
        CHECK(std::abs(r.gauge[a] - 1.0) < 1e-9);
    }
}

TEST_CASE("track: ramped gamma keeps the -2 gamma branch continuous") {
    const double tau = 3e-3;
    auto gamma = [tau](double tt) { return 314.0 * (1.0 + tt / tau); };
    SpectralDecomposition prev = decompose(dephasing_liouvillian(gamma(0.0)));
    for (int k = 1; k <= 30; ++k) {
        const double tt = tau * k / 30;
        SpectralDecomposition next = decompose(dephasing_liouvillian(gamma(tt)));
        track(prev, next);
        // after tracking, position alpha keeps its physical identity
        bool found = false;
        for (int a = 0; a < 4; ++a)
            if (std::abs(next.eigenvalues[a] + 2 * gamma(tt)) < 1e-6 * gamma(tt)) found = true;
        CHECK(found);
        prev = std::move(next);
    }
}

TEST_CASE("track: engineered eigenvalue crossing is resolved by overlap") {
    const BasisPtr b = OperatorBasis::pauli();
    // Fixed eigenvectors (unit axes), eigenvalues swap order between frames.
    const auto diag_superop = [&](double a1, double a2) {
        Matrix m = Matrix::Zero(4, 4);
        m(1, 1) = a1;
        m(2, 2) = a2;
        m(3, 3) = -9.0;
        return Superoperator{b, m};
    };
    const SpectralDecomposition prev = decompose(diag_superop(-1.0, -2.0));
    SpectralDecomposition next = decompose(diag_superop(-2.05, -1.95));
    const TrackResult r = track(prev, next);
    CHECK(r.permutation != std::vector<int>({0, 1, 2, 3}));
    // position 1 still carries the e1 eigenvector after tracking
    Vector e1 = Vector::Zero(4);
    e1[1] = 1.0;
    CHECK(std::abs(next.right.col(1).dot(e1)) > 0.99);
    CHECK(next.eigenvalues[1].real() == doctest::Approx(-2.05));
}

TEST_CASE("track: ambiguous non-degenerate match advises a finer grid") {
    const BasisPtr b = OperatorBasis::pauli();
    // Next frame's eigenvectors are 45-degree mixtures of the previous ones at
    // well-separated eigenvalues: both overlaps tie.
    Matrix m1 = Matrix::Zero(4, 4);
    m1(1, 1) = -1.0;
    m1(2, 2) = -2.0;
    m1(3, 3) = -3.0;
    Matrix v = Matrix::Identity(4, 4);
    const double s = std::numbers::sqrt2 / 2;
    v(1, 1) = s;
    v(1, 2) = -s;
    v(2, 1) = s;
    v(2, 2) = s;
    Matrix m2 = v * m1 * v.inverse();
    const SpectralDecomposition prev = decompose({b, m1});
    SpectralDecomposition next = decompose({b, m2});
    CHECK_THROWS_WITH_AS(track(prev, next), doctest::Contains("finer time grid"),
                         std::runtime_error);
}

TEST_CASE("adiabatic_phases: dephasing qubit has lambda_tilde_x = -2 gamma(t)") {
    const BasisPtr b = OperatorBasis::pauli();
    const double tau = 3e-3;
    auto gamma = [tau](double tt) { return 314.0 * (1.0 + tt / tau); };
    const LindbladModel model = t::dephasing_model(kHw, gamma, tau);
    const auto grid = t::linspace(0.0, tau, 61);
    const AdiabaticPhaseTrack track = adiabatic_phases(model, b, grid);

    // locate the branch starting at -2 gamma(0)
    int ax = -1;
    for (int a = 0; a < 4; ++a)
        if (std::abs(track.frames[0].eigenvalues[a] + 2 * gamma(0.0)) < 1.0) ax = a;
    REQUIRE(ax >= 0);
    for (int k = 0; k < 61; ++k)
        CHECK(std::abs(track.lambda_tilde(ax, k) + 2 * gamma(grid[k])) < 1e-6 * gamma(grid[k]));
    // kernel branch: lambda_tilde = 0
    int a0 = -1;
    for (int a = 0; a < 4; ++a)
        if (std::abs(track.frames[0].eigenvalues[a]) < 1.0) a0 = a;
    REQUIRE(a0 >= 0);
    for (int k = 0; k < 61; ++k) CHECK(std::abs(track.lambda_tilde(a0, k)) < 1e-6);
}

TEST_CASE("adiabatic_phases: constant Liouvillian integrates to lambda t") {
    const BasisPtr b = OperatorBasis::pauli();
    const LindbladModel model = t::dephasing_model(kHw, [](double) { return 628.0; }, 2e-3);
    const auto grid = t::linspace(0.0, 2e-3, 41);
    const AdiabaticPhaseTrack track = adiabatic_phases(model, b, grid);
    for (int a = 0; a < 4; ++a) {
        const Complex expect = track.frames[0].eigenvalues[a] * 2e-3;
        CHECK(std::abs(track.cumulative(a, 40) - expect) < 1e-8 * (1.0 + std::abs(expect)));
    }
}

TEST_CASE("adiabatic_phases: rotated dephasing basis converges under refinement") {
    // Gamma(t) = U(t) sz U(t)^dag with a slow sz -> sx rotation: the geometric
    // term is nonzero; the integral must converge as the grid is refined.
    const BasisPtr b = OperatorBasis::pauli();
    const double tau = 3e-3;
    Matrix sx(2, 2), sz(2, 2);
    sx << 0, 1, 1, 0;
    sz << -1, 0, 0, 1;
    LindbladModel model;
    model.dim = 2;
    const Matrix h = kHw * sx;
    model.hamiltonian = [h](double) { return h; };
    model.constant_hamiltonian = true;
    model.t_end = tau;
    model.dissipators.push_back(
        {[sx, sz, tau](double tt) -> Matrix {
             const double th = 0.25 * std::numbers::pi * tt / tau;
             return std::cos(th) * sz + std::sin(th) * sx;
         },
         [](double) { return 450.0; }, false});

    Vector coarse(4), fine(4), finest(4);
    for (auto [n, out] : {std::pair<int, Vector*>{101, &coarse}, {201, &fine}, {401, &finest}}) {
        const AdiabaticPhaseTrack tr = adiabatic_phases(model, b, t::linspace(0.0, tau, n));
        *out = tr.cumulative.col(n - 1);
        // pair branches across grids by the (well-separated) imaginary parts
        std::sort(out->begin(), out->end(),
                  [](Complex a, Complex c) { return a.imag() != c.imag() ? a.imag() < c.imag()
                                                                         : a.real() < c.real(); });
    }
    const double err_coarse = (coarse - finest).norm();
    const double err_fine = (fine - finest).norm();
    CHECK(err_fine < 0.3 * err_coarse);  // ~O(h^2) trapezoid + FD
    CHECK(err_fine < 1e-4);
}
