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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "oqtherm/superop.hpp"

using namespace oqtherm;
namespace t = oqtherm::testing;

namespace {
const double kHw = 82.662;         // peV
const double kBetaHw = 4.7954;     // beta * hbar * omega
const Complex kI(0.0, 1.0);

Matrix op_lindblad(const Matrix& h, const std::vector<Matrix>& jumps,
                   const std::vector<double>& rates, const Matrix& rho,
                   const PhysicalConstants& pc = kDefaultConstants) {
    Matrix out = (h * rho - rho * h) / (kI * pc.hbar_peV_s());
    for (size_t n = 0; n < jumps.size(); ++n) {
        const Matrix& g = jumps[n];
        out += rates[n] * (g * rho * g.adjoint() -
                           0.5 * (g.adjoint() * g * rho + rho * g.adjoint() * g));
    }
    return out;
}
}  // namespace

TEST_CASE("pauli basis is trace-orthogonal with identity first") {
    const BasisPtr b = OperatorBasis::pauli();
    REQUIRE(b->dim() == 2);
    REQUIRE(b->size() == 4);
    CHECK((b->element(0) - Matrix::Identity(2, 2)).norm() == doctest::Approx(0.0));
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            const Complex tr = (b->element(i).adjoint() * b->element(j)).trace();
            CHECK(std::abs(tr - (i == j ? 2.0 : 0.0)) < 1e-14);
        }
    // sz convention |1><1| - |0><0|
    CHECK(b->element(3)(0, 0).real() == doctest::Approx(-1.0));
    CHECK(b->element(3)(1, 1).real() == doctest::Approx(1.0));
}

TEST_CASE("higher-dimensional bases stay trace-orthogonal") {
    for (int d : {3, 4}) {
        const BasisPtr b = OperatorBasis::for_dim(d);
        REQUIRE(b->size() == d * d);
        for (int i = 0; i < b->size(); ++i)
            for (int j = 0; j < b->size(); ++j) {
                const Complex tr = (b->element(i).adjoint() * b->element(j)).trace();
                CHECK(std::abs(tr - (i == j ? double(d) : 0.0)) < 1e-12);
            }
    }
}

TEST_CASE("vectorize known states") {
    const BasisPtr b = OperatorBasis::pauli();
    Matrix ground = Matrix::Zero(2, 2);
    ground(0, 0) = 1.0;  // |0><0|
    const CoherenceVector v0 = vectorize(ground, b);
    CHECK(std::abs(v0.comps[0] - 1.0) < 1e-14);
    CHECK(std::abs(v0.comps[1]) < 1e-14);
    CHECK(std::abs(v0.comps[2]) < 1e-14);
    CHECK(std::abs(v0.comps[3] + 1.0) < 1e-14);

    const CoherenceVector vm = vectorize(0.5 * Matrix::Identity(2, 2), b);
    CHECK(vm.comps.tail(3).norm() < 1e-14);
    CHECK(std::abs(vm.comps[0] - 1.0) < 1e-14);

    Matrix sx(2, 2);
    sx << 0, 1, 1, 0;
    const double g = std::tanh(kBetaHw);
    const CoherenceVector vth = vectorize(0.5 * (Matrix::Identity(2, 2) + g * sx), b);
    CHECK(vth.comps[1].real() == doctest::Approx(0.99986).epsilon(1e-4));
    CHECK(std::abs(vth.comps[2]) < 1e-14);
    CHECK(std::abs(vth.comps[3]) < 1e-14);
}

TEST_CASE("devectorize known vectors and random round trip") {
    const BasisPtr b = OperatorBasis::pauli();
    CoherenceVector mixed{b, Vector(4)};
    mixed.comps << 1, 0, 0, 0;
    CHECK((devectorize(mixed) - 0.5 * Matrix::Identity(2, 2)).norm() < 1e-14);

    CoherenceVector plus{b, Vector(4)};
    plus.comps << 1, 1, 0, 0;
    Matrix proj_plus(2, 2);
    proj_plus << 0.5, 0.5, 0.5, 0.5;
    CHECK((devectorize(plus) - proj_plus).norm() < 1e-14);

    std::mt19937_64 rng(7);
    for (int i = 0; i < 100; ++i) {
        const Matrix rho = t::random_density(rng);
        const CoherenceVector v = vectorize(rho, b);
        CHECK((devectorize(v) - rho).norm() < 1e-12);
        for (int k = 0; k < 4; ++k) CHECK(std::abs(v.comps[k].imag()) < 1e-12);
    }
}

TEST_CASE("hamiltonian round trip") {
    const BasisPtr b = OperatorBasis::pauli();
    std::mt19937_64 rng(11);
    for (int i = 0; i < 20; ++i) {
        const Matrix h = t::random_hermitian(rng, 2, 50.0);
        const HamiltonianVector v = vectorize_hamiltonian(h, b);
        CHECK((devectorize_hamiltonian(v) - h).norm() < 1e-12 * h.norm());
    }
}

TEST_CASE("hs_inner normalization and trace consistency") {
    const BasisPtr b = OperatorBasis::pauli();
    Matrix sx(2, 2);
    sx << 0, 1, 1, 0;
    const HamiltonianVector x = vectorize_hamiltonian(sx, b);
    CHECK(std::abs(hs_inner(x.comps, x.comps, *b) - 1.0) < 1e-14);

    std::mt19937_64 rng(3);
    const HamiltonianVector one = vectorize_hamiltonian(Matrix::Identity(2, 2), b);
    for (int i = 0; i < 20; ++i) {
        const Matrix rho = t::random_density(rng);
        const CoherenceVector v = vectorize(rho, b);
        CHECK(std::abs(hs_inner(one, v) - 0.5) < 1e-13);  // Tr(rho)/D

        const Matrix h = t::random_hermitian(rng, 2, 30.0);
        const HamiltonianVector hv = vectorize_hamiltonian(h, b);
        const Complex direct = (h * rho).trace() / 2.0;  // (1/D) Tr(H rho)
        CHECK(std::abs(hs_inner(hv, v) - direct) < 1e-12 * (1.0 + std::abs(direct)));
    }
}

TEST_CASE("hamiltonian superoperator blocks") {
    const BasisPtr b = OperatorBasis::pauli();
    const PhysicalConstants pc = kDefaultConstants;
    const double omega = kHw / pc.hbar_peV_s();

    Matrix sx(2, 2), sz(2, 2);
    sx << 0, 1, 1, 0;
    sz << -1, 0, 0, 1;

    SUBCASE("H = hw sx couples (y,z) with -+2w") {
        const Superoperator s = hamiltonian_superop(kHw * sx, b, pc);
        Matrix expect = Matrix::Zero(4, 4);
        expect(2, 3) = -2.0 * omega;
        expect(3, 2) = 2.0 * omega;
        CHECK((s.mat - expect).norm() < 1e-9 * omega);
    }
    SUBCASE("H = 0 gives zero") {
        CHECK(hamiltonian_superop(Matrix::Zero(2, 2), b, pc).mat.norm() == doctest::Approx(0.0));
    }
    SUBCASE("H = hw sz couples (x,y), against commutator oracle") {
        const Matrix h = kHw * sz;
        const Superoperator s = hamiltonian_superop(h, b, pc);
        CHECK(std::abs(s.mat(1, 2)) > omega);  // (x,y) block populated
        CHECK(std::abs(s.mat(1, 3)) < 1e-9 * omega);
        for (int k = 0; k < 4; ++k)
            for (int i = 0; i < 4; ++i) {
                const Matrix comm = (h * b->element(i) - b->element(i) * h) / (kI * pc.hbar_peV_s());
                const Complex oracle = (b->element(k).adjoint() * comm).trace() / 2.0;
                CHECK(std::abs(s.mat(k, i) - oracle) < 1e-9 * omega);
            }
    }
}

TEST_CASE("dissipator superoperator diagonals") {
    const BasisPtr b = OperatorBasis::pauli();
    Matrix sx(2, 2), sz(2, 2);
    sx << 0, 1, 1, 0;
    sz << -1, 0, 0, 1;
    const double gamma = 731.0;

    Eigen::Vector4d dz(0, -2 * gamma, -2 * gamma, 0);
    const Superoperator rz = dissipator_superop({gamma}, {sz}, b);
    CHECK((rz.mat - dz.cast<Complex>().asDiagonal().toDenseMatrix()).norm() < 1e-10 * gamma);

    CHECK(dissipator_superop({0.0}, {sz}, b).mat.norm() == doctest::Approx(0.0));

    Eigen::Vector4d dx(0, 0, -2 * gamma, -2 * gamma);
    const Superoperator rx = dissipator_superop({gamma}, {sx}, b);
    CHECK((rx.mat - dx.cast<Complex>().asDiagonal().toDenseMatrix()).norm() < 1e-10 * gamma);

    CHECK_THROWS_AS(dissipator_superop({-1.0}, {sz}, b), std::invalid_argument);
}

TEST_CASE("assembled Liouvillian reproduces the dephasing supermatrix") {
    const BasisPtr b = OperatorBasis::pauli();
    const PhysicalConstants pc = kDefaultConstants;
    const double omega = kHw / pc.hbar_peV_s();
    const double gamma = 314.0;

    const LindbladModel model = t::dephasing_model(kHw, [gamma](double) { return gamma; }, 3e-3);
    const Superoperator l = assemble_liouvillian(model, 1e-3, b, pc);
    Matrix expect = Matrix::Zero(4, 4);
    expect(1, 1) = -2 * gamma;
    expect(2, 2) = -2 * gamma;
    expect(2, 3) = -2 * omega;
    expect(3, 2) = 2 * omega;
    expect(3, 3) = 0;
    CHECK((l.mat - expect).norm() < 1e-9 * omega);

    LindbladModel trivial;
    trivial.dim = 2;
    trivial.hamiltonian = [](double) { return Matrix::Zero(2, 2); };
    trivial.t_end = 1.0;
    CHECK(assemble_liouvillian(trivial, 0.5, b, pc).mat.norm() == doctest::Approx(0.0));

    CHECK_THROWS(assemble_liouvillian(model, 1.0, b, pc));  // t outside span
}

TEST_CASE("superoperator-operator consistency on 100 random draws") {
    const BasisPtr b = OperatorBasis::pauli();
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> rate(0.0, 5000.0);
    for (int i = 0; i < 100; ++i) {
        const Matrix h = t::random_hermitian(rng, 2, 80.0);
        const Matrix jump = t::random_complex(rng, 2, 1.0);
        const double g = rate(rng);
        LindbladModel model;
        model.dim = 2;
        model.hamiltonian = [h](double) { return h; };
        model.constant_hamiltonian = true;
        model.t_end = 1.0;
        model.dissipators.push_back({[jump](double) { return jump; }, [g](double) { return g; }, true});

        const Superoperator l = assemble_liouvillian(model, 0.0, b);
        CHECK(l.mat.row(0).norm() < 1e-12 * (1.0 + l.mat.norm()));  // trace preservation

        const Matrix rho = t::random_density(rng);
        const CoherenceVector v = vectorize(rho, b);
        const Matrix lhs = devectorize({b, l.mat * v.comps});
        const Matrix rhs = op_lindblad(h, {jump}, {g}, rho);
        CHECK((lhs - rhs).norm() < 1e-10 * (1.0 + rhs.norm()));
        CHECK((lhs - lhs.adjoint()).norm() < 1e-9 * (1.0 + lhs.norm()));  // Hermiticity
    }
}

TEST_CASE("LiouvillianEvaluator matches direct assembly") {
    const BasisPtr b = OperatorBasis::pauli();
    const LindbladModel model =
        t::dephasing_model(kHw, [](double tt) { return 314.0 * (1.0 + tt / 3e-3); }, 3e-3);
    LiouvillianEvaluator eval(model, b);
    for (double tt : {0.0, 1e-3, 2.5e-3}) {
        const Superoperator direct = assemble_liouvillian(model, tt, b);
        CHECK((eval.at(tt) - direct.mat).norm() < 1e-12 * direct.mat.norm());
    }
}

TEST_CASE("strictness flag governs non-Hermitian input") {
    const BasisPtr b = OperatorBasis::pauli();
    Matrix bad(2, 2);
    bad << 0, 1, 0, 0;
    CHECK_THROWS_AS(hamiltonian_superop(bad, b, kDefaultConstants, Strictness::kStrict),
                    std::invalid_argument);
    CHECK_NOTHROW(hamiltonian_superop(bad, b, kDefaultConstants, Strictness::kWarn));
}
