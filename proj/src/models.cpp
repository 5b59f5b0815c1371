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

#include "oqtherm/models.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "oqtherm/thermo.hpp"

namespace oqtherm {

namespace {

Matrix sigma_x() {
    Matrix m(2, 2);
    m << 0, 1, 1, 0;
    return m;
}

Matrix sigma_z() {
    Matrix m(2, 2);
    m << -1, 0, 0, 1;
    return m;
}

}  // namespace

std::function<double(double)> PresetParams::gamma() const {
    const double g0 = gamma0_Hz;
    if (gamma_profile == GammaProfile::kConstant) {
        return [g0](double) { return g0; };
    }
    const double tau = tau_dec_s;
    return [g0, tau](double t) { return g0 * (1.0 + t / tau); };
}

double PresetParams::gamma_bar() const {
    return gamma_profile == GammaProfile::kConstant ? gamma0_Hz : 1.5 * gamma0_Hz;
}

CoherenceVector thermal_state(const Matrix& h, double beta_per_peV, BasisPtr basis) {
    check_hermitian(h, 1e-12 * (1.0 + h.norm()), Strictness::kStrict, "thermal_state H");
    Eigen::SelfAdjointEigenSolver<Matrix> es(h);
    Eigen::VectorXd w = (-beta_per_peV * es.eigenvalues()).array().exp();
    w /= w.sum();
    Matrix rho = es.eigenvectors() * w.asDiagonal() * es.eigenvectors().adjoint();
    return vectorize(rho, std::move(basis));
}

Preset preset(const std::string& name, const PresetParams& params) {
    const BasisPtr basis = OperatorBasis::pauli();
    const double hw = params.hbar_omega_peV;
    const double tau = params.tau_dec_s;

    if (name == "dephasing_qubit" || name == "linear_gamma" || name == "closed_unitary" ||
        name == "bitflip_conjugate") {
        PresetParams p = params;
        if (name == "linear_gamma") p.gamma_profile = PresetParams::GammaProfile::kLinearRamp;
        const Matrix h = hw * sigma_x();
        LindbladModel model;
        model.dim = 2;
        model.hamiltonian = [h](double) { return h; };
        model.constant_hamiltonian = true;
        model.t_begin = 0.0;
        model.t_end = tau;
        if (name != "closed_unitary") {
            DissipatorSpec d;
            const Matrix jump = sigma_z();
            d.jump = [jump](double) { return jump; };
            d.rate = p.gamma();
            d.constant_jump = true;
            model.dissipators.push_back(std::move(d));
        }
        CoherenceVector rho0 = thermal_state(h, p.beta_per_peV(), basis);
        if (name == "bitflip_conjugate") {
            const Matrix u = theorem1_unitary();
            model = conjugate_model(model, u);
            rho0 = vectorize(u * devectorize(rho0) * u.adjoint(), basis);
        }
        return {std::move(model), std::move(rho0), p};
    }

    if (name == "energy_eigenbasis_dephasing") {
        // H(t) = hbar*omega [cos(pi t / 2 tau) sz + sin(pi t / 2 tau) sx];
        // the jump operator dephases in the instantaneous eigenbasis, so the
        // populations (and hence U) are frozen and Q vanishes identically.
        const Matrix sx = sigma_x();
        const Matrix sz = sigma_z();
        auto angle = [tau](double t) { return 0.5 * std::numbers::pi * t / tau; };
        LindbladModel model;
        model.dim = 2;
        model.hamiltonian = [hw, sx, sz, angle](double t) -> Matrix {
            const double th = angle(t);
            return hw * (std::cos(th) * sz + std::sin(th) * sx);
        };
        model.t_begin = 0.0;
        model.t_end = tau;
        DissipatorSpec d;
        d.jump = [sx, sz, angle](double t) -> Matrix {
            const double th = angle(t);
            return std::cos(th) * sz + std::sin(th) * sx;
        };
        d.rate = params.gamma();
        model.dissipators.push_back(std::move(d));
        CoherenceVector rho0 = thermal_state(hw * sz, params.beta_per_peV(), basis);
        return {std::move(model), std::move(rho0), params};
    }

    throw std::invalid_argument("unknown preset: " + name);
}

std::vector<std::string> preset_names() {
    return {"dephasing_qubit", "linear_gamma", "energy_eigenbasis_dephasing", "bitflip_conjugate",
            "closed_unitary"};
}

}  // namespace oqtherm
