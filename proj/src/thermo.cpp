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

#include "oqtherm/thermo.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <limits>

namespace oqtherm {

namespace {

const Complex kI(0.0, 1.0);

double simpson(const std::function<double(double)>& f, double a, double b, double fa, double fm,
               double fb, double whole, double tol, int depth) {
    double m = 0.5 * (a + b);
    double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    double flm = f(lm), frm = f(rm);
    double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

double integrate(const std::function<double(double)>& f, double a, double b, double rel_tol) {
    if (b == a) return 0.0;
    double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    double tol = rel_tol * std::max(std::abs(whole), 1e-300);
    return simpson(f, a, b, fa, fm, fb, whole, tol, 48);
}

double contraction_real(const Vector& row, const Vector& col, int dim, const char* what) {
    Complex v = (row.transpose() * col)(0) / static_cast<double>(dim);
    double tol = 1e-10 * (row.norm() * col.norm() / dim) + 1e-12;
    if (std::abs(v.imag()) > tol)
        throw std::runtime_error(std::string(what) + ": non-negligible imaginary part");
    return v.real();
}

// Components Tr(sigma_n log rho); throws near a pure state.
Vector log_state_components(const CoherenceVector& rho, double pure_tol) {
    Matrix r = devectorize(rho);
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (r + r.adjoint()));
    if (es.eigenvalues().minCoeff() < pure_tol)
        throw std::domain_error("entropy_rate: state is (near-)pure, log diverges");
    Eigen::VectorXd logs = es.eigenvalues().array().log();
    Matrix log_rho = es.eigenvectors() * logs.asDiagonal() * es.eigenvectors().adjoint();
    const auto& basis = *rho.basis;
    Vector comps(basis.size());
    for (int k = 0; k < basis.size(); ++k) comps(k) = (basis.element(k) * log_rho).trace();
    return comps;
}

Vector hdot_components(const LindbladModel& model, BasisPtr basis, double t) {
    if (model.constant_hamiltonian) return Vector::Zero(basis->size());
    double step = std::max(1e-12, 1e-6 * (model.t_end - model.t_begin));
    Vector hp = vectorize_hamiltonian(model.hamiltonian(t + step), basis).comps;
    Vector hm = vectorize_hamiltonian(model.hamiltonian(t - step), basis).comps;
    return (hp - hm) / (2.0 * step);
}

}  // namespace

double heat_rate(const HamiltonianVector& h, const Superoperator& l, const CoherenceVector& rho) {
    if (h.basis != rho.basis || l.basis != rho.basis)
        throw std::invalid_argument("heat_rate: basis mismatch");
    Vector lrho = l.mat * rho.comps;
    return contraction_real(h.comps, lrho, rho.basis->dim(), "heat_rate");
}

double work_rate(const HamiltonianVector& hdot, const CoherenceVector& rho) {
    if (hdot.basis != rho.basis) throw std::invalid_argument("work_rate: basis mismatch");
    return contraction_real(hdot.comps, rho.comps, rho.basis->dim(), "work_rate");
}

double adiabatic_heat_rate(const LindbladModel& model, const AdiabaticPhaseTrack& track,
                           const Vector& coeffs, int k, const PhysicalConstants& pc) {
    const auto& frame = track.frames[k];
    BasisPtr basis = OperatorBasis::for_dim(model.dim);
    Vector h = vectorize_hamiltonian(model.hamiltonian(track.times[k]), basis).comps;
    Matrix l = assemble_liouvillian(model, track.times[k], basis, pc).mat;
    Complex acc = 0.0;
    for (int a = 0; a < coeffs.size(); ++a) {
        Complex amp = coeffs(a) * std::exp(track.cumulative(a, k));
        acc += amp * (h.transpose() * (l * frame.right.col(a)))(0);
    }
    return (acc / static_cast<double>(model.dim)).real();
}

double adiabatic_work_rate(const LindbladModel& model, const AdiabaticPhaseTrack& track,
                           const Vector& coeffs, int k, const PhysicalConstants&) {
    const auto& frame = track.frames[k];
    BasisPtr basis = OperatorBasis::for_dim(model.dim);
    Vector hdot = hdot_components(model, basis, track.times[k]);
    Complex acc = 0.0;
    for (int a = 0; a < coeffs.size(); ++a) {
        Complex amp = coeffs(a) * std::exp(track.cumulative(a, k));
        acc += amp * (hdot.transpose() * frame.right.col(a))(0);
    }
    return (acc / static_cast<double>(model.dim)).real();
}

double adiabatic_entropy_rate(const AdiabaticPhaseTrack& track, const Vector& coeffs, int k,
                              BasisPtr basis) {
    const auto& frame = track.frames[k];
    Vector amps = (coeffs.array() * track.cumulative.col(k).array().exp()).matrix();
    CoherenceVector rho{basis, frame.right * amps};
    Vector rho_log = log_state_components(rho, 1e-12);
    Complex acc = 0.0;
    for (int a = 0; a < coeffs.size(); ++a)
        acc += amps(a) * frame.eigenvalues(a) * (rho_log.transpose() * frame.right.col(a))(0);
    return -(acc / static_cast<double>(basis->dim())).real();
}

double total_heat_closed_form(double hbar_omega_peV, double beta_per_peV,
                              const std::function<double(double)>& gamma, double tau_dec) {
    if (tau_dec == 0.0) return 0.0;
    double gamma_int = integrate(gamma, 0.0, tau_dec, 1e-13);
    return hbar_omega_peV * std::tanh(beta_per_peV * hbar_omega_peV) *
           (1.0 - std::exp(-2.0 * gamma_int));
}

double effective_inverse_temperature(double hbar_omega_peV, double beta_per_peV,
                                     const std::function<double(double)>& gamma, double t) {
    double gamma_int = integrate(gamma, 0.0, t, 1e-13);
    double g = std::exp(-2.0 * gamma_int) * std::tanh(beta_per_peV * hbar_omega_peV);
    return std::atanh(g) / hbar_omega_peV;
}

double average_power(double hbar_omega_peV, double beta_per_peV, double gamma_bar,
                     double tau_dec) {
    if (tau_dec <= 0.0) throw std::invalid_argument("average_power: tau_dec must be positive");
    double dq_max = std::abs(hbar_omega_peV * std::tanh(beta_per_peV * hbar_omega_peV));
    return dq_max * (1.0 - std::exp(-2.0 * gamma_bar * tau_dec)) / tau_dec;
}

double entropy(const CoherenceVector& rho) {
    Matrix r = devectorize(rho);
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (r + r.adjoint()), Eigen::EigenvaluesOnly);
    double s = 0.0;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
        double p = es.eigenvalues()(i);
        if (p > 0.0) s -= p * std::log(p);
    }
    return s;
}

double entropy_rate(const Superoperator& l, const CoherenceVector& rho) {
    if (l.basis != rho.basis) throw std::invalid_argument("entropy_rate: basis mismatch");
    Vector rho_log = log_state_components(rho, 1e-12);
    Vector lrho = l.mat * rho.comps;
    return -contraction_real(rho_log, lrho, rho.basis->dim(), "entropy_rate");
}

Matrix rotation_x(double theta) {
    Matrix sx(2, 2);
    sx << 0, 1, 1, 0;
    return std::cos(0.5 * theta) * Matrix::Identity(2, 2) - kI * std::sin(0.5 * theta) * sx;
}

Matrix rotation_z(double theta) {
    Matrix sz(2, 2);
    sz << -1, 0, 0, 1;
    return std::cos(0.5 * theta) * Matrix::Identity(2, 2) - kI * std::sin(0.5 * theta) * sz;
}

Matrix theorem1_unitary() { return rotation_x(M_PI / 2) * rotation_z(M_PI / 2); }

LindbladModel conjugate_model(const LindbladModel& model, const Matrix& u) {
    const int d = model.dim;
    if (u.rows() != d || u.cols() != d)
        throw std::invalid_argument("conjugate_model: unitary dimension mismatch");
    if ((u.adjoint() * u - Matrix::Identity(d, d)).cwiseAbs().maxCoeff() > 1e-12)
        throw std::invalid_argument("conjugate_model: matrix is not unitary");

    LindbladModel out = model;
    Matrix uc = u;
    auto h = model.hamiltonian;
    out.hamiltonian = [uc, h](double t) { return Matrix(uc * h(t) * uc.adjoint()); };
    out.dissipators.clear();
    for (const auto& dsp : model.dissipators) {
        DissipatorSpec nd = dsp;
        auto jump = dsp.jump;
        nd.jump = [uc, jump](double t) { return Matrix(uc * jump(t) * uc.adjoint()); };
        out.dissipators.push_back(std::move(nd));
    }
    return out;
}

ThermoLedger make_ledger(const LindbladModel& model, const Trajectory& traj,
                         const PhysicalConstants& pc) {
    const BasisPtr& basis = traj.basis;
    const int nt = static_cast<int>(traj.times.size());
    const int d = basis->dim();
    LiouvillianEvaluator eval(model, basis, pc);

    ThermoLedger ledger;
    ledger.times = traj.times;
    ledger.internal_energy.resize(nt);
    ledger.heat_cum.resize(nt);
    ledger.work_cum.resize(nt);
    ledger.entropy.resize(nt);
    ledger.beta_deph.resize(nt);
    ledger.heat_rate.resize(nt);
    ledger.work_rate.resize(nt);
    ledger.entropy_rate.resize(nt);

    for (int k = 0; k < nt; ++k) {
        double t = traj.times[k];
        CoherenceVector rho = traj.state(k);
        Matrix h_op = model.hamiltonian(t);
        HamiltonianVector h = vectorize_hamiltonian(h_op, basis);
        Superoperator l{basis, eval.at(t)};

        ledger.internal_energy(k) =
            contraction_real(h.comps, rho.comps, d, "internal_energy");
        ledger.heat_rate(k) = heat_rate(h, l, rho);
        HamiltonianVector hdot{basis, hdot_components(model, basis, t)};
        ledger.work_rate(k) = work_rate(hdot, rho);
        ledger.entropy(k) = entropy(rho);
        try {
            ledger.entropy_rate(k) = entropy_rate(l, rho);
        } catch (const std::domain_error&) {
            ledger.entropy_rate(k) = std::numeric_limits<double>::quiet_NaN();
        }

        // Effective inverse temperature from the state itself: project the
        // Bloch part onto the traceless Hamiltonian axis.
        Matrix ht = h_op - (h_op.trace() / static_cast<double>(d)) * Matrix::Identity(d, d);
        Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (ht + ht.adjoint()),
                                                 Eigen::EigenvaluesOnly);
        double omega_eff = es.eigenvalues().cwiseAbs().maxCoeff();
        if (omega_eff > 0.0) {
            double r = -((devectorize(rho) * ht).trace().real()) / omega_eff;
            r = std::clamp(r, -(1.0 - 1e-16), 1.0 - 1e-16);
            ledger.beta_deph(k) = std::atanh(r) / omega_eff;
        } else {
            ledger.beta_deph(k) = std::numeric_limits<double>::quiet_NaN();
        }
    }

    if (traj.heat_cum && traj.work_cum) {
        ledger.heat_cum = *traj.heat_cum;
        ledger.work_cum = *traj.work_cum;
    } else {
        ledger.heat_cum(0) = 0.0;
        ledger.work_cum(0) = 0.0;
        for (int k = 1; k < nt; ++k) {
            double dt = traj.times[k] - traj.times[k - 1];
            ledger.heat_cum(k) =
                ledger.heat_cum(k - 1) + 0.5 * dt * (ledger.heat_rate(k) + ledger.heat_rate(k - 1));
            ledger.work_cum(k) =
                ledger.work_cum(k - 1) + 0.5 * dt * (ledger.work_rate(k) + ledger.work_rate(k - 1));
        }
    }

    double span = traj.times.back() - traj.times.front();
    ledger.average_power = (span > 0.0) ? std::abs(ledger.heat_cum(nt - 1)) / span : 0.0;
    return ledger;
}

double entropy_heat_relation_check(const ThermoLedger& ledger) {
    double worst = 0.0;
    for (int k = 0; k < static_cast<int>(ledger.times.size()); ++k) {
        if (!std::isfinite(ledger.entropy_rate(k)) || !std::isfinite(ledger.beta_deph(k)))
            continue;
        worst = std::max(worst,
                         std::abs(ledger.entropy_rate(k) - ledger.beta_deph(k) * ledger.heat_rate(k)));
    }
    return worst;
}

double first_law_residual(const ThermoLedger& ledger) {
    double worst = 0.0;
    for (int k = 0; k < static_cast<int>(ledger.times.size()); ++k) {
        double du = ledger.internal_energy(k) - ledger.internal_energy(0);
        worst = std::max(worst, std::abs(du - (ledger.heat_cum(k) + ledger.work_cum(k))));
    }
    return worst;
}

}  // namespace oqtherm
