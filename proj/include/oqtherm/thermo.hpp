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

#include "oqtherm/dynamics.hpp"
#include "oqtherm/spectral.hpp"
#include "oqtherm/superop.hpp"

namespace oqtherm {

// Sign convention: dQ > 0 means energy flows into the system.

/// dQ/dt = (1/D) <<h| L |rho>>, peV/s. The imaginary part must vanish for
/// Hermitian-consistent inputs and is checked.
double heat_rate(const HamiltonianVector& h, const Superoperator& l, const CoherenceVector& rho);

/// dW/dt = (1/D) <<hdot|rho>>, peV/s.
double work_rate(const HamiltonianVector& hdot, const CoherenceVector& rho);

/// Heat rate of the adiabatically evolved state at grid index k, evaluated
/// through the eigenvector expansion (sum over one-dimensional blocks).
double adiabatic_heat_rate(const LindbladModel& model, const AdiabaticPhaseTrack& track,
                           const Vector& coeffs, int k,
                           const PhysicalConstants& pc = kDefaultConstants);

double adiabatic_work_rate(const LindbladModel& model, const AdiabaticPhaseTrack& track,
                           const Vector& coeffs, int k,
                           const PhysicalConstants& pc = kDefaultConstants);

/// Entropy rate of the adiabatically evolved state through the eigenvector
/// expansion (trivial Jordan chains).
double adiabatic_entropy_rate(const AdiabaticPhaseTrack& track, const Vector& coeffs, int k,
                              BasisPtr basis);

/// Total heat of the dephased qubit: hbar*omega*tanh(beta*hbar*omega) *
/// (1 - exp(-2*gamma_bar*tau)), gamma_bar the time average of gamma.
double total_heat_closed_form(double hbar_omega_peV, double beta_per_peV,
                              const std::function<double(double)>& gamma, double tau_dec);

/// beta_deph(t) = (1/hbar*omega) arctanh(exp(-2 int gamma) tanh(beta*hbar*omega)).
double effective_inverse_temperature(double hbar_omega_peV, double beta_per_peV,
                                     const std::function<double(double)>& gamma, double t);

/// Average heat-exchange power |dQmax| (1 - exp(-2*gamma_bar*tau)) / tau.
double average_power(double hbar_omega_peV, double beta_per_peV, double gamma_bar,
                     double tau_dec);

/// Von Neumann entropy in nats (0 log 0 = 0).
double entropy(const CoherenceVector& rho);

/// dS/dt = -(1/D) <<rho_log| L |rho>>. Refuses within 1e-12 of a pure state.
double entropy_rate(const Superoperator& l, const CoherenceVector& rho);

/// Unitary conjugation of a model: H' = U H U^dag, Gamma' = U Gamma U^dag,
/// identical rates. Heat exchange is invariant for constant H.
LindbladModel conjugate_model(const LindbladModel& model, const Matrix& u);

Matrix rotation_x(double theta);
Matrix rotation_z(double theta);
/// The R_x(pi/2) R_z(pi/2) unitary mapping the computational-basis dephasing
/// channel onto its conjugate-family partner.
Matrix theorem1_unitary();

struct ThermoLedger {
    std::vector<double> times;
    Eigen::VectorXd internal_energy;  // peV
    Eigen::VectorXd heat_cum;         // peV
    Eigen::VectorXd work_cum;         // peV
    Eigen::VectorXd entropy;          // nats
    Eigen::VectorXd beta_deph;        // 1/peV
    Eigen::VectorXd heat_rate;        // peV/s
    Eigen::VectorXd work_rate;        // peV/s
    Eigen::VectorXd entropy_rate;     // nats/s (NaN where rho is near pure)
    double average_power = 0.0;       // peV/s over the full span
};

ThermoLedger make_ledger(const LindbladModel& model, const Trajectory& traj,
                         const PhysicalConstants& pc = kDefaultConstants);

/// max_t |dS/dt - beta_deph dQ/dt| over samples with finite entropy rate.
double entropy_heat_relation_check(const ThermoLedger& ledger);

/// Worst first-law residual |dU - (Q + W)| over the ledger, peV.
double first_law_residual(const ThermoLedger& ledger);

}  // namespace oqtherm
