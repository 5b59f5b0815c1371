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

#include <optional>
#include <vector>

#include "oqtherm/spectral.hpp"
#include "oqtherm/superop.hpp"

namespace oqtherm {

struct Trajectory {
    enum class Method { kExact, kAdiabatic };
    BasisPtr basis;
    std::vector<double> times;
    Matrix states;  // D^2 x T, column per sample
    Method method = Method::kExact;
    // Cumulative heat/work in peV, integrated by the stepper alongside the
    // state (exact propagation only).
    std::optional<Eigen::VectorXd> heat_cum;
    std::optional<Eigen::VectorXd> work_cum;

    CoherenceVector state(int k) const { return {basis, states.col(k)}; }
};

struct IntegratorOptions {
    double rel_tol = 1e-10;
    double abs_tol = 1e-13;
    double positivity_tol = 1e-8;    // eigenvalue floor treated as roundoff
    double positivity_abort = 1e-6;  // beyond this the run aborts
    bool check_positivity = true;
    bool integrate_thermo = true;    // carry dQ/dW quadratures along
};

/// Integrates |rho(t)>> with an adaptive Dormand-Prince 5(4) pair, landing
/// exactly on each grid sample.
Trajectory propagate_exact(const LindbladModel& model, const CoherenceVector& rho0,
                           const std::vector<double>& grid, const IntegratorOptions& opts = {},
                           const PhysicalConstants& pc = kDefaultConstants);

/// Closed-form adiabatic propagation: |rho(t)>> = sum_a c_a
/// exp(int lambda_tilde_a) |D_a(t)>>, c_a = <<E_a(0)|rho0>>.
Trajectory propagate_adiabatic(const LindbladModel& model, const CoherenceVector& rho0,
                               const std::vector<double>& grid,
                               const PhysicalConstants& pc = kDefaultConstants,
                               const DecomposeOptions& dopts = {}, const TrackOptions& topts = {});

/// Same, reusing a precomputed phase track (grids must match).
Trajectory propagate_adiabatic(const AdiabaticPhaseTrack& track, BasisPtr basis,
                               const CoherenceVector& rho0);

/// Uhlmann fidelity Tr sqrt(sqrt(a) b sqrt(a)) of the devectorized states.
double fidelity(const CoherenceVector& a, const CoherenceVector& b, double psd_tol = 1e-6);

double min_fidelity(const Trajectory& a, const Trajectory& b);

struct AdiabaticityRow {
    double gamma0 = 0.0;
    double f_min = 1.0;
};

/// Table-style report: per gamma0, the minimum exact-vs-adiabatic fidelity
/// over a sweep of total evolution times.
std::vector<AdiabaticityRow> adiabaticity_report(
    const std::function<LindbladModel(double gamma0, double tau)>& family,
    const std::function<CoherenceVector(const LindbladModel&)>& initial_state,
    const std::vector<double>& gamma0_values, const std::vector<double>& tau_values,
    int samples_per_run, const PhysicalConstants& pc = kDefaultConstants);

}  // namespace oqtherm
