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

#include <vector>

#include "oqtherm/superop.hpp"

namespace oqtherm {

/// Raised when the eigenvector matrix of L(t) is too ill-conditioned to trust,
/// i.e. L is defective or nearly so (nontrivial Jordan block).
struct DefectiveLiouvillian : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Instantaneous bi-orthonormal eigensystem of L(t): left.row(a) * right.col(b)
/// = delta_ab, L * right.col(a) = eigenvalues(a) * right.col(a).
struct SpectralDecomposition {
    double t = 0.0;
    Vector eigenvalues;       // rad/s
    Matrix right;             // columns |D_a>>
    Matrix left;              // rows <<E_a|
    double biorth_residual = 0.0;
    double condition = 1.0;   // eigenvector-matrix condition number
    bool degenerate = false;  // repeated (but diagonalizable) eigenvalues
};

struct DecomposeOptions {
    double defect_condition_threshold = 1e8;
    double degeneracy_tol_rel = 1e-6;  // relative to max |eigenvalue|
};

SpectralDecomposition decompose(const Superoperator& l, const DecomposeOptions& opts = {});

struct TrackResult {
    std::vector<int> permutation;  // next column j came from original position permutation[j]
    Vector gauge;                  // scalar phase applied to each (non-degenerate) right vector
};

struct TrackOptions {
    double ambiguity_tol = 1e-6;
    double degeneracy_tol_rel = 1e-6;
};

/// Reorders and re-gauges `next` for continuity with `prev`: eigenpairs are
/// matched by left/right overlap, non-degenerate right vectors get a phase
/// making <<E_a(t)|D_a(t+dt)>> real positive, and exactly degenerate groups
/// are re-mixed so the previous duals see an identity block (parallel
/// transport within the subspace).
TrackResult track(const SpectralDecomposition& prev, SpectralDecomposition& next,
                  const TrackOptions& opts = {});

/// Sampled generalized adiabatic phases lambda_tilde_a(t) =
/// lambda_a(t) - <<E_a(t)|d/dt D_a(t)>> and their running trapezoid integral.
struct AdiabaticPhaseTrack {
    std::vector<double> times;
    Matrix lambda_tilde;  // N x T
    Matrix cumulative;    // N x T, integral from times.front()
    std::vector<SpectralDecomposition> frames;
};

AdiabaticPhaseTrack adiabatic_phases(const LindbladModel& model, BasisPtr basis,
                                     const std::vector<double>& grid,
                                     const PhysicalConstants& pc = kDefaultConstants,
                                     const DecomposeOptions& dopts = {},
                                     const TrackOptions& topts = {});

}  // namespace oqtherm
