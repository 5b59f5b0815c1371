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
#include <random>

#include "oqtherm/superop.hpp"

namespace oqtherm {

/// Channel coefficient matrix chi over {1, sx, sy, sz}:
/// eps(rho) = sum_mn chi_mn A_m rho A_n^dag.
struct ProcessMatrix {
    Matrix chi;  // 4 x 4, Hermitian, PSD, trace-preservation constraint
};

struct CalibrationFit {
    double slope = 0.0;        // sqrt(Hz) per volt
    double intercept = 0.0;    // sqrt(Hz)
    double gamma_nd_Hz = 0.0;  // intercept^2, natural dephasing rate
    Eigen::VectorXd residuals;
    std::vector<std::pair<double, double>> samples;  // (amplitude V, gamma0 Hz)

    double gamma0_at(double amplitude_V) const {
        const double s = slope * amplitude_V + intercept;
        return s * s;
    }
};

struct RabiFit {
    double gamma_Hz = 0.0;      // envelope decay rate
    double omega_rad_s = 0.0;   // fitted oscillation angular frequency
    double amplitude = 0.0;
    double offset = 0.0;
    double rms_residual = 0.0;
    int iterations = 0;
};

using Channel = std::function<CoherenceVector(const CoherenceVector&)>;

/// rho from Pauli expectations (<sx>, <sy>, <sz>). With `shots`, binomial
/// sampling noise is applied per axis and the Bloch vector truncated to the
/// unit ball; without, a Bloch norm above 1 + 1e-6 is rejected.
CoherenceVector reconstruct_state(const Eigen::Vector3d& expectations,
                                  std::optional<long> shots = std::nullopt,
                                  std::mt19937_64* rng = nullptr);

struct TomographyOptions {
    std::optional<long> shots;  // per measurement axis, per probe
    unsigned seed = 0;
    double linearity_tol = 1e-8;  // probe-superposition consistency (noiseless)
};

/// chi by linear inversion over the probes {|0>, |1>, |+>, |+i>}. With shot
/// noise on, the result is projected back onto the PSD cone.
ProcessMatrix process_tomography(const Channel& channel, const TomographyOptions& opts = {});

/// eps(rho) reconstructed from chi; round-trip partner of process_tomography.
CoherenceVector apply_process(const ProcessMatrix& chi, const CoherenceVector& rho);

/// [Tr sqrt(sqrt(chi_exp) chi_id sqrt(chi_exp))]^2.
double process_fidelity(const ProcessMatrix& chi_exp, const ProcessMatrix& chi_id,
                        double psd_tol = 1e-6);

/// Levenberg-Marquardt fit of P1(t) = offset - amplitude e^{-Gamma t} cos(Omega t).
/// Needs >= 20 samples spanning a nonflat trace.
RabiFit fit_rabi_decay(const std::vector<double>& times, const std::vector<double>& p1);

/// Least squares of sqrt(gamma0) against drive amplitude.
CalibrationFit fit_calibration_line(const std::vector<std::pair<double, double>>& samples);

}  // namespace oqtherm
