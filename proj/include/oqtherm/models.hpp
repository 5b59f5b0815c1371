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

#include <string>

#include "oqtherm/superop.hpp"

namespace oqtherm {

/// Parameters shared by the named presets. Defaults describe a trapped-ion
/// qubit working point: hbar*omega = 82.662 peV, 1/beta = 17.238 peV.
struct PresetParams {
    double hbar_omega_peV = 82.662;
    double beta_inv_peV = 17.238;
    double gamma0_Hz = 314.0;
    double tau_dec_s = 3e-3;
    enum class GammaProfile { kConstant, kLinearRamp } gamma_profile = GammaProfile::kLinearRamp;
    PhysicalConstants constants{};

    double beta_per_peV() const { return 1.0 / beta_inv_peV; }
    double omega_rad_s() const { return hbar_omega_peV / constants.hbar_peV_s(); }
    std::function<double(double)> gamma() const;
    double gamma_bar() const;  // time average over [0, tau_dec]
};

struct Preset {
    LindbladModel model;
    CoherenceVector rho0;
    PresetParams params;
};

/// Thermal state of `h` (peV) at inverse temperature beta (1/peV).
CoherenceVector thermal_state(const Matrix& h, double beta_per_peV, BasisPtr basis);

/// Named systems:
///   dephasing_qubit           H = hbar*omega*sx, sigma_z dephasing, thermal rho0
///   linear_gamma              dephasing_qubit with gamma(t) = gamma0 (1 + t/tau)
///   energy_eigenbasis_dephasing  slow sz -> sx ramp, dephasing in the
///                                instantaneous energy eigenbasis (zero heat)
///   bitflip_conjugate         dephasing_qubit conjugated by Rx(pi/2)Rz(pi/2)
///   closed_unitary            gamma = 0
Preset preset(const std::string& name, const PresetParams& params = {});

std::vector<std::string> preset_names();

}  // namespace oqtherm
