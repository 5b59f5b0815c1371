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

#include <filesystem>
#include <json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "oqtherm/models.hpp"

namespace oqtherm {

/// Parsed scenario file. A scenario names a preset or spells out an inline
/// model (constant Pauli-coefficient Hamiltonian plus dissipators), the grid,
/// and an optional sweep over gamma0.
struct ScenarioConfig {
    std::string preset = "dephasing_qubit";
    std::optional<nlohmann::json> inline_model;
    PresetParams params;
    int grid_samples = 201;
    std::vector<double> sweep_gamma0;
    std::vector<double> sweep_tau;  // tau_dec values scanned per sweep point
    unsigned seed = 0;
};

/// Throws std::invalid_argument on schema violations.
ScenarioConfig parse_config(const nlohmann::json& j);
ScenarioConfig load_config(const std::filesystem::path& file);

/// Resolves the configured model (preset or inline) plus its initial state.
Preset resolve_model(const ScenarioConfig& config);

/// Exact + adiabatic run; writes ledger.csv with the columns
/// t_s,U_peV,Q_peV,W_peV,S_nats,beta_deph_inv_peV,fidelity_exact_vs_adiabatic.
std::filesystem::path run_scenario(const ScenarioConfig& config,
                                   const std::filesystem::path& out_dir);

/// Per-gamma0 summary (delta Q at tau, minimum exact-vs-adiabatic fidelity
/// over the tau sweep, average power); writes sweep.csv.
std::filesystem::path run_sweep(const ScenarioConfig& config,
                                const std::filesystem::path& out_dir);

/// Heat-exchange invariance report for the Rx(pi/2)Rz(pi/2) preset pair, the
/// identity, and seeded random (model, U) pairs; writes theorem1.csv.
std::filesystem::path run_theorem1(const ScenarioConfig& config,
                                   const std::filesystem::path& out_dir, int random_pairs = 50);

/// Process tomography of the dephasing channel at successive evolution times,
/// noiseless and shot-noised; writes tomography.csv.
std::filesystem::path run_tomography(const ScenarioConfig& config,
                                     const std::filesystem::path& out_dir, long shots = 100000);

/// Synthetic Rabi-decay calibration sweep; writes calibration.csv (per-point
/// fits) and calibration_fit.csv (line parameters).
std::filesystem::path run_calibrate(const ScenarioConfig& config,
                                    const std::filesystem::path& out_dir);

/// Fixed-format numeric cell: classic locale, shortest round-trip form.
std::string csv_number(double v);

}  // namespace oqtherm
