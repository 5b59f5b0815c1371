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

#include <CLI11.hpp>
#include <cstdio>
#include <string>

#include "oqtherm/scenario.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

struct CommonArgs {
    std::string config_file;
    std::string out_dir = "out";
    unsigned seed = 0;
    bool seed_set = false;
    int grid = 0;
};

void add_common(CLI::App* cmd, CommonArgs* args, bool config_required) {
    auto* c = cmd->add_option("-c,--config", args->config_file, "scenario JSON file");
    if (config_required) c->required();
    cmd->add_option("--out", args->out_dir, "output directory");
    cmd->add_option("--seed", args->seed, "RNG seed for stochastic features")
        ->each([args](const std::string&) { args->seed_set = true; });
    cmd->add_option("--grid", args->grid, "time-grid sample count override");
}

oqtherm::ScenarioConfig resolve(const CommonArgs& args) {
    oqtherm::ScenarioConfig config;
    if (!args.config_file.empty()) config = oqtherm::load_config(args.config_file);
    if (args.seed_set) config.seed = args.seed;
    if (args.grid > 0) {
        if (args.grid < 2) throw std::invalid_argument("config: --grid must be >= 2");
        config.grid_samples = args.grid;
    }
    return config;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Lindblad thermodynamics scenario runner"};
    app.require_subcommand(1);

    CommonArgs sim_args, sweep_args, thm_args, tomo_args, cal_args;
    long shots = 100000;

    auto* simulate = app.add_subcommand("simulate", "exact + adiabatic run, ledger CSV");
    add_common(simulate, &sim_args, true);
    auto* sweep = app.add_subcommand("sweep", "gamma0 sweep summary table");
    add_common(sweep, &sweep_args, true);
    auto* theorem1 = app.add_subcommand("theorem1", "heat-invariance report under conjugation");
    add_common(theorem1, &thm_args, false);
    auto* tomography = app.add_subcommand("tomography", "process-tomography fidelity table");
    add_common(tomography, &tomo_args, false);
    tomography->add_option("--shots", shots, "shots per measurement axis")->check(CLI::PositiveNumber);
    auto* calibrate = app.add_subcommand("calibrate", "Rabi-decay calibration sweep");
    add_common(calibrate, &cal_args, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    try {
        std::filesystem::path written;
        if (simulate->parsed()) written = oqtherm::run_scenario(resolve(sim_args), sim_args.out_dir);
        else if (sweep->parsed()) written = oqtherm::run_sweep(resolve(sweep_args), sweep_args.out_dir);
        else if (theorem1->parsed()) written = oqtherm::run_theorem1(resolve(thm_args), thm_args.out_dir);
        else if (tomography->parsed())
            written = oqtherm::run_tomography(resolve(tomo_args), tomo_args.out_dir, shots);
        else written = oqtherm::run_calibrate(resolve(cal_args), cal_args.out_dir);
        std::printf("wrote %s\n", written.string().c_str());
        return 0;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitConfig;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitNumerical;
    }
}
