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

#include "oqtherm/scenario.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <random>

#include "oqtherm/dynamics.hpp"
#include "oqtherm/thermo.hpp"
#include "oqtherm/tomography.hpp"

namespace oqtherm {

namespace {

using nlohmann::json;

std::vector<double> linspace(double a, double b, int n) {
    std::vector<double> out(n);
    for (int i = 0; i < n; ++i) out[i] = a + (b - a) * i / (n - 1);
    return out;
}

double require_positive(const json& j, const char* key, double fallback) {
    if (!j.contains(key)) return fallback;
    const double v = j.at(key).get<double>();
    if (!std::isfinite(v) || v <= 0.0)
        throw std::invalid_argument(std::string("config: ") + key + " must be finite and positive");
    return v;
}

std::function<double(double)> parse_gamma_spec(const json& j, double tau_dec) {
    const std::string type = j.at("type").get<std::string>();
    if (type == "constant") {
        const double g0 = j.at("gamma0_Hz").get<double>();
        if (g0 < 0) throw std::invalid_argument("config: gamma0_Hz must be >= 0");
        return [g0](double) { return g0; };
    }
    if (type == "linear_ramp") {
        const double g0 = j.at("gamma0_Hz").get<double>();
        const double tau = j.value("tau_s", tau_dec);
        if (g0 < 0 || tau <= 0)
            throw std::invalid_argument("config: linear_ramp needs gamma0_Hz >= 0, tau_s > 0");
        return [g0, tau](double t) { return g0 * (1.0 + t / tau); };
    }
    if (type == "table") {
        auto ts = j.at("t_s").get<std::vector<double>>();
        auto gs = j.at("gamma_Hz").get<std::vector<double>>();
        if (ts.size() != gs.size() || ts.size() < 2)
            throw std::invalid_argument("config: gamma table needs matching t_s/gamma_Hz, >= 2 rows");
        for (size_t i = 1; i < ts.size(); ++i)
            if (ts[i] <= ts[i - 1]) throw std::invalid_argument("config: gamma table t_s not increasing");
        return [ts = std::move(ts), gs = std::move(gs)](double t) {
            if (t <= ts.front()) return gs.front();
            if (t >= ts.back()) return gs.back();
            const auto it = std::upper_bound(ts.begin(), ts.end(), t);
            const size_t i = static_cast<size_t>(it - ts.begin());
            const double w = (t - ts[i - 1]) / (ts[i] - ts[i - 1]);
            return gs[i - 1] + w * (gs[i] - gs[i - 1]);
        };
    }
    throw std::invalid_argument("config: unknown gamma type '" + type + "'");
}

Matrix pauli_combination(const std::vector<double>& c, BasisPtr basis) {
    if (c.size() != 4) throw std::invalid_argument("config: Pauli coefficient lists have 4 entries");
    Matrix m = Matrix::Zero(2, 2);
    for (int k = 0; k < 4; ++k) m += c[k] * basis->element(k);
    return m;
}

Preset build_inline(const ScenarioConfig& config) {
    const json& spec = *config.inline_model;
    const BasisPtr basis = OperatorBasis::pauli();
    const Matrix h =
        pauli_combination(spec.at("hamiltonian").get<std::vector<double>>(), basis);
    LindbladModel model;
    model.dim = 2;
    model.hamiltonian = [h](double) { return h; };
    model.constant_hamiltonian = true;
    model.t_begin = 0.0;
    model.t_end = config.params.tau_dec_s;
    if (spec.contains("dissipators")) {
        for (const auto& dj : spec.at("dissipators")) {
            DissipatorSpec d;
            const Matrix jump = pauli_combination(dj.at("jump").get<std::vector<double>>(), basis);
            d.jump = [jump](double) { return jump; };
            d.constant_jump = true;
            d.rate = parse_gamma_spec(dj.at("gamma"), config.params.tau_dec_s);
            model.dissipators.push_back(std::move(d));
        }
    }
    CoherenceVector rho0;
    if (spec.contains("rho0")) {
        auto c = spec.at("rho0").get<std::vector<double>>();
        if (c.size() != 4 || std::abs(c[0] - 1.0) > 1e-12)
            throw std::invalid_argument("config: rho0 must be [1, nx, ny, nz]");
        rho0 = {basis, Vector(4)};
        for (int k = 0; k < 4; ++k) rho0.comps[k] = c[k];
        if (rho0.comps.tail(3).norm() > 1.0 + 1e-9)
            throw std::invalid_argument("config: rho0 Bloch vector outside the unit ball");
    } else {
        rho0 = thermal_state(h, config.params.beta_per_peV(), basis);
    }
    return {std::move(model), std::move(rho0), config.params};
}

std::ofstream open_csv(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);  // binary: no platform newline mangling
    if (!out) throw std::runtime_error("cli: cannot open output file " + path.string());
    return out;
}

double trajectory_delta_q(const Trajectory& traj) {
    if (!traj.heat_cum) throw std::runtime_error("cli: trajectory carries no heat quadrature");
    return (*traj.heat_cum)(traj.heat_cum->size() - 1);
}

Matrix random_unitary(std::mt19937_64& rng) {
    std::normal_distribution<double> n(0.0, 1.0);
    Matrix g(2, 2);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) g(i, j) = Complex(n(rng), n(rng));
    Eigen::HouseholderQR<Matrix> qr(g);
    Matrix q = qr.householderQ();
    Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int i = 0; i < 2; ++i) q.col(i) *= r(i, i) / std::abs(r(i, i));
    return q;
}

struct RandomCase {
    LindbladModel model;
    CoherenceVector rho0;
    Matrix unitary;
};

RandomCase random_theorem1_case(std::mt19937_64& rng, const PresetParams& params) {
    const BasisPtr basis = OperatorBasis::pauli();
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::uniform_real_distribution<double> rate(200.0, 2000.0);
    std::normal_distribution<double> n(0.0, 1.0);

    Matrix h = Matrix::Zero(2, 2);
    for (int k = 1; k < 4; ++k) h += params.hbar_omega_peV * u(rng) * basis->element(k);
    Matrix jump(2, 2);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) jump(i, j) = Complex(n(rng), n(rng));
    jump *= std::numbers::sqrt2 / jump.norm();
    const double g0 = rate(rng);

    LindbladModel model;
    model.dim = 2;
    model.hamiltonian = [h](double) { return h; };
    model.constant_hamiltonian = true;
    model.t_begin = 0.0;
    model.t_end = params.tau_dec_s;
    DissipatorSpec d;
    d.jump = [jump](double) { return jump; };
    d.constant_jump = true;
    d.rate = [g0](double) { return g0; };
    model.dissipators.push_back(std::move(d));

    Eigen::Vector3d e;
    for (int k = 0; k < 3; ++k) e[k] = u(rng);
    if (e.norm() > 1e-12) e *= 0.9 * std::abs(u(rng)) / e.norm();
    CoherenceVector rho0{basis, Vector(4)};
    rho0.comps << 1.0, e[0], e[1], e[2];
    return {std::move(model), std::move(rho0), random_unitary(rng)};
}

}  // namespace

std::string csv_number(double v) {
    char buf[40];
    if (std::isnan(v)) return "nan";
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

ScenarioConfig parse_config(const json& j) {
    ScenarioConfig config;
    if (j.contains("preset")) config.preset = j.at("preset").get<std::string>();
    if (j.contains("model")) config.inline_model = j.at("model");

    if (j.contains("constants")) {
        const json& c = j.at("constants");
        config.params.constants.hbar_eV_s =
            require_positive(c, "hbar_eV_s", config.params.constants.hbar_eV_s);
        config.params.constants.kB_eV_per_K =
            require_positive(c, "kB_eV_per_K", config.params.constants.kB_eV_per_K);
    }
    if (j.contains("params")) {
        const json& p = j.at("params");
        config.params.hbar_omega_peV =
            require_positive(p, "hbar_omega_peV", config.params.hbar_omega_peV);
        config.params.beta_inv_peV = require_positive(p, "beta_inv_peV", config.params.beta_inv_peV);
        config.params.tau_dec_s = require_positive(p, "tau_dec_s", config.params.tau_dec_s);
        if (p.contains("gamma0_Hz")) {
            const double g0 = p.at("gamma0_Hz").get<double>();
            if (!std::isfinite(g0) || g0 < 0.0)
                throw std::invalid_argument("config: gamma0_Hz must be finite and >= 0");
            config.params.gamma0_Hz = g0;
        }
        if (p.contains("gamma_profile")) {
            const std::string prof = p.at("gamma_profile").get<std::string>();
            if (prof == "constant")
                config.params.gamma_profile = PresetParams::GammaProfile::kConstant;
            else if (prof == "linear_ramp")
                config.params.gamma_profile = PresetParams::GammaProfile::kLinearRamp;
            else
                throw std::invalid_argument("config: unknown gamma_profile '" + prof + "'");
        }
    }
    if (j.contains("grid")) {
        const json& g = j.at("grid");
        if (g.contains("tau_dec_s"))
            config.params.tau_dec_s = require_positive(g, "tau_dec_s", config.params.tau_dec_s);
        if (g.contains("samples")) {
            const int n = g.at("samples").get<int>();
            if (n < 2) throw std::invalid_argument("config: grid samples must be >= 2");
            config.grid_samples = n;
        }
    }
    if (j.contains("sweep")) {
        const json& s = j.at("sweep");
        if (s.contains("gamma0_values")) {
            config.sweep_gamma0 = s.at("gamma0_values").get<std::vector<double>>();
            for (double v : config.sweep_gamma0)
                if (!std::isfinite(v) || v < 0.0)
                    throw std::invalid_argument("config: sweep gamma0 values must be finite, >= 0");
        }
        if (s.contains("tau_values")) {
            config.sweep_tau = s.at("tau_values").get<std::vector<double>>();
            for (double v : config.sweep_tau)
                if (!std::isfinite(v) || v <= 0.0)
                    throw std::invalid_argument("config: sweep tau values must be finite, > 0");
        }
    }
    if (j.contains("seed")) config.seed = j.at("seed").get<unsigned>();
    return config;
}

ScenarioConfig load_config(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw std::invalid_argument("config: cannot read " + file.string());
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("config: parse error: ") + e.what());
    }
    try {
        return parse_config(j);
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("config: schema error: ") + e.what());
    }
}

Preset resolve_model(const ScenarioConfig& config) {
    if (config.inline_model) return build_inline(config);
    return preset(config.preset, config.params);
}

std::filesystem::path run_scenario(const ScenarioConfig& config,
                                   const std::filesystem::path& out_dir) {
    std::filesystem::create_directories(out_dir);
    Preset p = resolve_model(config);
    const auto grid = linspace(p.model.t_begin, p.model.t_end, config.grid_samples);

    const Trajectory exact = propagate_exact(p.model, p.rho0, grid, {}, p.params.constants);
    const Trajectory adiab = propagate_adiabatic(p.model, p.rho0, grid, p.params.constants);
    const ThermoLedger ledger = make_ledger(p.model, exact, p.params.constants);

    const double scale = std::max(1.0, ledger.internal_energy.cwiseAbs().maxCoeff());
    if (first_law_residual(ledger) > 1e-8 * scale)
        throw std::runtime_error("thermo: first-law residual above 1e-8 at emission");

    const auto path = out_dir / "ledger.csv";
    auto out = open_csv(path);
    out << "t_s,U_peV,Q_peV,W_peV,S_nats,beta_deph_inv_peV,fidelity_exact_vs_adiabatic\n";
    for (int k = 0; k < static_cast<int>(grid.size()); ++k) {
        out << csv_number(ledger.times[k]) << ',' << csv_number(ledger.internal_energy[k]) << ','
            << csv_number(ledger.heat_cum[k]) << ',' << csv_number(ledger.work_cum[k]) << ','
            << csv_number(ledger.entropy[k]) << ',' << csv_number(ledger.beta_deph[k]) << ','
            << csv_number(fidelity(exact.state(k), adiab.state(k))) << '\n';
    }
    return path;
}

std::filesystem::path run_sweep(const ScenarioConfig& config,
                                const std::filesystem::path& out_dir) {
    std::filesystem::create_directories(out_dir);
    const auto path = out_dir / "sweep.csv";
    auto out = open_csv(path);
    out << "gamma0_Hz,delta_Q_peV,f_min,avg_power_peV_per_s\n";

    std::vector<double> taus = config.sweep_tau;
    if (taus.empty()) taus = {config.params.tau_dec_s};

    for (double g0 : config.sweep_gamma0) {
        double f_min = 1.0;
        double delta_q = 0.0;
        double power = 0.0;
        for (double tau : taus) {
            ScenarioConfig point = config;
            point.params.gamma0_Hz = g0;
            point.params.tau_dec_s = tau;
            Preset p = resolve_model(point);
            const auto grid = linspace(p.model.t_begin, p.model.t_end, config.grid_samples);
            const Trajectory exact = propagate_exact(p.model, p.rho0, grid, {}, p.params.constants);
            const Trajectory adiab = propagate_adiabatic(p.model, p.rho0, grid, p.params.constants);
            f_min = std::min(f_min, min_fidelity(exact, adiab));
            if (tau == config.params.tau_dec_s || taus.size() == 1) {
                delta_q = trajectory_delta_q(exact);
                power = std::abs(delta_q) / tau;
            }
        }
        out << csv_number(g0) << ',' << csv_number(delta_q) << ',' << csv_number(f_min) << ','
            << csv_number(power) << '\n';
    }
    return path;
}

std::filesystem::path run_theorem1(const ScenarioConfig& config,
                                   const std::filesystem::path& out_dir, int random_pairs) {
    std::filesystem::create_directories(out_dir);
    const auto path = out_dir / "theorem1.csv";
    auto out = open_csv(path);
    out << "case,delta_Q_peV,delta_Q_conjugate_peV,abs_difference_peV\n";

    const auto grid_of = [&](const LindbladModel& m) {
        return linspace(m.t_begin, m.t_end, config.grid_samples);
    };
    const auto delta_q = [&](const LindbladModel& m, const CoherenceVector& rho0) {
        return trajectory_delta_q(
            propagate_exact(m, rho0, grid_of(m), {}, config.params.constants));
    };
    const auto emit = [&](const std::string& name, double q, double qc) {
        out << name << ',' << csv_number(q) << ',' << csv_number(qc) << ','
            << csv_number(std::abs(q - qc)) << '\n';
    };

    {
        Preset base = preset("dephasing_qubit", config.params);
        Preset conj = preset("bitflip_conjugate", config.params);
        emit("rx_rz_preset", delta_q(base.model, base.rho0), delta_q(conj.model, conj.rho0));
        emit("identity", delta_q(base.model, base.rho0), delta_q(base.model, base.rho0));
    }

    std::mt19937_64 rng(config.seed);
    for (int i = 0; i < random_pairs; ++i) {
        RandomCase rc = random_theorem1_case(rng, config.params);
        const LindbladModel conj = conjugate_model(rc.model, rc.unitary);
        const CoherenceVector rho0c = vectorize(
            rc.unitary * devectorize(rc.rho0) * rc.unitary.adjoint(), rc.rho0.basis);
        emit("random_" + std::to_string(i), delta_q(rc.model, rc.rho0), delta_q(conj, rho0c));
    }
    return path;
}

std::filesystem::path run_tomography(const ScenarioConfig& config,
                                     const std::filesystem::path& out_dir, long shots) {
    std::filesystem::create_directories(out_dir);
    const auto path = out_dir / "tomography.csv";
    auto out = open_csv(path);
    out << "t_ms,fidelity_noisy_vs_ideal,chi_offsupport_noiseless\n";

    // Dephasing channel at the calibration working point.
    const double omega = 2.0 * std::numbers::pi * 5000.0;  // rad/s
    const double gamma = 2500.0;                           // Hz
    const PhysicalConstants& pc = config.params.constants;
    const double hw = omega * pc.hbar_peV_s();

    LindbladModel model;
    model.dim = 2;
    Matrix sx(2, 2);
    sx << 0, 1, 1, 0;
    Matrix sz(2, 2);
    sz << -1, 0, 0, 1;
    const Matrix h = hw * sx;
    model.hamiltonian = [h](double) { return h; };
    model.constant_hamiltonian = true;
    model.dissipators.push_back(
        {[sz](double) { return sz; }, [gamma](double) { return gamma; }, true});

    // Interaction-frame certificate: the bare decoherence channel (drive off)
    // must come out supported on the {1, sz} diagonal only.
    LindbladModel bare = model;
    bare.hamiltonian = [](double) { return Matrix::Zero(2, 2); };

    std::mt19937_64 seed_stream(config.seed);
    for (double t_ms : {0.08, 0.16, 0.24, 0.32, 0.40}) {
        const double t = t_ms * 1e-3;
        const auto channel_of = [&pc, t](const LindbladModel& base) -> Channel {
            LindbladModel m = base;
            m.t_begin = 0.0;
            m.t_end = t;
            return [m, &pc](const CoherenceVector& rho) {
                IntegratorOptions opts;
                opts.integrate_thermo = false;
                return propagate_exact(m, rho, {0.0, m.t_end}, opts, pc).state(1);
            };
        };
        const Channel driven = channel_of(model);
        const ProcessMatrix ideal = process_tomography(driven);
        TomographyOptions noisy_opts;
        noisy_opts.shots = shots;
        noisy_opts.seed = static_cast<unsigned>(seed_stream());
        const ProcessMatrix noisy = process_tomography(driven, noisy_opts);

        const ProcessMatrix bare_chi = process_tomography(channel_of(bare));
        double off_support = 0.0;  // sigma_z-channel certificate
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j)
                if (!((i == j) && (i == 0 || i == 3)))
                    off_support = std::max(off_support, std::abs(bare_chi.chi(i, j)));

        out << csv_number(t_ms) << ',' << csv_number(process_fidelity(noisy, ideal)) << ','
            << csv_number(off_support) << '\n';
    }
    return path;
}

std::filesystem::path run_calibrate(const ScenarioConfig& config,
                                    const std::filesystem::path& out_dir) {
    std::filesystem::create_directories(out_dir);
    const PhysicalConstants& pc = config.params.constants;
    const BasisPtr basis = OperatorBasis::pauli();

    const std::vector<double> amplitudes = {0.4, 0.8, 1.2, 1.6, 2.0};
    const std::vector<double> rates = {182.0, 650.0, 1426.0, 2469.0, 3846.0};

    Matrix sx(2, 2);
    sx << 0, 1, 1, 0;
    Matrix sz(2, 2);
    sz << -1, 0, 0, 1;

    std::vector<std::pair<double, double>> fitted;
    const auto points_path = out_dir / "calibration.csv";
    auto points = open_csv(points_path);
    points << "amplitude_V,gamma_true_Hz,gamma_fit_Hz,rel_error\n";

    for (size_t i = 0; i < amplitudes.size(); ++i) {
        const double g0 = rates[i];
        // Drive fast relative to the decay so the trace shows many fringes
        // inside ~2.2 decay constants.
        const double omega = 25.0 * g0;  // rad/s; oscillation at ~2 omega
        const double t_max = 2.2 / g0;
        const int periods = static_cast<int>(t_max * omega / std::numbers::pi) + 1;
        const int n = std::min(std::max(12 * periods, 400), 20000);

        LindbladModel model;
        model.dim = 2;
        const Matrix h = omega * pc.hbar_peV_s() * sx;
        model.hamiltonian = [h](double) { return h; };
        model.constant_hamiltonian = true;
        model.t_begin = 0.0;
        model.t_end = t_max;
        model.dissipators.push_back(
            {[sz](double) { return sz; }, [g0](double) { return g0; }, true});

        CoherenceVector rho0{basis, Vector(4)};
        rho0.comps << 1, 0, 0, -1;  // |0><0|

        const auto grid = linspace(0.0, t_max, n);
        IntegratorOptions opts;
        opts.integrate_thermo = false;
        const Trajectory traj = propagate_exact(model, rho0, grid, opts, pc);

        std::vector<double> p1(n);
        for (int k = 0; k < n; ++k) p1[k] = 0.5 * (1.0 + traj.states(3, k).real());
        const RabiFit fit = fit_rabi_decay(grid, p1);

        fitted.emplace_back(amplitudes[i], fit.gamma_Hz);
        points << csv_number(amplitudes[i]) << ',' << csv_number(g0) << ','
               << csv_number(fit.gamma_Hz) << ',' << csv_number(std::abs(fit.gamma_Hz - g0) / g0)
               << '\n';
    }

    const CalibrationFit line = fit_calibration_line(fitted);
    auto fit_out = open_csv(out_dir / "calibration_fit.csv");
    fit_out << "slope_sqrtHz_per_V,intercept_sqrtHz,gamma_nd_Hz\n";
    fit_out << csv_number(line.slope) << ',' << csv_number(line.intercept) << ','
            << csv_number(line.gamma_nd_Hz) << '\n';
    return points_path;
}

}  // namespace oqtherm
