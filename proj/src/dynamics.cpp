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

#include "oqtherm/dynamics.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

namespace oqtherm {

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double kA21 = 1.0 / 5;
constexpr double kA31 = 3.0 / 40, kA32 = 9.0 / 40;
constexpr double kA41 = 44.0 / 45, kA42 = -56.0 / 15, kA43 = 32.0 / 9;
constexpr double kA51 = 19372.0 / 6561, kA52 = -25360.0 / 2187, kA53 = 64448.0 / 6561,
                 kA54 = -212.0 / 729;
constexpr double kA61 = 9017.0 / 3168, kA62 = -355.0 / 33, kA63 = 46732.0 / 5247,
                 kA64 = 49.0 / 176, kA65 = -5103.0 / 18656;
constexpr double kB1 = 35.0 / 384, kB3 = 500.0 / 1113, kB4 = 125.0 / 192,
                 kB5 = -2187.0 / 6784, kB6 = 11.0 / 84;
constexpr double kE1 = 35.0 / 384 - 5179.0 / 57600, kE3 = 500.0 / 1113 - 7571.0 / 16695,
                 kE4 = 125.0 / 192 - 393.0 / 640, kE5 = -2187.0 / 6784 + 92097.0 / 339200,
                 kE6 = 11.0 / 84 - 187.0 / 2100, kE7 = -1.0 / 40;
constexpr double kC2 = 1.0 / 5, kC3 = 3.0 / 10, kC4 = 4.0 / 5, kC5 = 8.0 / 9;

class MasterEquationRhs {
public:
    MasterEquationRhs(const LindbladModel& model, BasisPtr basis, const PhysicalConstants& pc,
                      bool thermo)
        : model_(&model), basis_(std::move(basis)), eval_(model, basis_, pc), thermo_(thermo) {
        n_ = basis_->size();
        dim_ = basis_->dim();
        if (thermo_ && model.constant_hamiltonian)
            h_const_ = vectorize_hamiltonian(model.hamiltonian(model.t_begin), basis_).comps;
        fd_step_ = std::max(1e-12, 1e-6 * (model.t_end - model.t_begin));
    }

    int size() const { return thermo_ ? n_ + 2 : n_; }

    void operator()(double t, const Vector& y, Vector& dy) {
        const Matrix& l = eval_.at(t);
        dy.resize(y.size());
        dy.head(n_) = l * y.head(n_);
        if (!thermo_) return;
        Vector h = model_->constant_hamiltonian
                       ? h_const_
                       : vectorize_hamiltonian(model_->hamiltonian(t), basis_).comps;
        dy(n_) = (h.transpose() * dy.head(n_))(0) / static_cast<double>(dim_);
        if (model_->constant_hamiltonian) {
            dy(n_ + 1) = 0.0;
        } else {
            Vector hp = vectorize_hamiltonian(model_->hamiltonian(t + fd_step_), basis_).comps;
            Vector hm = vectorize_hamiltonian(model_->hamiltonian(t - fd_step_), basis_).comps;
            Vector hdot = (hp - hm) / (2.0 * fd_step_);
            dy(n_ + 1) = (hdot.transpose() * y.head(n_))(0) / static_cast<double>(dim_);
        }
    }

private:
    const LindbladModel* model_;
    BasisPtr basis_;
    LiouvillianEvaluator eval_;
    bool thermo_;
    int n_ = 0, dim_ = 0;
    Vector h_const_;
    double fd_step_ = 0.0;
};

double error_norm(const Vector& err, const Vector& y0, const Vector& y1, double atol,
                  double rtol) {
    double acc = 0.0;
    for (Eigen::Index i = 0; i < err.size(); ++i) {
        double scale = atol + rtol * std::max(std::abs(y0(i)), std::abs(y1(i)));
        double r = std::abs(err(i)) / scale;
        acc += r * r;
    }
    return std::sqrt(acc / static_cast<double>(err.size()));
}

void check_physicality(const CoherenceVector& state, const IntegratorOptions& opts, double t) {
    if (std::abs(state.comps(0) - 1.0) > 1e-9)
        throw std::runtime_error("propagate_exact: trace drift at t=" + std::to_string(t));
    Matrix rho = devectorize(state);
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (rho + rho.adjoint()),
                                             Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -opts.positivity_abort)
        throw std::runtime_error("propagate_exact: positivity violation at t=" +
                                 std::to_string(t));
}

}  // namespace

Trajectory propagate_exact(const LindbladModel& model, const CoherenceVector& rho0,
                           const std::vector<double>& grid, const IntegratorOptions& opts,
                           const PhysicalConstants& pc) {
    if (grid.size() < 2) throw std::invalid_argument("propagate_exact: grid too small");
    const BasisPtr& basis = rho0.basis;
    const int n = basis->size();
    MasterEquationRhs rhs(model, basis, pc, opts.integrate_thermo);

    Vector y = Vector::Zero(rhs.size());
    y.head(n) = rho0.comps;

    Trajectory traj;
    traj.basis = basis;
    traj.times = grid;
    traj.method = Trajectory::Method::kExact;
    traj.states.resize(n, static_cast<Eigen::Index>(grid.size()));
    traj.states.col(0) = rho0.comps;
    if (opts.integrate_thermo) {
        traj.heat_cum = Eigen::VectorXd::Zero(grid.size());
        traj.work_cum = Eigen::VectorXd::Zero(grid.size());
    }

    Vector k1(rhs.size()), k2(rhs.size()), k3(rhs.size()), k4(rhs.size()), k5(rhs.size()),
        k6(rhs.size()), k7(rhs.size()), ytmp(rhs.size()), ynew(rhs.size()), err(rhs.size());

    double t = grid.front();
    if (opts.check_positivity) check_physicality(traj.state(0), opts, t);
    rhs(t, y, k1);

    for (size_t seg = 1; seg < grid.size(); ++seg) {
        const double t_target = grid[seg];
        double h = t_target - t;
        while (t < t_target - 1e-15 * std::max(1.0, std::abs(t_target))) {
            h = std::min(h, t_target - t);
            if (h < 1e-16 * std::max(std::abs(t), 1e-6))
                throw std::runtime_error("propagate_exact: step size underflow");
            ytmp = y + h * (kA21 * k1);
            rhs(t + kC2 * h, ytmp, k2);
            ytmp = y + h * (kA31 * k1 + kA32 * k2);
            rhs(t + kC3 * h, ytmp, k3);
            ytmp = y + h * (kA41 * k1 + kA42 * k2 + kA43 * k3);
            rhs(t + kC4 * h, ytmp, k4);
            ytmp = y + h * (kA51 * k1 + kA52 * k2 + kA53 * k3 + kA54 * k4);
            rhs(t + kC5 * h, ytmp, k5);
            ytmp = y + h * (kA61 * k1 + kA62 * k2 + kA63 * k3 + kA64 * k4 + kA65 * k5);
            rhs(t + h, ytmp, k6);
            ynew = y + h * (kB1 * k1 + kB3 * k3 + kB4 * k4 + kB5 * k5 + kB6 * k6);
            rhs(t + h, ynew, k7);
            err = h * (kE1 * k1 + kE3 * k3 + kE4 * k4 + kE5 * k5 + kE6 * k6 + kE7 * k7);
            double en = error_norm(err, y, ynew, opts.abs_tol, opts.rel_tol);
            if (en <= 1.0) {
                t += h;
                y = ynew;
                k1 = k7;  // FSAL; on rejection k1 still matches (t, y)
            }
            double factor = (en > 0.0) ? 0.9 * std::pow(en, -0.2) : 5.0;
            h *= std::clamp(factor, 0.2, 5.0);
        }
        t = t_target;
        traj.states.col(static_cast<Eigen::Index>(seg)) = y.head(n);
        if (opts.integrate_thermo) {
            (*traj.heat_cum)(static_cast<Eigen::Index>(seg)) = y(n).real();
            (*traj.work_cum)(static_cast<Eigen::Index>(seg)) = y(n + 1).real();
        }
        if (opts.check_positivity) check_physicality(traj.state(static_cast<int>(seg)), opts, t);
    }
    return traj;
}

Trajectory propagate_adiabatic(const AdiabaticPhaseTrack& track, BasisPtr basis,
                               const CoherenceVector& rho0) {
    const int n = basis->size();
    const int nt = static_cast<int>(track.times.size());
    Vector c = track.frames.front().left * rho0.comps;

    Trajectory traj;
    traj.basis = std::move(basis);
    traj.times = track.times;
    traj.method = Trajectory::Method::kAdiabatic;
    traj.states.resize(n, nt);
    for (int k = 0; k < nt; ++k) {
        Vector amps = (c.array() * track.cumulative.col(k).array().exp()).matrix();
        traj.states.col(k) = track.frames[k].right * amps;
    }
    return traj;
}

Trajectory propagate_adiabatic(const LindbladModel& model, const CoherenceVector& rho0,
                               const std::vector<double>& grid, const PhysicalConstants& pc,
                               const DecomposeOptions& dopts, const TrackOptions& topts) {
    AdiabaticPhaseTrack track = adiabatic_phases(model, rho0.basis, grid, pc, dopts, topts);
    return propagate_adiabatic(track, rho0.basis, rho0);
}

double fidelity(const CoherenceVector& a, const CoherenceVector& b, double psd_tol) {
    Matrix ra = devectorize(a);
    Matrix rb = devectorize(b);
    ra = 0.5 * (ra + ra.adjoint()).eval();
    rb = 0.5 * (rb + rb.adjoint()).eval();

    Eigen::SelfAdjointEigenSolver<Matrix> ea(ra);
    if (ea.eigenvalues().minCoeff() < -psd_tol)
        throw std::invalid_argument("fidelity: first state is not PSD");
    Eigen::SelfAdjointEigenSolver<Matrix> eb_check(rb);
    if (eb_check.eigenvalues().minCoeff() < -psd_tol)
        throw std::invalid_argument("fidelity: second state is not PSD");

    Eigen::VectorXd clipped = ea.eigenvalues().cwiseMax(0.0);
    Matrix sqrt_a = ea.eigenvectors() * clipped.cwiseSqrt().asDiagonal() *
                    ea.eigenvectors().adjoint();
    Matrix m = sqrt_a * rb * sqrt_a;
    Eigen::SelfAdjointEigenSolver<Matrix> em(0.5 * (m + m.adjoint()));
    double f = em.eigenvalues().cwiseMax(0.0).cwiseSqrt().sum();
    return std::min(f, 1.0);
}

double min_fidelity(const Trajectory& a, const Trajectory& b) {
    if (a.times.size() != b.times.size())
        throw std::invalid_argument("min_fidelity: trajectory grids differ");
    double fmin = 1.0;
    for (size_t k = 0; k < a.times.size(); ++k)
        fmin = std::min(fmin, fidelity(a.state(static_cast<int>(k)), b.state(static_cast<int>(k))));
    return fmin;
}

std::vector<AdiabaticityRow> adiabaticity_report(
    const std::function<LindbladModel(double gamma0, double tau)>& family,
    const std::function<CoherenceVector(const LindbladModel&)>& initial_state,
    const std::vector<double>& gamma0_values, const std::vector<double>& tau_values,
    int samples_per_run, const PhysicalConstants& pc) {
    std::vector<AdiabaticityRow> rows;
    for (double g0 : gamma0_values) {
        AdiabaticityRow row;
        row.gamma0 = g0;
        for (double tau : tau_values) {
            LindbladModel model = family(g0, tau);
            CoherenceVector rho0 = initial_state(model);
            std::vector<double> grid(samples_per_run);
            for (int k = 0; k < samples_per_run; ++k)
                grid[k] = tau * k / static_cast<double>(samples_per_run - 1);
            Trajectory exact = propagate_exact(model, rho0, grid, {}, pc);
            Trajectory adiab = propagate_adiabatic(model, rho0, grid, pc);
            row.f_min = std::min(row.f_min, min_fidelity(exact, adiab));
        }
        rows.push_back(row);
    }
    return rows;
}

}  // namespace oqtherm
