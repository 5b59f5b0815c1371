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

#include "oqtherm/tomography.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace oqtherm {

namespace {

double sampled_expectation(double e, long shots, std::mt19937_64& rng) {
    const double p = std::clamp(0.5 * (1.0 + e), 0.0, 1.0);
    std::binomial_distribution<long> dist(shots, p);
    return 2.0 * static_cast<double>(dist(rng)) / static_cast<double>(shots) - 1.0;
}

Eigen::Vector3d bloch_of(const CoherenceVector& rho) {
    Eigen::Vector3d e;
    for (int k = 0; k < 3; ++k) e[k] = rho.comps[k + 1].real();
    return e;
}

CoherenceVector noisy_copy(const CoherenceVector& rho, long shots, std::mt19937_64& rng) {
    return reconstruct_state(bloch_of(rho), shots, &rng);
}

Matrix psd_sqrt(const Matrix& m, double psd_tol, const char* what) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(m);
    Eigen::VectorXd w = es.eigenvalues();
    const double scale = std::max(1.0, w.cwiseAbs().maxCoeff());
    for (int i = 0; i < w.size(); ++i) {
        if (w[i] < -psd_tol * scale)
            throw std::invalid_argument(std::string(what) + ": matrix is not PSD");
        w[i] = std::sqrt(std::max(w[i], 0.0));
    }
    return es.eigenvectors() * w.asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace

CoherenceVector reconstruct_state(const Eigen::Vector3d& expectations, std::optional<long> shots,
                                  std::mt19937_64* rng) {
    Eigen::Vector3d e = expectations;
    if (e.cwiseAbs().maxCoeff() > 1.0 + 1e-12)
        throw std::invalid_argument("reconstruct_state: |expectation| > 1");
    if (shots) {
        if (*shots <= 0) throw std::invalid_argument("reconstruct_state: shots must be positive");
        std::mt19937_64 local(0);
        std::mt19937_64& gen = rng ? *rng : local;
        for (int k = 0; k < 3; ++k) e[k] = sampled_expectation(e[k], *shots, gen);
    }
    const double norm = e.norm();
    if (norm > 1.0) {
        if (!shots && norm > 1.0 + 1e-6)
            throw std::invalid_argument("reconstruct_state: Bloch vector outside the unit ball");
        e /= norm;
    }
    CoherenceVector rho{OperatorBasis::pauli(), Vector(4)};
    rho.comps << 1.0, e[0], e[1], e[2];
    return rho;
}

ProcessMatrix process_tomography(const Channel& channel, const TomographyOptions& opts) {
    const BasisPtr basis = OperatorBasis::pauli();
    const int d2 = 4;
    std::mt19937_64 rng(opts.seed);

    // Probes |0>, |1>, |+>, |+i> as coherence vectors (1, n) of the Bloch
    // states (1/2)(1 + n.sigma), with sz = |1><1| - |0><0|.
    std::vector<Vector> probes(4, Vector(4));
    probes[0] << 1, 0, 0, -1;
    probes[1] << 1, 0, 0, 1;
    probes[2] << 1, 1, 0, 0;
    probes[3] << 1, 0, 1, 0;

    std::vector<CoherenceVector> outs;
    outs.reserve(4);
    for (const auto& p : probes) {
        CoherenceVector out = channel({basis, p});
        if (opts.shots) out = noisy_copy(out, *opts.shots, rng);
        outs.push_back(std::move(out));
    }

    if (!opts.shots) {
        // Linearity probe: eps[(rho0 + rho1)/2] must match the average output.
        CoherenceVector mix{basis, Vector(0.5 * (probes[0] + probes[1]))};
        const Vector expect = 0.5 * (outs[0].comps + outs[1].comps);
        if ((channel(mix).comps - expect).cwiseAbs().maxCoeff() > opts.linearity_tol)
            throw std::invalid_argument("process_tomography: channel is not linear");
    }

    // Channel action on the Pauli basis from the probe outputs.
    std::vector<Matrix> eps(4);
    const Matrix e0 = devectorize(outs[0]);
    const Matrix e1 = devectorize(outs[1]);
    eps[0] = e0 + e1;                        // 1 = rho0 + rho1
    eps[1] = 2.0 * devectorize(outs[2]) - eps[0];  // sx = 2 rho+ - 1
    eps[2] = 2.0 * devectorize(outs[3]) - eps[0];  // sy = 2 rho+i - 1
    eps[3] = e1 - e0;                        // sz = rho1 - rho0

    // Tr(s_k^dag eps[s_i]) = sum_mn chi_mn Tr(s_k^dag s_m s_i s_n^dag).
    Matrix t(d2 * d2, d2 * d2);
    Vector b(d2 * d2);
    for (int k = 0; k < d2; ++k) {
        const Matrix sk_adj = basis->element(k).adjoint();
        for (int i = 0; i < d2; ++i) {
            const int row = k * d2 + i;
            b[row] = (sk_adj * eps[i]).trace();
            for (int m = 0; m < d2; ++m) {
                const Matrix left = sk_adj * basis->element(m) * basis->element(i);
                for (int n = 0; n < d2; ++n)
                    t(row, m * d2 + n) = (left * basis->element(n).adjoint()).trace();
            }
        }
    }
    const Vector x = t.partialPivLu().solve(b);

    Matrix chi(d2, d2);
    for (int m = 0; m < d2; ++m)
        for (int n = 0; n < d2; ++n) chi(m, n) = x[m * d2 + n];
    chi = 0.5 * (chi + chi.adjoint()).eval();

    if (opts.shots) {
        // Shot noise can push chi slightly outside the PSD cone; clip and
        // restore the trace-preservation normalization Tr(chi) = 1.
        Eigen::SelfAdjointEigenSolver<Matrix> es(chi);
        Eigen::VectorXd w = es.eigenvalues().cwiseMax(0.0);
        chi = es.eigenvectors() * w.asDiagonal() * es.eigenvectors().adjoint();
        const double tr = chi.trace().real();
        if (tr <= 0.0) throw std::runtime_error("process_tomography: degenerate noisy estimate");
        chi /= tr;
    }
    return {std::move(chi)};
}

CoherenceVector apply_process(const ProcessMatrix& chi, const CoherenceVector& rho) {
    const BasisPtr basis = OperatorBasis::pauli();
    const Matrix r = devectorize(rho);
    Matrix out = Matrix::Zero(2, 2);
    for (int m = 0; m < 4; ++m)
        for (int n = 0; n < 4; ++n)
            out += chi.chi(m, n) * basis->element(m) * r * basis->element(n).adjoint();
    return vectorize(out, basis);
}

double process_fidelity(const ProcessMatrix& chi_exp, const ProcessMatrix& chi_id,
                        double psd_tol) {
    const Matrix root = psd_sqrt(chi_exp.chi, psd_tol, "process_fidelity");
    const Matrix inner = psd_sqrt(root * chi_id.chi * root, psd_tol, "process_fidelity");
    const double f = inner.trace().real();
    return std::min(f * f, 1.0);
}

RabiFit fit_rabi_decay(const std::vector<double>& times, const std::vector<double>& p1) {
    const int n = static_cast<int>(times.size());
    if (n < 20 || p1.size() != times.size())
        throw std::invalid_argument("fit_rabi_decay: need >= 20 (t, P1) samples");
    Eigen::Map<const Eigen::VectorXd> t(times.data(), n);
    Eigen::Map<const Eigen::VectorXd> y(p1.data(), n);
    const double span = t[n - 1] - t[0];
    if (span <= 0.0) throw std::invalid_argument("fit_rabi_decay: times must increase");
    if (y.maxCoeff() - y.minCoeff() < 1e-9)
        throw std::invalid_argument("fit_rabi_decay: flat trace");

    // Initial guesses: mean offset, half the peak-to-peak amplitude, frequency
    // from sign changes of the detrended trace, decay from envelope thirds.
    double offset = y.mean();
    double amp = 0.5 * (y.maxCoeff() - y.minCoeff());
    Eigen::VectorXd d = y.array() - offset;
    int crossings = 0;
    int last_sign = 0;
    for (int i = 0; i < n; ++i) {
        if (std::abs(d[i]) < 0.05 * amp) continue;
        const int s = d[i] > 0 ? 1 : -1;
        if (last_sign != 0 && s != last_sign) ++crossings;
        last_sign = s;
    }
    double omega = std::numbers::pi * std::max(crossings, 1) / span;
    double head = d.head(n / 3).cwiseAbs().maxCoeff();
    double tail = d.tail(n / 3).cwiseAbs().maxCoeff();
    double gamma = (head > 0 && tail > 0)
                       ? std::max(std::log(head / std::max(tail, 1e-12 * head)) / (span * 2.0 / 3.0),
                                  1e-3 / span)
                       : 1.0 / span;

    Eigen::Vector4d theta(gamma, omega, amp, offset);
    auto residual = [&](const Eigen::Vector4d& th, Eigen::VectorXd& r, Eigen::MatrixXd* jac) {
        for (int i = 0; i < n; ++i) {
            const double env = std::exp(-th[0] * t[i]);
            const double c = std::cos(th[1] * t[i]);
            r[i] = th[3] - th[2] * env * c - y[i];
            if (jac) {
                (*jac)(i, 0) = th[2] * t[i] * env * c;
                (*jac)(i, 1) = th[2] * env * std::sin(th[1] * t[i]) * t[i];
                (*jac)(i, 2) = -env * c;
                (*jac)(i, 3) = 1.0;
            }
        }
    };

    Eigen::VectorXd r(n);
    Eigen::MatrixXd jac(n, 4);
    residual(theta, r, &jac);
    double cost = r.squaredNorm();
    double lambda = 1e-3;
    int iter = 0;
    const int max_iter = 400;
    for (; iter < max_iter; ++iter) {
        const Eigen::Matrix4d jtj = jac.transpose() * jac;
        const Eigen::Vector4d jtr = jac.transpose() * r;
        Eigen::Matrix4d a = jtj;
        a.diagonal() += lambda * jtj.diagonal().cwiseMax(1e-12);
        const Eigen::Vector4d step = a.ldlt().solve(-jtr);
        const Eigen::Vector4d trial = theta + step;
        Eigen::VectorXd rt(n);
        residual(trial, rt, nullptr);
        const double trial_cost = rt.squaredNorm();
        if (trial_cost < cost) {
            theta = trial;
            const bool converged =
                step.norm() < 1e-12 * (1.0 + theta.norm()) || cost - trial_cost < 1e-15 * cost;
            cost = trial_cost;
            residual(theta, r, &jac);
            lambda = std::max(lambda * 0.3, 1e-12);
            if (converged) break;
        } else {
            lambda *= 4.0;
            if (lambda > 1e12)
                throw std::runtime_error("fit_rabi_decay: no convergence (stalled)");
        }
    }
    if (iter == max_iter) throw std::runtime_error("fit_rabi_decay: no convergence");

    RabiFit fit;
    fit.gamma_Hz = std::abs(theta[0]);
    fit.omega_rad_s = std::abs(theta[1]);
    fit.amplitude = theta[2];
    fit.offset = theta[3];
    fit.rms_residual = std::sqrt(cost / n);
    fit.iterations = iter + 1;
    return fit;
}

CalibrationFit fit_calibration_line(const std::vector<std::pair<double, double>>& samples) {
    const int n = static_cast<int>(samples.size());
    if (n < 2) throw std::invalid_argument("fit_calibration_line: need >= 2 samples");
    Eigen::MatrixXd design(n, 2);
    Eigen::VectorXd rhs(n);
    for (int i = 0; i < n; ++i) {
        if (samples[i].second < 0.0)
            throw std::invalid_argument("fit_calibration_line: negative rate");
        design(i, 0) = samples[i].first;
        design(i, 1) = 1.0;
        rhs[i] = std::sqrt(samples[i].second);
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
    if (qr.rank() < 2)
        throw std::invalid_argument("fit_calibration_line: rank-deficient design (equal amplitudes)");
    const Eigen::Vector2d coeff = qr.solve(rhs);
    CalibrationFit fit;
    fit.slope = coeff[0];
    fit.intercept = coeff[1];
    fit.gamma_nd_Hz = coeff[1] * coeff[1];
    fit.residuals = design * coeff - rhs;
    fit.samples = samples;
    return fit;
}

}  // namespace oqtherm
