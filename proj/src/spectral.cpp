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

#include "oqtherm/spectral.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <numeric>

namespace oqtherm {

namespace {

double degeneracy_tol(const Vector& eigenvalues, double rel) {
    double scale = eigenvalues.cwiseAbs().maxCoeff();
    return std::max(1e-12, rel * scale);
}

// Indices of mutually degenerate eigenvalue groups (in current order).
std::vector<std::vector<int>> degenerate_groups(const Vector& eigenvalues, double tol) {
    const int n = static_cast<int>(eigenvalues.size());
    std::vector<std::vector<int>> groups;
    std::vector<bool> used(n, false);
    for (int i = 0; i < n; ++i) {
        if (used[i]) continue;
        std::vector<int> g{i};
        used[i] = true;
        for (int j = i + 1; j < n; ++j) {
            if (used[j]) continue;
            if (std::abs(eigenvalues(i) - eigenvalues(j)) <= tol) {
                g.push_back(j);
                used[j] = true;
            }
        }
        groups.push_back(std::move(g));
    }
    return groups;
}

}  // namespace

SpectralDecomposition decompose(const Superoperator& l, const DecomposeOptions& opts) {
    const int n = static_cast<int>(l.mat.rows());
    Eigen::ComplexEigenSolver<Matrix> solver(l.mat, /*computeEigenvectors=*/true);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("decompose: eigensolver failed to converge");

    Matrix right = solver.eigenvectors();
    Vector eigenvalues = solver.eigenvalues();

    Eigen::JacobiSVD<Matrix> svd(right);
    const double smin = svd.singularValues()(n - 1);
    const double smax = svd.singularValues()(0);
    const double cond = (smin > 0.0) ? smax / smin : std::numeric_limits<double>::infinity();
    if (cond > opts.defect_condition_threshold)
        throw DefectiveLiouvillian(
            "decompose: eigenvector matrix condition number " + std::to_string(cond) +
            " exceeds threshold; Liouvillian is (near-)defective, nontrivial Jordan "
            "blocks are not supported");

    // Canonical deterministic order: (Re, Im) descending.
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        if (eigenvalues(a).real() != eigenvalues(b).real())
            return eigenvalues(a).real() > eigenvalues(b).real();
        return eigenvalues(a).imag() > eigenvalues(b).imag();
    });
    Matrix right_sorted(n, n);
    Vector ev_sorted(n);
    for (int j = 0; j < n; ++j) {
        right_sorted.col(j) = right.col(order[j]);
        ev_sorted(j) = eigenvalues(order[j]);
    }

    SpectralDecomposition dec;
    dec.eigenvalues = std::move(ev_sorted);
    dec.right = std::move(right_sorted);
    dec.left = dec.right.partialPivLu().solve(Matrix::Identity(n, n));
    dec.condition = cond;
    dec.biorth_residual = (dec.left * dec.right - Matrix::Identity(n, n)).cwiseAbs().maxCoeff();
    double tol = degeneracy_tol(dec.eigenvalues, opts.degeneracy_tol_rel);
    for (const auto& g : degenerate_groups(dec.eigenvalues, tol))
        if (g.size() > 1) dec.degenerate = true;
    return dec;
}

TrackResult track(const SpectralDecomposition& prev, SpectralDecomposition& next,
                  const TrackOptions& opts) {
    const int n = static_cast<int>(prev.eigenvalues.size());
    Matrix overlap = prev.left * next.right;  // (a, b) = <<E_a(t) | D_b(t+dt)>>

    const double prev_tol = degeneracy_tol(prev.eigenvalues, opts.degeneracy_tol_rel);

    // Greedy global matching on |overlap|.
    std::vector<int> match(n, -1);  // match[a] = column of next assigned to slot a
    std::vector<bool> row_done(n, false), col_done(n, false);
    for (int pick = 0; pick < n; ++pick) {
        int best_a = -1, best_b = -1;
        double best = -1.0;
        for (int a = 0; a < n; ++a) {
            if (row_done[a]) continue;
            for (int b = 0; b < n; ++b) {
                if (col_done[b]) continue;
                double v = std::abs(overlap(a, b));
                if (v > best) {
                    best = v;
                    best_a = a;
                    best_b = b;
                }
            }
        }
        // Ambiguity: a second available column almost as good, belonging to a
        // different (non-degenerate) eigenvalue branch.
        for (int b = 0; b < n; ++b) {
            if (col_done[b] || b == best_b) continue;
            if (best - std::abs(overlap(best_a, b)) < opts.ambiguity_tol &&
                std::abs(next.eigenvalues(best_b) - next.eigenvalues(b)) > prev_tol)
                throw std::runtime_error(
                    "track: ambiguous eigenvector matching between adjacent samples; "
                    "use a finer time grid");
        }
        match[best_a] = best_b;
        row_done[best_a] = true;
        col_done[best_b] = true;
    }

    // Apply permutation.
    Matrix right(n, n), left(n, n);
    Vector eigenvalues(n);
    for (int a = 0; a < n; ++a) {
        right.col(a) = next.right.col(match[a]);
        left.row(a) = next.left.row(match[a]);
        eigenvalues(a) = next.eigenvalues(match[a]);
    }

    TrackResult result;
    result.permutation = match;
    result.gauge = Vector::Ones(n);

    // Gauge fix. Degenerate groups (degenerate both before and after the step)
    // are re-mixed with the inverse overlap block; isolated eigenpairs get a
    // pure phase so the diagonal overlap is real positive.
    const double next_tol = degeneracy_tol(eigenvalues, opts.degeneracy_tol_rel);
    auto groups = degenerate_groups(eigenvalues, std::max(prev_tol, next_tol));
    for (const auto& g : groups) {
        if (g.size() == 1) {
            int a = g[0];
            Complex c = overlap(a, match[a]);
            if (std::abs(c) > 0.0) {
                Complex phase = std::abs(c) / c;
                right.col(a) *= phase;
                left.row(a) /= phase;
                result.gauge(a) = phase;
            }
            continue;
        }
        const int m = static_cast<int>(g.size());
        Matrix block(m, m);
        for (int r = 0; r < m; ++r)
            for (int c = 0; c < m; ++c) block(r, c) = overlap(g[r], match[g[c]]);
        Matrix block_inv = block.partialPivLu().solve(Matrix::Identity(m, m));
        Matrix rsub(n, m), lsub(m, n);
        for (int c = 0; c < m; ++c) rsub.col(c) = right.col(g[c]);
        for (int r = 0; r < m; ++r) lsub.row(r) = left.row(g[r]);
        Matrix rnew = rsub * block_inv;
        Matrix lnew = block * lsub;
        for (int c = 0; c < m; ++c) right.col(g[c]) = rnew.col(c);
        for (int r = 0; r < m; ++r) left.row(g[r]) = lnew.row(r);
    }

    next.right = std::move(right);
    next.left = std::move(left);
    next.eigenvalues = std::move(eigenvalues);
    next.biorth_residual =
        (next.left * next.right - Matrix::Identity(n, n)).cwiseAbs().maxCoeff();
    return result;
}

AdiabaticPhaseTrack adiabatic_phases(const LindbladModel& model, BasisPtr basis,
                                     const std::vector<double>& grid,
                                     const PhysicalConstants& pc, const DecomposeOptions& dopts,
                                     const TrackOptions& topts) {
    if (grid.size() < 2) throw std::invalid_argument("adiabatic_phases: grid too small");
    const int nt = static_cast<int>(grid.size());
    LiouvillianEvaluator eval(model, basis, pc);
    const int n = basis->size();

    AdiabaticPhaseTrack out;
    out.times = grid;
    out.frames.reserve(nt);
    for (int k = 0; k < nt; ++k) {
        Superoperator l{basis, eval.at(grid[k])};
        SpectralDecomposition dec = decompose(l, dopts);
        dec.t = grid[k];
        if (k > 0) track(out.frames[k - 1], dec, topts);
        out.frames.push_back(std::move(dec));
    }

    out.lambda_tilde.resize(n, nt);
    for (int k = 0; k < nt; ++k) {
        int lo = std::max(0, k - 1);
        int hi = std::min(nt - 1, k + 1);
        double dt = grid[hi] - grid[lo];
        for (int a = 0; a < n; ++a) {
            Vector ddot = (out.frames[hi].right.col(a) - out.frames[lo].right.col(a)) / dt;
            Complex geometric = out.frames[k].left.row(a) * ddot;
            out.lambda_tilde(a, k) = out.frames[k].eigenvalues(a) - geometric;
        }
    }

    out.cumulative = Matrix::Zero(n, nt);
    for (int k = 1; k < nt; ++k) {
        double dt = grid[k] - grid[k - 1];
        out.cumulative.col(k) =
            out.cumulative.col(k - 1) +
            0.5 * dt * (out.lambda_tilde.col(k) + out.lambda_tilde.col(k - 1));
    }
    return out;
}

}  // namespace oqtherm
