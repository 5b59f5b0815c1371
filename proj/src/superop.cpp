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

#include "oqtherm/superop.hpp"

#include <unsupported/Eigen/KroneckerProduct>

#include <cmath>
#include <iostream>
#include <unordered_map>

namespace oqtherm {

namespace {

const Complex kI(0.0, 1.0);

std::vector<Matrix> single_qubit_set() {
    Matrix id = Matrix::Identity(2, 2);
    Matrix sx(2, 2), sy(2, 2), sz(2, 2);
    // sz = |1><1| - |0><0|, sy chosen so the algebra stays right-handed.
    sx << 0, 1, 1, 0;
    sy << 0, kI, -kI, 0;
    sz << -1, 0, 0, 1;
    return {id, sx, sy, sz};
}

std::vector<Matrix> tensor_power_basis(int qubits) {
    std::vector<Matrix> base = single_qubit_set();
    std::vector<Matrix> out = base;
    for (int q = 1; q < qubits; ++q) {
        std::vector<Matrix> next;
        next.reserve(out.size() * 4);
        for (const Matrix& a : out)
            for (const Matrix& b : base) next.push_back(Eigen::kroneckerProduct(a, b).eval());
        out = std::move(next);
    }
    return out;
}

// Generalized Gell-Mann matrices rescaled to Tr(s_i^dag s_j) = D delta_ij.
std::vector<Matrix> gell_mann_basis(int d) {
    std::vector<Matrix> out;
    out.push_back(Matrix::Identity(d, d));
    const double scale = std::sqrt(d / 2.0);
    for (int j = 0; j < d; ++j) {
        for (int k = j + 1; k < d; ++k) {
            Matrix sym = Matrix::Zero(d, d);
            sym(j, k) = 1.0;
            sym(k, j) = 1.0;
            out.push_back(scale * sym);
            Matrix asym = Matrix::Zero(d, d);
            asym(j, k) = -kI;
            asym(k, j) = kI;
            out.push_back(scale * asym);
        }
    }
    for (int l = 1; l < d; ++l) {
        Matrix diag = Matrix::Zero(d, d);
        for (int j = 0; j < l; ++j) diag(j, j) = 1.0;
        diag(l, l) = -static_cast<double>(l);
        diag *= std::sqrt(2.0 / (l * (l + 1.0)));
        out.push_back(scale * diag);
    }
    return out;
}

int int_log2(int n) {
    int p = 0;
    while ((1 << p) < n) ++p;
    return ((1 << p) == n) ? p : -1;
}

}  // namespace

std::shared_ptr<const OperatorBasis> OperatorBasis::pauli() { return for_dim(2); }

std::shared_ptr<const OperatorBasis> OperatorBasis::for_dim(int dim) {
    if (dim < 2 || dim > 8) throw std::invalid_argument("OperatorBasis: dim must be in [2, 8]");
    static std::unordered_map<int, std::shared_ptr<const OperatorBasis>> cache;
    auto it = cache.find(dim);
    if (it != cache.end()) return it->second;
    std::vector<Matrix> elements;
    int qubits = int_log2(dim);
    if (qubits > 0)
        elements = tensor_power_basis(qubits);
    else
        elements = gell_mann_basis(dim);
    auto basis = std::shared_ptr<const OperatorBasis>(new OperatorBasis(dim, std::move(elements)));
    cache[dim] = basis;
    return basis;
}

void check_hermitian(const Matrix& m, double tol, Strictness strictness,
                     const std::string& what) {
    double dev = (m - m.adjoint()).cwiseAbs().maxCoeff();
    double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
    if (dev > tol * scale) {
        if (strictness == Strictness::kStrict)
            throw std::invalid_argument(what + " is not Hermitian (deviation " +
                                        std::to_string(dev) + ")");
        std::cerr << "oqtherm: warning: " << what << " is not Hermitian\n";
    }
}

CoherenceVector vectorize(const Matrix& rho, BasisPtr basis) {
    const int d = basis->dim();
    if (rho.rows() != d || rho.cols() != d)
        throw std::invalid_argument("vectorize: dimension mismatch");
    Vector comps(basis->size());
    for (int k = 0; k < basis->size(); ++k)
        comps(k) = (rho * basis->element(k).adjoint()).trace();
    return {std::move(basis), std::move(comps)};
}

Matrix devectorize(const CoherenceVector& v) {
    const auto& basis = *v.basis;
    if (v.comps.size() != basis.size())
        throw std::invalid_argument("devectorize: malformed coherence vector");
    Matrix rho = Matrix::Zero(basis.dim(), basis.dim());
    for (int k = 0; k < basis.size(); ++k) rho += v.comps(k) * basis.element(k);
    return rho / static_cast<double>(basis.dim());
}

HamiltonianVector vectorize_hamiltonian(const Matrix& h, BasisPtr basis) {
    const int d = basis->dim();
    if (h.rows() != d || h.cols() != d)
        throw std::invalid_argument("vectorize_hamiltonian: dimension mismatch");
    Vector comps(basis->size());
    for (int k = 0; k < basis->size(); ++k) comps(k) = (h * basis->element(k)).trace();
    return {std::move(basis), std::move(comps)};
}

Matrix devectorize_hamiltonian(const HamiltonianVector& v) {
    const auto& basis = *v.basis;
    Matrix h = Matrix::Zero(basis.dim(), basis.dim());
    for (int k = 0; k < basis.size(); ++k) h += v.comps(k) * basis.element(k).adjoint();
    return h / static_cast<double>(basis.dim());
}

Complex hs_inner(const Vector& u, const Vector& v, const OperatorBasis& basis) {
    if (u.size() != v.size() || u.size() != basis.size())
        throw std::invalid_argument("hs_inner: basis mismatch");
    const double d2 = static_cast<double>(basis.size());
    return u.dot(v) / d2;  // (1/D) Tr(u^dag v) in components
}

Complex hs_inner(const CoherenceVector& u, const CoherenceVector& v) {
    if (u.basis != v.basis) throw std::invalid_argument("hs_inner: basis mismatch");
    return hs_inner(u.comps, v.comps, *u.basis);
}

Complex hs_inner(const HamiltonianVector& u, const CoherenceVector& v) {
    if (u.basis != v.basis) throw std::invalid_argument("hs_inner: basis mismatch");
    return hs_inner(u.comps, v.comps, *u.basis);
}

Superoperator hamiltonian_superop(const Matrix& h, BasisPtr basis, const PhysicalConstants& pc,
                                  Strictness strictness) {
    check_hermitian(h, 1e-12, strictness, "Hamiltonian");
    const int n = basis->size();
    const double d = basis->dim();
    const Complex inv_ihbar = 1.0 / (kI * pc.hbar_peV_s());
    Matrix mat(n, n);
    for (int i = 0; i < n; ++i) {
        Matrix comm = inv_ihbar * (h * basis->element(i) - basis->element(i) * h);
        for (int k = 0; k < n; ++k)
            mat(k, i) = (basis->element(k).adjoint() * comm).trace() / d;
    }
    return {std::move(basis), std::move(mat)};
}

Superoperator dissipator_superop(const std::vector<double>& rates,
                                 const std::vector<Matrix>& jumps, BasisPtr basis,
                                 Strictness strictness) {
    if (rates.size() != jumps.size())
        throw std::invalid_argument("dissipator_superop: rates/jumps size mismatch");
    for (double g : rates) {
        if (g < 0.0) {
            if (strictness == Strictness::kStrict)
                throw std::invalid_argument("dissipator_superop: negative rate");
            std::cerr << "oqtherm: warning: negative dissipation rate\n";
        }
    }
    const int n = basis->size();
    const double d = basis->dim();
    Matrix mat = Matrix::Zero(n, n);
    for (size_t m = 0; m < jumps.size(); ++m) {
        const Matrix& gam = jumps[m];
        Matrix gdg = gam.adjoint() * gam;
        for (int i = 0; i < n; ++i) {
            Matrix r = gam * basis->element(i) * gam.adjoint() -
                       0.5 * (gdg * basis->element(i) + basis->element(i) * gdg);
            for (int k = 0; k < n; ++k)
                mat(k, i) += rates[m] * (basis->element(k).adjoint() * r).trace() / d;
        }
    }
    return {std::move(basis), std::move(mat)};
}

Superoperator assemble_liouvillian(const LindbladModel& model, double t, BasisPtr basis,
                                   const PhysicalConstants& pc, Strictness strictness) {
    if (t < model.t_begin - 1e-15 || t > model.t_end + 1e-15)
        throw std::invalid_argument("assemble_liouvillian: t outside model time span");
    Superoperator l = hamiltonian_superop(model.hamiltonian(t), basis, pc, strictness);
    std::vector<double> rates;
    std::vector<Matrix> jumps;
    for (const auto& dsp : model.dissipators) {
        rates.push_back(dsp.rate(t));
        jumps.push_back(dsp.jump(t));
    }
    if (!jumps.empty()) l.mat += dissipator_superop(rates, jumps, basis, strictness).mat;
    return l;
}

LiouvillianEvaluator::LiouvillianEvaluator(const LindbladModel& model, BasisPtr basis,
                                           const PhysicalConstants& pc, Strictness strictness)
    : model_(&model), basis_(std::move(basis)), pc_(pc), strictness_(strictness),
      h_constant_(model.constant_hamiltonian) {
    const int n = basis_->size();
    if (h_constant_)
        h_part_ = hamiltonian_superop(model.hamiltonian(model.t_begin), basis_, pc_, strictness_).mat;
    for (const auto& dsp : model.dissipators) {
        CachedDissipator c;
        c.constant_jump = dsp.constant_jump;
        if (c.constant_jump)
            c.unit_superop =
                dissipator_superop({1.0}, {dsp.jump(model.t_begin)}, basis_, strictness_).mat;
        diss_.push_back(std::move(c));
    }
    work_.resize(n, n);
}

const Matrix& LiouvillianEvaluator::at(double t) {
    if (h_constant_)
        work_ = h_part_;
    else
        work_ = hamiltonian_superop(model_->hamiltonian(t), basis_, pc_, strictness_).mat;
    for (size_t m = 0; m < diss_.size(); ++m) {
        const auto& dsp = model_->dissipators[m];
        double g = dsp.rate(t);
        if (g < 0.0 && strictness_ == Strictness::kStrict)
            throw std::invalid_argument("LiouvillianEvaluator: negative rate at t");
        if (diss_[m].constant_jump)
            work_ += g * diss_[m].unit_superop;
        else
            work_ += dissipator_superop({g}, {dsp.jump(t)}, basis_, strictness_).mat;
    }
    return work_;
}

}  // namespace oqtherm
