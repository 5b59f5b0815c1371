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

#include <Eigen/Dense>
#include <complex>
#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "oqtherm/constants.hpp"

namespace oqtherm {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

enum class Strictness { kStrict, kWarn };

/// Trace-orthogonal operator basis {sigma_k}, Tr(sigma_i^dag sigma_j) = D delta_ij,
/// sigma_0 = identity. For D = 2 this is {1, sx, sy, sz} with the
/// sz = |1><1| - |0><0| convention; powers of two use tensor products of that
/// set, other dimensions use rescaled generalized Gell-Mann matrices.
class OperatorBasis {
public:
    static std::shared_ptr<const OperatorBasis> pauli();
    static std::shared_ptr<const OperatorBasis> for_dim(int dim);

    int dim() const { return dim_; }
    int size() const { return static_cast<int>(elements_.size()); }  // D^2
    const Matrix& element(int k) const { return elements_[k]; }
    const std::vector<Matrix>& elements() const { return elements_; }

private:
    explicit OperatorBasis(int dim, std::vector<Matrix> elements)
        : dim_(dim), elements_(std::move(elements)) {}
    int dim_;
    std::vector<Matrix> elements_;
};

using BasisPtr = std::shared_ptr<const OperatorBasis>;

/// Density operator in coherence-vector form, comps[k] = Tr(rho sigma_k^dag).
struct CoherenceVector {
    BasisPtr basis;
    Vector comps;
};

/// Hamiltonian in vector form, comps[k] = Tr(H sigma_k), energies in peV.
struct HamiltonianVector {
    BasisPtr basis;
    Vector comps;
};

/// D^2 x D^2 supermatrix acting on coherence vectors, entries in rad/s.
struct Superoperator {
    BasisPtr basis;
    Matrix mat;
};

struct DissipatorSpec {
    std::function<Matrix(double)> jump;   // Gamma_n(t), dimensionless
    std::function<double(double)> rate;   // gamma_n(t) >= 0, Hz
    bool constant_jump = false;
};

/// Time-dependent generator: H(t) in peV plus a list of (jump, rate) pairs.
struct LindbladModel {
    int dim = 2;
    std::function<Matrix(double)> hamiltonian;
    bool constant_hamiltonian = false;
    std::vector<DissipatorSpec> dissipators;
    double t_begin = 0.0;
    double t_end = 0.0;
};

void check_hermitian(const Matrix& m, double tol, Strictness strictness,
                     const std::string& what);

CoherenceVector vectorize(const Matrix& rho, BasisPtr basis);
Matrix devectorize(const CoherenceVector& v);

HamiltonianVector vectorize_hamiltonian(const Matrix& h, BasisPtr basis);
Matrix devectorize_hamiltonian(const HamiltonianVector& v);

/// Hilbert-Schmidt inner product (1/D) Tr(u^dag v) of the represented operators.
Complex hs_inner(const Vector& u, const Vector& v, const OperatorBasis& basis);
Complex hs_inner(const CoherenceVector& u, const CoherenceVector& v);
Complex hs_inner(const HamiltonianVector& u, const CoherenceVector& v);

Superoperator hamiltonian_superop(const Matrix& h, BasisPtr basis,
                                  const PhysicalConstants& pc = kDefaultConstants,
                                  Strictness strictness = Strictness::kStrict);

Superoperator dissipator_superop(const std::vector<double>& rates,
                                 const std::vector<Matrix>& jumps, BasisPtr basis,
                                 Strictness strictness = Strictness::kStrict);

Superoperator assemble_liouvillian(const LindbladModel& model, double t, BasisPtr basis,
                                   const PhysicalConstants& pc = kDefaultConstants,
                                   Strictness strictness = Strictness::kStrict);

/// Repeated evaluation of L(t) for one model; caches time-independent parts.
class LiouvillianEvaluator {
public:
    LiouvillianEvaluator(const LindbladModel& model, BasisPtr basis,
                         const PhysicalConstants& pc = kDefaultConstants,
                         Strictness strictness = Strictness::kStrict);

    const Matrix& at(double t);
    const BasisPtr& basis() const { return basis_; }

private:
    const LindbladModel* model_;
    BasisPtr basis_;
    PhysicalConstants pc_;
    Strictness strictness_;
    bool h_constant_;
    Matrix h_part_;
    struct CachedDissipator {
        bool constant_jump;
        Matrix unit_superop;  // dissipator supermatrix at gamma = 1
    };
    std::vector<CachedDissipator> diss_;
    Matrix work_;
};

}  // namespace oqtherm
