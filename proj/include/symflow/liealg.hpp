// Copyright 2026 The symflow Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//     http://www.apache.org/licenses/LICENSE-2.0
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#pragma once
#include <string>
#include <vector>

#include "symflow/nummat.hpp"

namespace symflow {

/// Skew-Hermitian d x d matrix, an element of u(d).
using AlgebraElement = ComplexMatrix;

/// Orthonormal basis of u(d): i * Pauli words for d = 2^n, otherwise
/// i * I / sqrt(1), then symmetric, antisymmetric and diagonal generalized
/// Gell-Mann elements, all normalized under trace_inner.
std::vector<AlgebraElement> u_basis(int d);
/// Real coordinates of a skew-Hermitian matrix in u_basis(d).
RealVector u_coords(const AlgebraElement &x);
AlgebraElement u_from_coords(const RealVector &c, int d);

/**
 * @brief Real subspace of u(d) with an ordered orthonormal basis.
 *
 * The basis is kept both as matrices and as coordinate columns in u_basis(d).
 * Each basis element carries a canonical sign: its first coordinate with
 * magnitude above 1e-10 is positive.
 */
class Subspace {
  public:
    Subspace() = default;
    explicit Subspace(int d);

    /// Gram-Schmidt over `elements` in order; dependent elements are skipped.
    static Subspace span(int d, const std::vector<AlgebraElement> &elements,
                         double rel_tol = rank_tol());
    /// Canonical (row-echelon) basis of the column span of `columns`.
    static Subspace from_coords(int d, const RealMatrix &columns, double rel_tol = rank_tol());
    static Subspace full(int d);

    [[nodiscard]] int dim_ambient() const { return d_; }
    [[nodiscard]] std::size_t dim() const { return basis_.size(); }
    [[nodiscard]] const std::vector<AlgebraElement> &basis() const { return basis_; }
    /// D x dim matrix of orthonormal coordinate columns, D = d^2.
    [[nodiscard]] const RealMatrix &coords() const { return coords_; }

    [[nodiscard]] AlgebraElement project(const AlgebraElement &x) const;
    [[nodiscard]] RealVector project_coords(const RealVector &c) const;
    [[nodiscard]] bool contains(const AlgebraElement &x, double tol = 1e-10) const;
    /// D x D orthogonal projector in coordinates.
    [[nodiscard]] RealMatrix projector() const;

  private:
    friend Subspace lie_closure(const std::vector<AlgebraElement> &generators);
    void append_canonical(const RealVector &unit);

    int d_ = 0;
    std::vector<AlgebraElement> basis_;
    RealMatrix coords_;
};

/// Frobenius distance between the coordinate projectors of two subspaces.
double projector_distance(const Subspace &a, const Subspace &b);
Subspace orthogonal_complement(const Subspace &sub);
/// outer minus inner, i.e. the part of `outer` orthogonal to `inner`.
Subspace relative_complement(const Subspace &outer, const Subspace &inner);
Subspace subspace_sum(const Subspace &a, const Subspace &b);
Subspace intersection(const Subspace &a, const Subspace &b);

/// Smallest bracket-closed real span containing the generators.
Subspace lie_closure(const std::vector<AlgebraElement> &generators);
/// Elements of u(d) commuting with every element of `sub`.
Subspace commutant(const Subspace &sub, int d);
/// Elements of `sub` commuting with all of `sub`.
Subspace center(const Subspace &sub);

struct FourDecomposition {
    Subspace r;
    Subspace ut_centerless;
    Subspace center_t;
    Subspace t_centerless;
};

/// u(d) = r + (u^t minus z(t)) + z(t) + (t minus z(t)), mutually orthogonal.
FourDecomposition four_decomposition(const Subspace &t, int d);

/// Orthogonal projection of x onto span(commutant_basis).
AlgebraElement twirl_project(const AlgebraElement &x, const Subspace &commutant_basis);

bool is_subalgebra(const Subspace &sub, double tol = 1e-10);

/// Dimension header plus one Pauli-sum line per basis element.
std::string format_subspace(const Subspace &sub, const std::string &name, int precision = 6);

/// Pauli sums given as Hermitian h, mapped to i*h on n qubits.
std::vector<AlgebraElement> algebra_from_pauli_strings(const std::vector<std::string> &texts,
                                                       std::size_t n_qubits);

} // namespace symflow
