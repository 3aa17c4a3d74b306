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
#include <complex>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "symflow/errors.hpp"

namespace symflow {

using complex_t = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

inline constexpr complex_t kI{0.0, 1.0};

/// Default relative rank tolerance for pseudo-inverses and nullspaces.
inline constexpr double kDefaultRankTol = 1e-10;
/// Absolute tolerance for Hermiticity / skew-Hermiticity checks.
inline constexpr double kSkewTol = 1e-12;
/// Coefficients below this magnitude are pruned from Pauli sums.
inline constexpr double kPruneTol = 1e-12;
/// Eigenvalue threshold (1 - kIntersectTol) for projector-product intersections.
inline constexpr double kIntersectTol = 1e-8;

/**
 * @brief Global relative rank tolerance.
 *
 * Initialized from the SYMFLOW_TOL environment variable on first use when it
 * holds a positive number, otherwise kDefaultRankTol.
 */
double rank_tol();
void set_rank_tol(double tol);

void require_square(const ComplexMatrix &x, const char *what);

/// max |x + x^dagger|
double skew_defect(const ComplexMatrix &x);
/// max |x - x^dagger|
double hermitian_defect(const ComplexMatrix &x);
bool is_skew_hermitian(const ComplexMatrix &x, double tol = kSkewTol);
bool is_hermitian(const ComplexMatrix &x, double tol = kSkewTol);

/// Re tr(x^dagger y) / d.
double trace_inner(const ComplexMatrix &x, const ComplexMatrix &y);
/// sqrt(trace_inner(x, x)).
double trace_norm(const ComplexMatrix &x);

inline ComplexMatrix commutator(const ComplexMatrix &a, const ComplexMatrix &b) {
    return a * b - b * a;
}
inline ComplexMatrix anticommutator(const ComplexMatrix &a, const ComplexMatrix &b) {
    return a * b + b * a;
}

/// exp(scale * x) for skew-Hermitian x, via the eigendecomposition of i*x.
ComplexMatrix expm_skew(const ComplexMatrix &x, double scale);

/// Pseudo-inverse of a symmetric PSD matrix; eigenvalues <= rel_tol * max are dropped.
RealMatrix pinv_psd(const RealMatrix &g, double rel_tol = rank_tol());
/// Square root of pinv_psd(g).
RealMatrix sqrt_pinv_psd(const RealMatrix &g, double rel_tol = rank_tol());
/// Number of eigenvalues above rel_tol * max.
Eigen::Index numerical_rank_psd(const RealMatrix &g, double rel_tol = rank_tol());

/// Orthonormal basis of the right nullspace, as the columns of the result.
RealMatrix nullspace_real(const RealMatrix &m, double rel_tol = rank_tol());
/// As above with singular values <= rel_tol * max(sigma_max, scale) counted as zero.
RealMatrix nullspace_real_scaled(const RealMatrix &m, double rel_tol, double scale);
/// Orthonormal basis of the column space (left singular vectors above tolerance).
RealMatrix range_real(const RealMatrix &m, double rel_tol = rank_tol());

namespace detail {
/// Rows are output combinations of the input vectors.
RealMatrix orthonormalizing_coefficients(const RealMatrix &gram, double rel_tol);
} // namespace detail

/**
 * @brief Orthonormalize vectors given their Gram matrix.
 *
 * Full-rank input yields sqrt(G^+) applied to the vectors (symmetric
 * orthonormalization). Rank-deficient input yields one vector per nonzero
 * eigenvalue of G, spanning the same space.
 */
template <class V>
std::vector<V> sym_orthonormalize(const std::vector<V> &vectors, const RealMatrix &gram,
                                  double rel_tol = rank_tol()) {
    const auto n = static_cast<Eigen::Index>(vectors.size());
    if (gram.rows() != n || gram.cols() != n) {
        throw ShapeError("sym_orthonormalize: gram is " + std::to_string(gram.rows()) + "x" +
                         std::to_string(gram.cols()) + " but " + std::to_string(n) +
                         " vectors were given");
    }
    std::vector<V> out;
    if (n == 0) {
        return out;
    }
    const RealMatrix coeff = detail::orthonormalizing_coefficients(gram, rel_tol);
    out.reserve(static_cast<std::size_t>(coeff.rows()));
    for (Eigen::Index a = 0; a < coeff.rows(); ++a) {
        V acc = vectors[0] * coeff(a, 0);
        for (Eigen::Index b = 1; b < n; ++b) {
            acc += vectors[static_cast<std::size_t>(b)] * coeff(a, b);
        }
        out.push_back(std::move(acc));
    }
    return out;
}

/// Real 2d-vector [Re v; Im v]; the Euclidean product equals Re<x|y>.
RealVector realify(const ComplexVector &v);
ComplexVector complexify(const RealVector &r);

} // namespace symflow
