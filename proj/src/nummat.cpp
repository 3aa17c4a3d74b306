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
#include "symflow/nummat.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <string>

namespace symflow {

namespace {

double initial_rank_tol() {
    if (const char *env = std::getenv("SYMFLOW_TOL")) {
        char *end = nullptr;
        const double v = std::strtod(env, &end);
        if (end != env && *end == '\0' && std::isfinite(v) && v > 0.0) {
            return v;
        }
    }
    return kDefaultRankTol;
}

std::atomic<double> &rank_tol_storage() {
    static std::atomic<double> tol{initial_rank_tol()};
    return tol;
}

RealMatrix symmetrized(const RealMatrix &g) {
    if (g.rows() != g.cols()) {
        throw ShapeError("expected a square Gram matrix, got " + std::to_string(g.rows()) + "x" +
                         std::to_string(g.cols()));
    }
    const double scale = std::max(1.0, g.cwiseAbs().maxCoeff());
    if (g.size() > 0 && (g - g.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale) {
        throw ContractViolation("Gram matrix is not symmetric");
    }
    return 0.5 * (g + g.transpose());
}

} // namespace

double rank_tol() { return rank_tol_storage().load(); }

void set_rank_tol(double tol) {
    if (!(tol > 0.0) || !std::isfinite(tol)) {
        throw ContractViolation("rank tolerance must be a positive finite number");
    }
    rank_tol_storage().store(tol);
}

void require_square(const ComplexMatrix &x, const char *what) {
    if (x.rows() != x.cols() || x.rows() == 0) {
        throw ShapeError(std::string(what) + ": expected a non-empty square matrix, got " +
                         std::to_string(x.rows()) + "x" + std::to_string(x.cols()));
    }
}

double skew_defect(const ComplexMatrix &x) {
    if (x.size() == 0) {
        return 0.0;
    }
    return (x + x.adjoint()).cwiseAbs().maxCoeff();
}

double hermitian_defect(const ComplexMatrix &x) {
    if (x.size() == 0) {
        return 0.0;
    }
    return (x - x.adjoint()).cwiseAbs().maxCoeff();
}

bool is_skew_hermitian(const ComplexMatrix &x, double tol) {
    return x.rows() == x.cols() && skew_defect(x) <= tol;
}

bool is_hermitian(const ComplexMatrix &x, double tol) {
    return x.rows() == x.cols() && hermitian_defect(x) <= tol;
}

double trace_inner(const ComplexMatrix &x, const ComplexMatrix &y) {
    require_square(x, "trace_inner");
    if (x.rows() != y.rows() || x.cols() != y.cols()) {
        throw ShapeError("trace_inner: dimension mismatch " + std::to_string(x.rows()) + " vs " +
                         std::to_string(y.rows()));
    }
    const complex_t t = (x.conjugate().cwiseProduct(y)).sum();
    return t.real() / static_cast<double>(x.rows());
}

double trace_norm(const ComplexMatrix &x) { return std::sqrt(std::max(0.0, trace_inner(x, x))); }

ComplexMatrix expm_skew(const ComplexMatrix &x, double scale) {
    require_square(x, "expm_skew");
    const double magnitude = std::max(1.0, x.cwiseAbs().maxCoeff());
    if (skew_defect(x) > kSkewTol * magnitude) {
        throw ContractViolation("expm_skew: input is not skew-Hermitian (defect " +
                                std::to_string(skew_defect(x)) + ")");
    }
    if (scale == 0.0) {
        return ComplexMatrix::Identity(x.rows(), x.cols());
    }
    // x = -i h with h Hermitian, so exp(scale x) = V exp(-i scale lambda) V^dagger.
    ComplexMatrix h = kI * x;
    h = 0.5 * (h + h.adjoint()).eval();
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h);
    const RealVector &lam = es.eigenvalues();
    const ComplexMatrix &v = es.eigenvectors();
    ComplexVector phases(lam.size());
    for (Eigen::Index k = 0; k < lam.size(); ++k) {
        phases(k) = std::exp(complex_t(0.0, -scale * lam(k)));
    }
    return v * phases.asDiagonal() * v.adjoint();
}

namespace {

struct PsdSpectrum {
    RealVector values;
    RealMatrix vectors;
    double cutoff;
};

PsdSpectrum psd_spectrum(const RealMatrix &g, double rel_tol) {
    const RealMatrix s = symmetrized(g);
    PsdSpectrum out;
    if (s.size() == 0) {
        out.cutoff = 0.0;
        return out;
    }
    Eigen::SelfAdjointEigenSolver<RealMatrix> es(s);
    out.values = es.eigenvalues();
    out.vectors = es.eigenvectors();
    const double lmax = std::max(0.0, out.values.maxCoeff());
    out.cutoff = rel_tol * lmax;
    return out;
}

bool kept(const PsdSpectrum &sp, Eigen::Index k) {
    return sp.values(k) > sp.cutoff && sp.values(k) > 0.0;
}

} // namespace

RealMatrix pinv_psd(const RealMatrix &g, double rel_tol) {
    const PsdSpectrum sp = psd_spectrum(g, rel_tol);
    RealMatrix out = RealMatrix::Zero(g.rows(), g.cols());
    for (Eigen::Index k = 0; k < sp.values.size(); ++k) {
        if (kept(sp, k)) {
            out += (1.0 / sp.values(k)) * sp.vectors.col(k) * sp.vectors.col(k).transpose();
        }
    }
    return out;
}

RealMatrix sqrt_pinv_psd(const RealMatrix &g, double rel_tol) {
    const PsdSpectrum sp = psd_spectrum(g, rel_tol);
    RealMatrix out = RealMatrix::Zero(g.rows(), g.cols());
    for (Eigen::Index k = 0; k < sp.values.size(); ++k) {
        if (kept(sp, k)) {
            out += (1.0 / std::sqrt(sp.values(k))) * sp.vectors.col(k) *
                   sp.vectors.col(k).transpose();
        }
    }
    return out;
}

Eigen::Index numerical_rank_psd(const RealMatrix &g, double rel_tol) {
    const PsdSpectrum sp = psd_spectrum(g, rel_tol);
    Eigen::Index r = 0;
    for (Eigen::Index k = 0; k < sp.values.size(); ++k) {
        r += kept(sp, k) ? 1 : 0;
    }
    return r;
}

namespace detail {

RealMatrix orthonormalizing_coefficients(const RealMatrix &gram, double rel_tol) {
    const PsdSpectrum sp = psd_spectrum(gram, rel_tol);
    const Eigen::Index n = gram.rows();
    std::vector<Eigen::Index> keep;
    for (Eigen::Index k = n - 1; k >= 0; --k) {
        if (kept(sp, k)) {
            keep.push_back(k);
        }
    }
    const auto r = static_cast<Eigen::Index>(keep.size());
    if (r == n) {
        return sqrt_pinv_psd(gram, rel_tol);
    }
    RealMatrix coeff(r, n);
    for (Eigen::Index a = 0; a < r; ++a) {
        const Eigen::Index k = keep[static_cast<std::size_t>(a)];
        RealVector e = sp.vectors.col(k);
        // Deterministic orientation: largest-magnitude component positive.
        Eigen::Index imax = 0;
        e.cwiseAbs().maxCoeff(&imax);
        if (e(imax) < 0.0) {
            e = -e;
        }
        coeff.row(a) = e.transpose() / std::sqrt(sp.values(k));
    }
    return coeff;
}

} // namespace detail

namespace {

Eigen::BDCSVD<RealMatrix> svd_of(const RealMatrix &m, unsigned int options) {
    return Eigen::BDCSVD<RealMatrix>(m, options);
}

} // namespace

RealMatrix nullspace_real(const RealMatrix &m, double rel_tol) {
    return nullspace_real_scaled(m, rel_tol, 0.0);
}

RealMatrix nullspace_real_scaled(const RealMatrix &m, double rel_tol, double scale) {
    const Eigen::Index n = m.cols();
    if (n == 0) {
        return RealMatrix(0, 0);
    }
    if (m.rows() == 0) {
        return RealMatrix::Identity(n, n);
    }
    // The full right singular basis is needed when the matrix is wide.
    const auto svd = svd_of(m, Eigen::ComputeFullV);
    const RealVector &s = svd.singularValues();
    const double ref = std::max(s.size() > 0 ? s(0) : 0.0, scale);
    Eigen::Index rank = 0;
    if (ref > 0.0) {
        for (Eigen::Index k = 0; k < s.size(); ++k) {
            rank += s(k) > rel_tol * ref ? 1 : 0;
        }
    }
    return svd.matrixV().rightCols(n - rank);
}

RealMatrix range_real(const RealMatrix &m, double rel_tol) {
    if (m.size() == 0) {
        return RealMatrix(m.rows(), 0);
    }
    const auto svd = svd_of(m, Eigen::ComputeThinU);
    const RealVector &s = svd.singularValues();
    const double smax = s.size() > 0 ? s(0) : 0.0;
    Eigen::Index rank = 0;
    if (smax > 0.0) {
        for (Eigen::Index k = 0; k < s.size(); ++k) {
            rank += s(k) > rel_tol * smax ? 1 : 0;
        }
    }
    return svd.matrixU().leftCols(rank);
}

RealVector realify(const ComplexVector &v) {
    RealVector r(2 * v.size());
    r.head(v.size()) = v.real();
    r.tail(v.size()) = v.imag();
    return r;
}

ComplexVector complexify(const RealVector &r) {
    if (r.size() % 2 != 0) {
        throw ShapeError("complexify: odd-length real vector");
    }
    const Eigen::Index d = r.size() / 2;
    ComplexVector v(d);
    for (Eigen::Index k = 0; k < d; ++k) {
        v(k) = complex_t(r(k), r(d + k));
    }
    return v;
}

} // namespace symflow
