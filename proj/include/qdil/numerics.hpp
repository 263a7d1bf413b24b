// Copyright 2026 The qdil Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Dense complex linear algebra shared by every other qdil header: matrix
// exponentials, time-ordered propagators and structural defect measures.

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>

namespace qdil {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

inline constexpr Complex kI{0.0, 1.0};
inline constexpr double kPi = 3.14159265358979323846;

/// Largest dimension accepted by the dense routines.
inline constexpr Eigen::Index kMaxDenseDim = 4096;

/// A uniform discretization of [t0, t1] into `steps` intervals.
struct TimeGrid {
    double t0 = 0.0;
    double t1 = 1.0;
    int steps = 1;

    TimeGrid() = default;
    TimeGrid(double start, double stop, int n) : t0(start), t1(stop), steps(n) {
        if (!(stop > start)) {
            throw std::invalid_argument("TimeGrid: t1 must exceed t0");
        }
        if (n < 1) {
            throw std::invalid_argument("TimeGrid: steps must be >= 1");
        }
    }

    double dt() const { return (t1 - t0) / steps; }
    double midpoint(int k) const { return t0 + (k + 0.5) * dt(); }
};

using Generator = std::function<ComplexMatrix(double)>;

inline double max_abs(const ComplexMatrix &a) {
    return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff();
}

inline void require_square(const ComplexMatrix &a, const char *who) {
    if (a.rows() != a.cols()) {
        throw std::invalid_argument(std::string(who) + ": matrix is not square");
    }
}

/// max |A - A^dagger|, entrywise.
inline double hermitian_defect(const ComplexMatrix &a) {
    require_square(a, "hermitian_defect");
    return max_abs(a - a.adjoint());
}

/// max |A + A^dagger|, entrywise.
inline double skew_defect(const ComplexMatrix &a) {
    require_square(a, "skew_defect");
    return max_abs(a + a.adjoint());
}

/// max |U U^dagger - I|, entrywise.
inline double unitarity_defect(const ComplexMatrix &u) {
    require_square(u, "unitarity_defect");
    return max_abs(u * u.adjoint() - ComplexMatrix::Identity(u.rows(), u.cols()));
}

/// Spectral norm (largest singular value).
inline double spectral_norm(const ComplexMatrix &a) {
    if (a.size() == 0) {
        return 0.0;
    }
    Eigen::JacobiSVD<ComplexMatrix> svd(a);
    return svd.singularValues()(0);
}

/// Kronecker product with `a` as the slow (most significant) index.
inline ComplexMatrix kron(const ComplexMatrix &a, const ComplexMatrix &b) {
    ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

inline ComplexVector kron(const ComplexVector &a, const ComplexVector &b) {
    ComplexVector out(a.size() * b.size());
    for (Eigen::Index i = 0; i < a.size(); ++i) {
        out.segment(i * b.size(), b.size()) = a(i) * b;
    }
    return out;
}

namespace detail {

// exp(A) for Hermitian A (imaginary_unit == false) or exp(i A) for Hermitian A
// (imaginary_unit == true), via the spectral decomposition.
inline ComplexMatrix expm_hermitian(const ComplexMatrix &herm, bool imaginary_unit) {
    ComplexMatrix sym = 0.5 * (herm + herm.adjoint());
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(sym);
    if (eig.info() != Eigen::Success) {
        throw std::runtime_error("expm: eigendecomposition failed");
    }
    const RealVector &lam = eig.eigenvalues();
    ComplexVector phases(lam.size());
    for (Eigen::Index k = 0; k < lam.size(); ++k) {
        phases(k) = imaginary_unit ? std::exp(kI * lam(k)) : Complex(std::exp(lam(k)), 0.0);
    }
    const ComplexMatrix &v = eig.eigenvectors();
    return v * phases.asDiagonal() * v.adjoint();
}

}  // namespace detail

/// Matrix exponential e^A.
///
/// Hermitian and skew-Hermitian inputs (defect <= 1e-12) go through an
/// eigendecomposition so unitarity of e^{S} is preserved to round-off;
/// everything else uses Pade scaling-and-squaring.
inline ComplexMatrix expm(const ComplexMatrix &a) {
    require_square(a, "expm");
    if (a.rows() > kMaxDenseDim) {
        throw std::invalid_argument("expm: dimension above " + std::to_string(kMaxDenseDim));
    }
    if (a.rows() == 0) {
        return a;
    }
    if (skew_defect(a) <= 1e-12) {
        // a = i * herm with herm = -i a.
        return detail::expm_hermitian(-kI * a, true);
    }
    if (hermitian_defect(a) <= 1e-12) {
        return detail::expm_hermitian(a, false);
    }
    return a.exp();
}

/// Time-ordered exponential T exp(int gen) by the exponential midpoint rule.
/// Later factors multiply on the left: U = U_K ... U_1.
inline ComplexMatrix time_ordered_propagator(const Generator &gen, const TimeGrid &grid) {
    const double dt = grid.dt();
    ComplexMatrix u;
    for (int k = 0; k < grid.steps; ++k) {
        ComplexMatrix g = gen(grid.midpoint(k));
        require_square(g, "time_ordered_propagator");
        if (k == 0) {
            u = ComplexMatrix::Identity(g.rows(), g.cols());
        } else if (g.rows() != u.rows()) {
            throw std::invalid_argument("time_ordered_propagator: generator dimension changed");
        }
        u = expm(g * dt) * u;
    }
    return u;
}

/// Same product as time_ordered_propagator, applied to a single vector.
inline ComplexVector propagate(const Generator &gen, const TimeGrid &grid, ComplexVector v) {
    const double dt = grid.dt();
    for (int k = 0; k < grid.steps; ++k) {
        ComplexMatrix g = gen(grid.midpoint(k));
        require_square(g, "propagate");
        if (g.rows() != v.size()) {
            throw std::invalid_argument("propagate: generator/vector dimension mismatch");
        }
        v = expm(g * dt) * v;
    }
    return v;
}

inline void require_positive_real(const ComplexVector &d, const char *who) {
    for (Eigen::Index i = 0; i < d.size(); ++i) {
        if (d(i).imag() != 0.0 || !(d(i).real() > 0.0)) {
            throw std::domain_error(std::string(who) + ": entries must be real and strictly positive");
        }
    }
}

/// diag(sqrt(d_i)) for a strictly positive real vector d.
inline ComplexMatrix matrix_sqrt_diag(const ComplexVector &d) {
    require_positive_real(d, "matrix_sqrt_diag");
    ComplexVector s(d.size());
    for (Eigen::Index i = 0; i < d.size(); ++i) {
        s(i) = std::sqrt(d(i).real());
    }
    return s.asDiagonal();
}

/// diag(1/sqrt(d_i)) for a strictly positive real vector d.
inline ComplexMatrix matrix_inv_sqrt_diag(const ComplexVector &d) {
    require_positive_real(d, "matrix_inv_sqrt_diag");
    ComplexVector s(d.size());
    for (Eigen::Index i = 0; i < d.size(); ++i) {
        s(i) = 1.0 / std::sqrt(d(i).real());
    }
    return s.asDiagonal();
}

/// Principal square root of a positive semidefinite Hermitian matrix.
/// Eigenvalues below zero (round-off) are clamped.
inline ComplexMatrix psd_sqrt(const ComplexMatrix &a) {
    require_square(a, "psd_sqrt");
    ComplexMatrix sym = 0.5 * (a + a.adjoint());
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(sym);
    RealVector lam = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    const ComplexMatrix &v = eig.eigenvectors();
    return v * lam.cast<Complex>().asDiagonal() * v.adjoint();
}

}  // namespace qdil
