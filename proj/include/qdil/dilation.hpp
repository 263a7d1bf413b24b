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

// The discrete dilation triple: SBP difference operator, the split and
// penalized generators, the l2-skew stencil F_h, the ancilla profile |r_h>
// and the mid-interval evaluation functional <l_h|.

#include <qdil/numerics.hpp>

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace qdil {

struct SbpPair {
    ComplexMatrix D;
    ComplexMatrix Hnorm;
};

struct DilationOperators {
    int M = 0;
    double h = 0.0;
    ComplexMatrix D;
    ComplexMatrix Hnorm;
    ComplexMatrix P;
    ComplexMatrix Gh;
    ComplexMatrix GhTilde;
    ComplexMatrix FhTilde;
    ComplexMatrix Fh;

    ComplexMatrix delta() const { return Fh - FhTilde; }
};

inline bool is_power_of_two(std::uint64_t n) { return n != 0 && (n & (n - 1)) == 0; }

inline void require_grid(int M, int min_m, const char *who) {
    if (M < min_m) {
        throw std::invalid_argument(std::string(who) + ": need M >= " + std::to_string(min_m));
    }
}

inline SbpPair build_sbp(int M) {
    require_grid(M, 2, "build_sbp");
    const double h = 1.0 / M;
    const double inv_h = static_cast<double>(M);
    const Eigen::Index n = M + 1;
    SbpPair out{ComplexMatrix::Zero(n, n), ComplexMatrix::Zero(n, n)};
    out.D(0, 0) = -inv_h;
    out.D(0, 1) = inv_h;
    for (Eigen::Index i = 1; i < M; ++i) {
        out.D(i, i - 1) = -0.5 * inv_h;
        out.D(i, i + 1) = 0.5 * inv_h;
    }
    out.D(M, M - 1) = -inv_h;
    out.D(M, M) = inv_h;
    for (Eigen::Index i = 0; i < n; ++i) {
        out.Hnorm(i, i) = (i == 0 || i == M) ? 0.5 * h : h;
    }
    return out;
}

/// P = diag(p_0, ..., p_M) with p_j = j/M.
inline ComplexVector grid_nodes(int M) {
    ComplexVector p(M + 1);
    for (int j = 0; j <= M; ++j) {
        p(j) = static_cast<double>(j) / M;
    }
    return p;
}

inline void require_shape(const ComplexMatrix &a, int M, const char *who) {
    if (a.rows() != M + 1 || a.cols() != M + 1) {
        throw std::invalid_argument(std::string(who) + ": expected (M+1)x(M+1) operand");
    }
}

/// G_h = (P D + D P) / 2.
inline ComplexMatrix build_gh(const ComplexMatrix &D, const ComplexMatrix &Hnorm, int M) {
    require_grid(M, 2, "build_gh");
    require_shape(D, M, "build_gh");
    require_shape(Hnorm, M, "build_gh");
    const ComplexVector p = grid_nodes(M);
    return 0.5 * (p.asDiagonal() * D + D * p.asDiagonal());
}

/// G~_h = G_h - (1/2) H^{-1} e_M e_M^T. The right-boundary penalty makes the
/// generator H-skew on the whole space.
inline ComplexMatrix build_gh_tilde(const ComplexMatrix &Gh, const ComplexMatrix &Hnorm, int M) {
    require_shape(Gh, M, "build_gh_tilde");
    require_shape(Hnorm, M, "build_gh_tilde");
    if (Hnorm(M, M) == Complex(0.0)) {
        throw std::domain_error("build_gh_tilde: Hnorm is singular");
    }
    ComplexMatrix out = Gh;
    out(M, M) -= 0.5 / Hnorm(M, M);
    return out;
}

/// F~_h = H^{1/2} G~_h H^{-1/2}.
inline ComplexMatrix build_fh_tilde(const ComplexMatrix &GhTilde, const ComplexMatrix &Hnorm) {
    require_square(GhTilde, "build_fh_tilde");
    const ComplexVector d = Hnorm.diagonal();
    require_positive_real(d, "build_fh_tilde");
    if (d.size() != GhTilde.rows()) {
        throw std::invalid_argument("build_fh_tilde: shape mismatch");
    }
    // Entry (i, j) scales by sqrt(d_i / d_j). Interior ratios are exactly 1
    // and the corner ratios sqrt(2), sqrt(1/2) differ by an exact factor 2,
    // so the result is skew to the last bit.
    ComplexMatrix f = GhTilde;
    for (Eigen::Index i = 0; i < f.rows(); ++i) {
        for (Eigen::Index j = 0; j < f.cols(); ++j) {
            if (f(i, j) != 0.0) {
                f(i, j) *= std::sqrt(d(i).real() / d(j).real());
            }
        }
    }
    return f;
}

/// The implemented stencil: (F_h)_{j,j+1} = (2j+1)/4 = -(F_h)_{j+1,j}.
inline ComplexMatrix build_fh(int M) {
    require_grid(M, 2, "build_fh");
    ComplexMatrix f = ComplexMatrix::Zero(M + 1, M + 1);
    for (int j = 0; j < M; ++j) {
        const double v = (2.0 * j + 1.0) / 4.0;
        f(j, j + 1) = v;
        f(j + 1, j) = -v;
    }
    return f;
}

inline DilationOperators build_operators(int M) {
    DilationOperators ops;
    ops.M = M;
    ops.h = 1.0 / M;
    auto [D, Hn] = build_sbp(M);
    ops.D = std::move(D);
    ops.Hnorm = std::move(Hn);
    ops.P = grid_nodes(M).asDiagonal();
    ops.Gh = build_gh(ops.D, ops.Hnorm, M);
    ops.GhTilde = build_gh_tilde(ops.Gh, ops.Hnorm, M);
    ops.FhTilde = build_fh_tilde(ops.GhTilde, ops.Hnorm);
    ops.Fh = build_fh(M);
    return ops;
}

/// max |Hnorm D + D^T Hnorm - diag(-1, 0, ..., 0, 1)|.
inline double sbp_residual(const ComplexMatrix &D, const ComplexMatrix &Hnorm) {
    const Eigen::Index n = D.rows();
    ComplexMatrix b = ComplexMatrix::Zero(n, n);
    b(0, 0) = -1.0;
    b(n - 1, n - 1) = 1.0;
    const ComplexVector hd = Hnorm.diagonal();
    ComplexMatrix hdm = hd.asDiagonal() * D;
    return max_abs(hdm + hdm.transpose() - b);
}

/// max |Hnorm G + G^dagger Hnorm|, optionally restricted to the leading
/// `leading` rows and columns.
inline double h_skew_defect(const ComplexMatrix &G, const ComplexMatrix &Hnorm, Eigen::Index leading = -1) {
    const ComplexVector hd = Hnorm.diagonal();
    ComplexMatrix hg = hd.asDiagonal() * G;
    ComplexMatrix s = hg + hg.adjoint();
    if (leading >= 0) {
        return max_abs(s.topLeftCorner(leading, leading));
    }
    return max_abs(s);
}

/// Largest |Delta_ij| outside the index blocks {0,1}^2 and {M-1,M}^2.
inline double delta_outside_corners(const ComplexMatrix &delta) {
    const Eigen::Index M = delta.rows() - 1;
    double worst = 0.0;
    for (Eigen::Index i = 0; i <= M; ++i) {
        for (Eigen::Index j = 0; j <= M; ++j) {
            const bool top = i <= 1 && j <= 1;
            const bool bottom = i >= M - 1 && j >= M - 1;
            if (!top && !bottom) {
                worst = std::max(worst, std::abs(delta(i, j)));
            }
        }
    }
    return worst;
}

/// Ancilla profile |r_h> and its normalization, together with the set of
/// evaluation indices.
struct AncillaTriple {
    int beta = 0;
    double theta = 0.0;
    int M = 0;
    ComplexVector r;
    double C = 0.0;
    std::vector<int> mid_indices;
    bool circuit_compatible = false;  // M + 1 is a power of two
    std::vector<std::string> warnings;

    /// <l_h| v for the evaluation index x: C (M/x)^beta v_x.
    Complex evaluate(const ComplexVector &v, int x) const {
        return C * std::pow(static_cast<double>(M) / x, beta) * v(x);
    }
};

inline double theta_of_beta(int beta) { return 2.0 / (2.0 * beta + 1.0); }

/// g_j = (j/M)^beta with 0^0 = 1.
inline ComplexVector monomial_profile(int beta, int M) {
    ComplexVector g(M + 1);
    for (int j = 0; j <= M; ++j) {
        g(j) = (beta == 0) ? 1.0 : std::pow(static_cast<double>(j) / M, beta);
    }
    return g;
}

/// {x : ceil(M/4) <= x <= floor(3M/4)}.
inline std::vector<int> mid_indices(int M) {
    std::vector<int> out;
    const int lo = (M + 3) / 4;
    const int hi = (3 * M) / 4;
    for (int x = lo; x <= hi; ++x) {
        out.push_back(x);
    }
    return out;
}

inline AncillaTriple build_triple(int beta, int M) {
    if (beta < 0) {
        throw std::invalid_argument("build_triple: beta must be >= 0");
    }
    require_grid(M, 4, "build_triple");
    AncillaTriple t;
    t.beta = beta;
    t.theta = theta_of_beta(beta);
    t.M = M;
    const ComplexVector g = monomial_profile(beta, M);
    t.C = g.norm();
    t.r = g / t.C;
    t.mid_indices = mid_indices(M);
    t.circuit_compatible = is_power_of_two(static_cast<std::uint64_t>(M) + 1);
    if (!t.circuit_compatible) {
        t.warnings.push_back("M+1 = " + std::to_string(M + 1) +
                             " is not a power of two; the triple has no circuit realization");
    }
    return t;
}

struct MomentDefect {
    double defect = 0.0;
    bool in_window = true;  // k <= M/4
};

/// |<l_h| (theta F_h)^k |r_h> - 1| at evaluation index x, computed on the
/// unnormalized profile g = C r.
inline MomentDefect moment_defect(const ComplexMatrix &Fh, const AncillaTriple &t, int k, int x) {
    if (k < 0) {
        throw std::invalid_argument("moment_defect: k must be >= 0");
    }
    if (x <= 0 || x > t.M) {
        throw std::invalid_argument("moment_defect: evaluation index out of range");
    }
    ComplexVector v = monomial_profile(t.beta, t.M);
    for (int i = 0; i < k; ++i) {
        v = t.theta * (Fh * v);
    }
    MomentDefect out;
    out.defect = std::abs(std::pow(static_cast<double>(t.M) / x, t.beta) * v(x) - 1.0);
    out.in_window = 4 * k <= t.M;
    return out;
}

struct PropagationCheck {
    double max_outside_band = 0.0;
    double max_entry = 0.0;
};

/// Dense F_h^k: the largest entry with |i-j| > k and the largest entry overall.
inline PropagationCheck finite_propagation_check(const ComplexMatrix &Fh, int k) {
    if (k < 0) {
        throw std::invalid_argument("finite_propagation_check: k must be >= 0");
    }
    ComplexMatrix pw = ComplexMatrix::Identity(Fh.rows(), Fh.cols());
    for (int i = 0; i < k; ++i) {
        pw = pw * Fh;
    }
    PropagationCheck out;
    for (Eigen::Index i = 0; i < pw.rows(); ++i) {
        for (Eigen::Index j = 0; j < pw.cols(); ++j) {
            const double a = std::abs(pw(i, j));
            out.max_entry = std::max(out.max_entry, a);
            if (std::abs(i - j) > k) {
                out.max_outside_band = std::max(out.max_outside_band, a);
            }
        }
    }
    return out;
}

/// C(theta) = theta/12 * beta (beta - 1) (2 beta - 1).
inline double consistency_constant(int beta) {
    return theta_of_beta(beta) / 12.0 * beta * (beta - 1.0) * (2.0 * beta - 1.0);
}

/// max over interior nodes of theta |(F_h g)_i - (F g)(p_i)| with g = p^beta
/// and (F g)(p) = (beta + 1/2) p^beta.
inline double interior_consistency_defect(int beta, int M) {
    const ComplexMatrix Fh = build_fh(M);
    const ComplexVector g = monomial_profile(beta, M);
    const ComplexVector fg = Fh * g;
    const double theta = theta_of_beta(beta);
    double worst = 0.0;
    for (int i = 1; i < M; ++i) {
        const double exact = (beta + 0.5) * std::pow(static_cast<double>(i) / M, beta);
        worst = std::max(worst, theta * std::abs(fg(i) - exact));
    }
    return worst;
}

}  // namespace qdil
