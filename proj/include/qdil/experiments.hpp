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

// End-to-end dilation runs and the error-analysis experiments: ideal,
// discrete and boundary-forced ancilla profiles, the global bound, and
// convergence sweeps over M.

#include <qdil/dilation.hpp>
#include <qdil/numerics.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

namespace qdil {

/// kappa(t) = a + b t (b = 0 for a constant).
struct Kappa {
    double a = 1.0;
    double b = 0.0;

    static Kappa constant(double c) { return {c, 0.0}; }
    static Kappa linear(double a, double b) { return {a, b}; }

    double operator()(double t) const { return a + b * t; }
    bool is_constant() const { return b == 0.0; }
    double max_on(double t0, double t1) const { return std::max((*this)(t0), (*this)(t1)); }
    double min_on(double t0, double t1) const { return std::min((*this)(t0), (*this)(t1)); }
};

/// x' = (-i H + kappa(t) K) x on N dimensions, K Hermitian and <= 0.
struct ProblemSpec {
    int N = 1;
    ComplexMatrix H;
    ComplexMatrix K;
    Kappa kappa;
    ComplexVector x0;
    double T = 1.0;

    /// max over [0, T] of ||kappa(t) K||.
    double k_max() const { return kappa.max_on(0.0, T) * spectral_norm(K); }

    ComplexMatrix generator(double t) const { return -kI * H + kappa(t) * K; }

    void validate() const {
        if (N < 1) throw std::invalid_argument("ProblemSpec: N must be >= 1");
        if (H.rows() != N || H.cols() != N || K.rows() != N || K.cols() != N || x0.size() != N) {
            throw std::invalid_argument("ProblemSpec: H, K and x0 must all have dimension N");
        }
        if (hermitian_defect(H) > 1e-12) throw std::invalid_argument("ProblemSpec: H is not Hermitian");
        if (hermitian_defect(K) > 1e-12) throw std::invalid_argument("ProblemSpec: K is not Hermitian");
        const Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(K, Eigen::EigenvaluesOnly);
        if (es.eigenvalues().maxCoeff() > 1e-12) {
            throw std::invalid_argument("ProblemSpec: K must be negative semidefinite");
        }
        if (std::abs(x0.norm() - 1.0) > 1e-12) throw std::invalid_argument("ProblemSpec: x0 must be a unit vector");
        if (!(T > 0.0)) throw std::invalid_argument("ProblemSpec: T must be positive");
        if (kappa.min_on(0.0, T) < 0.0) throw std::invalid_argument("ProblemSpec: kappa must be >= 0 on [0, T]");
    }
};

/// Scalar ancilla-only suite: N = 1, H = 0, K = -1.
inline ProblemSpec scalar_problem(Kappa kappa, double T) {
    ProblemSpec p;
    p.N = 1;
    p.H = ComplexMatrix::Zero(1, 1);
    p.K = -ComplexMatrix::Identity(1, 1);
    p.kappa = kappa;
    p.x0 = ComplexVector::Ones(1);
    p.T = T;
    return p;
}

struct BoundInputs {
    int beta = 3;
    double theta = 2.0 / 7.0;
    int M = 64;
    double T = 1.0;
    double K_max = 1.0;

    double C_theta() const { return theta / 12.0 * beta * (beta - 1.0) * (2.0 * beta - 1.0); }

    std::vector<std::string> warnings() const {
        std::vector<std::string> w;
        if (!(theta > 0.0) || theta > 2.0 / 7.0 + 1e-15) w.push_back("hypothesis violated: need 0 < theta <= 2/7");
        if (beta < 3) w.push_back("hypothesis violated: need beta >= 3");
        if (!(theta * K_max * T < 1.0 / (8.0 * std::exp(1.0)))) {
            w.push_back("hypothesis violated: need theta K_max T < 1/(8e)");
        }
        return w;
    }
};

/// 4^beta (C h^{3/2} + (2 + M (1 + C h^{3/2}) / (8e)) 2^{-M/4}).
inline double theorem_bound(const BoundInputs &b) {
    const double h = 1.0 / b.M;
    const double ch = b.C_theta() * std::pow(h, 1.5);
    return std::pow(4.0, b.beta) * (ch + (2.0 + b.M * (1.0 + ch) / (8.0 * std::exp(1.0))) * std::pow(2.0, -b.M / 4.0));
}

/// The boundary-mismatch part alone: (2 + M (1 + C h^{3/2}) / (8e)) 2^{-M/4}.
inline double boundary_mismatch_bound(const BoundInputs &b) {
    const double ch = b.C_theta() * std::pow(1.0 / b.M, 1.5);
    return (2.0 + b.M * (1.0 + ch) / (8.0 * std::exp(1.0))) * std::pow(2.0, -b.M / 4.0);
}

inline constexpr int kSimpsonPanels = 1 << 10;

/// u(T, p) = y_T p^beta with y_T = exp(-int_0^T kappa).
struct IdealProfile {
    int beta = 0;
    double y_T = 1.0;
    double operator()(double p) const { return y_T * (beta == 0 ? 1.0 : std::pow(p, beta)); }
};

inline IdealProfile ideal_profile(int beta, const Kappa &kappa, double T) {
    if (!(T >= 0.0)) throw std::invalid_argument("ideal_profile: T must be >= 0");
    double sum = 0.0;
    const int n = kSimpsonPanels;
    const double dt = T / n;
    for (int i = 0; i <= n; ++i) {
        const double k = kappa(i * dt);
        if (k < 0.0) throw std::invalid_argument("ideal_profile: kappa is negative on [0, T]");
        const double w = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
        sum += w * k;
    }
    return {beta, std::exp(-sum * dt / 3.0)};
}

inline int integration_steps(double T, double theta, double k_max, int M, double h_norm) {
    return std::max(64, static_cast<int>(std::ceil(16.0 * T * (theta * k_max * M + h_norm))));
}

/// u^d(T) from u' = -theta kappa(t) F_h u, u(0) = g.
inline ComplexVector discrete_profile(int beta, int M, const Kappa &kappa, double T) {
    require_grid(M, 8, "discrete_profile");
    const double theta = theta_of_beta(beta);
    const ComplexMatrix F = build_fh(M);
    const ComplexVector g = monomial_profile(beta, M);
    if (kappa.is_constant()) return expm(-theta * kappa.a * T * F) * g;
    const Generator gen = [&](double t) { return ComplexMatrix(-theta * kappa(t) * F); };
    const int steps = integration_steps(T, theta, kappa.max_on(0.0, T), M, 0.0);
    return propagate(gen, TimeGrid(0.0, T, steps), g);
}

/// u^ex(T): interior nodes driven with the exact right boundary value
/// y(t). F_h = [[A, a], [-a^dagger, 0]] with a = (2M-1)/4 e_{M-1}; the pair
/// (u_I, y) evolves under [[-theta kappa A, -theta kappa a], [0, -kappa]].
inline ComplexVector boundary_forced_profile(int beta, int M, const Kappa &kappa, double T) {
    require_grid(M, 8, "boundary_forced_profile");
    const double theta = theta_of_beta(beta);
    const ComplexMatrix F = build_fh(M);
    ComplexMatrix B = ComplexMatrix::Zero(M + 1, M + 1);
    B.topLeftCorner(M, M) = -theta * F.topLeftCorner(M, M);
    B(M - 1, M) = -theta * (2.0 * M - 1.0) / 4.0;
    B(M, M) = -1.0;
    const ComplexVector z0 = monomial_profile(beta, M);  // last entry 1 = y(0)
    if (kappa.is_constant()) return expm(kappa.a * T * B) * z0;
    const Generator gen = [&](double t) { return ComplexMatrix(kappa(t) * B); };
    const int steps = integration_steps(T, theta, kappa.max_on(0.0, T), M, 0.0);
    return propagate(gen, TimeGrid(0.0, T, steps), z0);
}

/// Node values of the three profiles at time T.
struct ErrorDecomposition {
    RealVector ideal;      // u(T, p_i)
    ComplexVector forced;  // u^ex
    ComplexVector discrete;  // u^d
};

inline ErrorDecomposition error_decomposition(int beta, int M, const Kappa &kappa, double T) {
    ErrorDecomposition e;
    const IdealProfile u = ideal_profile(beta, kappa, T);
    e.ideal.resize(M + 1);
    for (int i = 0; i <= M; ++i) e.ideal(i) = u(static_cast<double>(i) / M);
    e.forced = boundary_forced_profile(beta, M, kappa, T);
    e.discrete = discrete_profile(beta, M, kappa, T);
    return e;
}

struct EndToEndResult {
    ComplexVector approx;
    ComplexVector truth;
    double error = 0.0;
    double bound = 0.0;
    int steps = 0;
    std::vector<std::string> warnings;
};

/// The dilated state U_E(T, 0)(|r_h> (x) |x0>), ancilla index most significant.
struct DilatedRun {
    ComplexVector state;
    ComplexVector truth;
    AncillaTriple triple;
    int steps = 0;
};

inline DilatedRun dilated_run(const ProblemSpec &spec, int beta, int M) {
    spec.validate();
    const Eigen::Index dim = static_cast<Eigen::Index>(M + 1) * spec.N;
    if (dim > kMaxDenseDim) {
        throw std::invalid_argument("end_to_end: dilated dimension (M+1) N = " + std::to_string(dim) +
                                    " exceeds " + std::to_string(kMaxDenseDim));
    }
    DilatedRun run;
    run.triple = build_triple(beta, M);
    const double theta = run.triple.theta;
    const ComplexMatrix F = build_fh(M);
    const ComplexMatrix idM = ComplexMatrix::Identity(M + 1, M + 1);
    const ComplexMatrix hpart = -kI * kron(idM, spec.H);
    const ComplexMatrix fk = theta * kron(F, spec.K);
    const Generator gen = [&](double t) { return ComplexMatrix(hpart + spec.kappa(t) * fk); };
    const ComplexVector start = kron(run.triple.r, spec.x0);
    const Generator truth_gen = [&](double t) { return spec.generator(t); };
    if (spec.kappa.is_constant()) {
        run.steps = 1;
    } else {
        run.steps = integration_steps(spec.T, theta, spec.k_max(), M, spectral_norm(spec.H));
    }
    const TimeGrid grid(0.0, spec.T, run.steps);
    run.state = propagate(gen, grid, start);
    run.truth = propagate(truth_gen, grid, spec.x0);
    return run;
}

inline ComplexVector evaluate_at(const DilatedRun &run, int N, int x) {
    return run.triple.C * std::pow(static_cast<double>(run.triple.M) / x, run.triple.beta) *
           run.state.segment(static_cast<Eigen::Index>(x) * N, N);
}

inline BoundInputs bound_inputs(const ProblemSpec &spec, int beta, int M) {
    return {beta, theta_of_beta(beta), M, spec.T, spec.k_max()};
}

inline EndToEndResult end_to_end(const ProblemSpec &spec, int beta, int M, int x) {
    if (x < 1 || x > M) throw std::invalid_argument("end_to_end: x must lie in [1, M]");
    const DilatedRun run = dilated_run(spec, beta, M);
    EndToEndResult res;
    res.approx = evaluate_at(run, spec.N, x);
    res.truth = run.truth;
    res.error = (res.approx - res.truth).norm();
    res.steps = run.steps;
    const BoundInputs b = bound_inputs(spec, beta, M);
    res.bound = theorem_bound(b);
    res.warnings = b.warnings();
    if (4 * x < M || 4 * x > 3 * M) res.warnings.push_back("x is outside the mid-index window");
    return res;
}

struct ScalingRow {
    int M = 0;
    double measured_error = 0.0;
    double bound_value = 0.0;
    double slope_estimate = std::numeric_limits<double>::quiet_NaN();
    int worst_x = 0;
};

/// Least-squares slope of log(y) against log(x).
inline double loglog_slope(const std::vector<double> &x, const std::vector<double> &y) {
    const std::size_t n = x.size();
    if (n < 2 || y.size() != n) return std::numeric_limits<double>::quiet_NaN();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double lx = std::log(x[i]), ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

inline constexpr std::size_t kSlopeWindow = 4;

/// Worst mid-index error per M. Row i's slope is the fit over rows
/// max(0, i-3)..i (NaN for the first row), so the last row carries the fit
/// over the largest four M.
inline std::vector<ScalingRow> scaling_sweep(const ProblemSpec &spec, int beta, std::vector<int> Ms) {
    for (std::size_t i = 0; i < Ms.size(); ++i) {
        if (!is_power_of_two(static_cast<std::uint64_t>(Ms[i]))) {
            throw std::invalid_argument("scaling_sweep: M values must be powers of two");
        }
        if (i && Ms[i] <= Ms[i - 1]) throw std::invalid_argument("scaling_sweep: M values must be ascending");
    }
    std::vector<ScalingRow> rows;
    for (int M : Ms) {
        const DilatedRun run = dilated_run(spec, beta, M);
        ScalingRow row;
        row.M = M;
        for (int x : run.triple.mid_indices) {
            const double e = (evaluate_at(run, spec.N, x) - run.truth).norm();
            if (e > row.measured_error) {
                row.measured_error = e;
                row.worst_x = x;
            }
        }
        row.bound_value = theorem_bound(bound_inputs(spec, beta, M));
        rows.push_back(row);
    }
    for (std::size_t i = 1; i < rows.size(); ++i) {
        std::vector<double> xs, ys;
        for (std::size_t j = i + 1 >= kSlopeWindow ? i + 1 - kSlopeWindow : 0; j <= i; ++j) {
            xs.push_back(rows[j].M);
            ys.push_back(rows[j].measured_error);
        }
        rows[i].slope_estimate = loglog_slope(xs, ys);
    }
    return rows;
}

}  // namespace qdil
