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


#include <qdil/qsvt.hpp>

#include <gtest/gtest.h>

using namespace qdil;

TEST(Phases, TableVerbatim) {
    const auto p3 = load_phases(3);
    ASSERT_EQ(p3.phases.size(), 3u);
    EXPECT_EQ(p3.phases[0], -1.945530537814129);
    EXPECT_EQ(p3.phases[1], -2.1688268601597227);
    EXPECT_EQ(load_phases(4).phases.front(), -0.17915969502442763);
    const auto p7 = load_phases(7);
    ASSERT_EQ(p7.phases.size(), 7u);
    for (int j = 1; j < 7; ++j) EXPECT_EQ(p7.phases[j], p7.phases[7 - j]) << j;
}

TEST(Phases, OutsideTable) {
    EXPECT_THROW(load_phases(2), std::invalid_argument);
    EXPECT_THROW(load_phases(8), std::invalid_argument);
}

TEST(Polynomial, MonomialOnGrid) {
    for (int beta = 3; beta <= 7; ++beta) EXPECT_LE(qsvt_polynomial_defect(load_phases(beta)), 1e-10) << beta;
}

TEST(Polynomial, EndpointsAndImaginaryPart) {
    for (int beta = 3; beta <= 7; ++beta) {
        const auto ph = load_phases(beta);
        EXPECT_NEAR(std::abs(qsvt_polynomial(ph, 1.0) - 1.0), 0.0, 1e-10);
        EXPECT_NEAR(std::abs(qsvt_polynomial(ph, 0.0)), 0.0, 1e-10);
        EXPECT_NEAR(qsvt_polynomial(ph, 0.37).imag(), 0.0, 1e-10);
    }
}

TEST(Sequence, DiagonalMonomialBlock) {
    const auto be = qsvt_sequence(build_u_init(2), load_phases(3));
    const ComplexMatrix b = extract_block(be);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            const double want = i == j ? std::pow(i / 3.0, 3) : 0.0;
            EXPECT_NEAR(std::abs(b(i, j) - want), 0.0, 1e-8) << i << "," << j;
        }
    EXPECT_NEAR(std::abs(b(3, 3) - 1.0), 0.0, 1e-10);
}

TEST(Sequence, OffDiagonalVanishes) {
    for (int beta = 3; beta <= 7; ++beta) {
        const ComplexMatrix b = extract_block(qsvt_sequence(build_u_init(3), load_phases(beta)));
        ComplexMatrix off = b;
        off.diagonal().setZero();
        EXPECT_LE(max_abs(off), 1e-9) << beta;
    }
}

TEST(Sequence, CountLaw) {
    const int m = 3;
    const auto ui = build_u_init(m);
    const auto base = count_resources(ui.circuit);
    const int a = ui.ancilla_count();
    for (int beta = 3; beta <= 7; ++beta) {
        const auto rc = count_resources(qsvt_sequence(ui, load_phases(beta)).circuit);
        // beta calls of U or U^dagger plus 2 beta C_Pi NOTs, beta RZ, two H.
        EXPECT_EQ(rc.total, beta * base.total + 2 * beta + beta + 2);
        EXPECT_EQ(rc["RZ"], beta + base["RZ"] * beta);
        const std::string cpi = Gate::mcx(std::vector<Control>(a, Control{0, true}), 1).label();
        EXPECT_EQ(rc[cpi], beta * base[cpi] + 2 * beta);
    }
}

TEST(Sequence, RejectsScaledEncoding) {
    EXPECT_THROW(qsvt_sequence(build_u_d(2, 0.2), load_phases(3)), std::invalid_argument);
}

TEST(Prep, FidelityAndSuccess) {
    for (int m = 2; m <= 5; ++m)
        for (int beta = 3; beta <= 7; ++beta) {
            const auto r = prepare_rh(m, beta);
            const int M = (1 << m) - 1;
            EXPECT_GE(r.fidelity, 1.0 - 1e-8) << m << " " << beta;
            EXPECT_GE(r.success_probability, r.success_lower_bound);
            EXPECT_LE(r.success_probability, 1.0);
            EXPECT_NEAR(r.success_probability, r.analytic_success_probability, 1e-12);
            EXPECT_EQ(r.postselected_state.size(), M + 1);
            EXPECT_NEAR(r.success_lower_bound, M / ((M + 1.0) * (2.0 * beta + 1.0)), 1e-15);
        }
}

TEST(Prep, MatchesTripleNormalization) {
    const auto r = prepare_rh(4, 3);
    const auto t = build_triple(3, 15);
    EXPECT_NEAR(r.analytic_success_probability, t.C * t.C / 16.0, 1e-12);
    EXPECT_LE((r.postselected_state - t.r).norm(), 1e-8);
}

TEST(Reflections, Matrices) {
    for (int m = 3; m <= 6; ++m) {
        const auto r = reflections(m);
        const ComplexMatrix chi = unitary_of(r.s_chi), s0 = unitary_of(r.s_0);
        const int N = 1 << m;
        for (int x = 0; x < N; ++x) {
            const int top = x >> (m - 2);
            const double want = (top == 1 || top == 2) ? -1.0 : 1.0;
            EXPECT_NEAR(std::abs(chi(x, x) - want), 0.0, 1e-12);
            EXPECT_NEAR(std::abs(s0(x, x) - (x == 0 ? -1.0 : 1.0)), 0.0, 1e-12);
        }
        const ComplexMatrix id = ComplexMatrix::Identity(N, N);
        EXPECT_LE(max_abs(chi * chi - id), 1e-12);
        EXPECT_LE(max_abs(s0 * s0 - id), 1e-12);
        const ComplexVector e0 = basis_state(m, 0);
        EXPECT_LE(max_abs(s0 - (id - 2.0 * e0 * e0.adjoint())), 1e-12);
    }
    EXPECT_THROW(reflections(2), std::invalid_argument);
}

TEST(Reflections, Resources) {
    for (int m = 3; m <= 8; ++m) {
        const auto rc = count_resources(reflections(m).s_0);
        EXPECT_EQ(rc.toffoli_equivalent, 2 * m - 5) << m;
        EXPECT_EQ(rc["X"], 2 * m);
        EXPECT_EQ(rc["H"], 2);
        EXPECT_EQ(count_resources(reflections(m).s_chi)["Z"], 2);
    }
}

TEST(Grover, IterateCount) {
    EXPECT_EQ(optimal_iterates(1.0), 0);
    EXPECT_EQ(optimal_iterates(0.25), 1);
    EXPECT_THROW(optimal_iterates(0.0), std::invalid_argument);
}

TEST(Grover, TwoDimensionalToy) {
    // A|0> = (sqrt(3)/2)|0> + (1/2)|1>, good = |1>, p = 1/4.
    const double th = std::asin(0.5);
    ComplexMatrix a(2, 2);
    a << std::cos(th), -std::sin(th), std::sin(th), std::cos(th);
    ComplexMatrix s_chi = ComplexMatrix::Identity(2, 2), s_0 = ComplexMatrix::Identity(2, 2);
    s_chi(1, 1) = -1.0;
    s_0(0, 0) = -1.0;
    const ComplexMatrix q = grover_iterate(a, s_chi, s_0);
    const ComplexVector psi = q * a.col(0);
    EXPECT_NEAR(std::norm(psi(1)), 1.0, 1e-10);
    EXPECT_THROW(grover_iterate(2.0 * a, s_chi, s_0), std::invalid_argument);
}

TEST(Grover, AlreadyGood) {
    const ComplexMatrix a = ComplexMatrix::Identity(2, 2);
    ComplexMatrix s_chi = ComplexMatrix::Identity(2, 2), s_0 = s_chi;
    s_chi(0, 0) = -1.0;
    s_0(0, 0) = -1.0;
    EXPECT_EQ(optimal_iterates(1.0), 0);
    const ComplexVector psi = grover_iterate(a, s_chi, s_0) * a.col(0);
    EXPECT_NEAR(std::abs(psi(0)), 1.0, 1e-15);
}

TEST(Grover, DenseIterateMatchesStatevectorAmplification) {
    const int m = 3, beta = 3;
    const Circuit prep = prep_rh_circuit(m, beta);
    const int w = prep.width();
    const ComplexMatrix a = unitary_of(prep);
    const ComplexMatrix s0 = unitary_of(reflections(w).s_0);
    ComplexMatrix good = ComplexMatrix::Identity(1 << w, 1 << w);
    for (int i = 0; i < (1 << m); ++i) good(i, i) = -1.0;
    const ComplexMatrix q = grover_iterate(a, good, s0);
    const auto amp = amplify_prep(m, beta);
    ComplexVector psi = a.col(0);
    for (int k = 0; k < amp.iterates; ++k) psi = q * psi;
    EXPECT_NEAR(psi.head(1 << m).squaredNorm(), amp.success_after, 1e-12);
}

TEST(Grover, AmplifiedPrep) {
    const auto small = amplify_prep(3, 3);
    EXPECT_GT(small.success_after, small.success_before);
    EXPECT_NEAR(small.fidelity_after, 1.0, 1e-8);
    // M + 1 = 16, beta = 3.
    const auto r = amplify_prep(4, 3);
    EXPECT_EQ(r.iterates, 1);
    EXPECT_GE(r.success_after, 0.9);
    EXPECT_NEAR(r.fidelity_after, 1.0, 1e-8);
    // Closed form sin^2((2k+1) asin sqrt(p)).
    const double th = std::asin(std::sqrt(r.success_before));
    EXPECT_NEAR(r.success_after, std::pow(std::sin(3 * th), 2), 1e-12);
}

TEST(Grover, BetaFourScheduleFallsShort) {
    // p = 0.138: the schedule picks k = 2, which lands at sin^2(5 theta) = 0.893.
    // The first k reaching 0.9 is 6, past a full half-turn of the rotation.
    const auto r = amplify_prep(4, 4);
    const double th = std::asin(std::sqrt(r.success_before));
    EXPECT_EQ(r.iterates, 2);
    EXPECT_NEAR(r.success_after, std::pow(std::sin(5 * th), 2), 1e-12);
    EXPECT_LT(r.success_after, 0.9);
    int first = -1;
    for (int k = 0; k < 20 && first < 0; ++k)
        if (std::pow(std::sin((2 * k + 1) * th), 2) >= 0.9) first = k;
    EXPECT_EQ(first, 6);
}
