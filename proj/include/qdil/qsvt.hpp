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

// Monomial QSVT on the U_init encoding, the |r_h> preparation circuit,
// postselection accounting and the amplitude-amplification reflections.

#include <qdil/blockenc.hpp>
#include <qdil/circuits.hpp>
#include <qdil/dilation.hpp>

#include <array>
#include <cmath>
#include <string>
#include <vector>

namespace qdil {

struct QsvtPhases {
    int beta = 0;
    std::vector<double> phases;  // phi_1 .. phi_beta
};

/// Tabulated phases for x^beta, beta in 3..7. No phase solver is shipped.
inline QsvtPhases load_phases(int beta) {
    static const std::array<std::vector<double>, 5> table = {{
        {-1.945530537814129, -2.1688268601597227, -2.1688268601597227},
        {-0.17915969502442763, -1.9634951462137356, -2.1770342706081474, -1.9634951462137356},
        {1.4843149138525842, -1.8078352881528696, -2.0759142978060185, -2.0759142978060185, -1.8078352881528696},
        {3.099514146455192, -1.7077184397821685, -1.9424558926637125, -2.0823497396925856, -1.9424558926637125,
         -1.7077184397821685},
        {-1.5913870208780079, -1.648016853210964, -1.8228649318945727, -2.0166094870933566, -2.0166094870933566,
         -1.8228649318945727, -1.648016853210964},
    }};
    if (beta < 3 || beta > 7) {
        throw std::invalid_argument("load_phases: beta = " + std::to_string(beta) +
                                    " has no tabulated phases (only 3..7); no phase solver is provided, "
                                    "use the dense dilation pipeline for other beta");
    }
    return {beta, table[beta - 3]};
}

/// Signal-processing sequence around a (1, a, 0) encoding with Hermitian
/// block: H on the signal qubit, then beta rounds of U or U^dagger
/// (alternating, U first) each followed by C_Pi NOT, RZ(2 phi), C_Pi NOT,
/// then H. Phases are consumed from phi_beta down to phi_1. C_Pi NOT is an X
/// on the signal with open controls on every ancilla of `be`. The signal
/// qubit is appended at index be.circuit.width().
inline BlockEncoding qsvt_sequence(const BlockEncoding &be, const QsvtPhases &phases) {
    if (std::abs(be.alpha - 1.0) > 1e-12) {
        throw std::invalid_argument("qsvt_sequence: encoding must have alpha = 1; rescale first");
    }
    if (static_cast<int>(phases.phases.size()) != phases.beta || phases.beta < 1) {
        throw std::invalid_argument("qsvt_sequence: phase list length must equal beta");
    }
    const BlockEncoding u = fold_phase(be);
    const int w = u.circuit.width();
    Circuit c(w + 1);
    for (const auto &r : u.circuit.registers()) c.name_register(r.name, r.offset, r.size);
    const Register sig = c.name_register("signal", w, 1);
    const Circuit u_dag = adjoint(u.circuit);

    std::vector<Control> pi;
    for (int q : u.ancillas) pi.push_back({q, true});
    const Gate cpi_not = Gate::mcx(pi, sig[0]);

    c.add(Gate::h(sig[0]));
    for (int t = 0; t < phases.beta; ++t) {
        c.append(t % 2 == 0 ? u.circuit : u_dag);
        c.add(cpi_not);
        c.add(Gate::rz(sig[0], 2.0 * phases.phases[phases.beta - 1 - t]));
        c.add(cpi_not);
    }
    c.add(Gate::h(sig[0]));

    BlockEncoding out;
    out.alpha = 1.0;
    out.data = u.data;
    out.ancillas = u.ancillas;
    out.ancillas.push_back(sig[0]);
    out.circuit = std::move(c);
    out.epsilon = 0.0;
    out.name = "QSVT(" + u.name + ")^" + std::to_string(phases.beta);
    return out;
}

/// One-qubit encoding of the scalar x: [[x, s], [s, -x]], s = sqrt(1 - x^2).
inline BlockEncoding scalar_encoding(double x) {
    if (!(x >= -1.0 && x <= 1.0)) throw std::invalid_argument("scalar_encoding: need |x| <= 1");
    const double s = std::sqrt(std::max(0.0, 1.0 - x * x));
    ComplexMatrix u(2, 2);
    u << x, s, s, -x;
    BlockEncoding be;
    be.circuit = Circuit(1);
    be.circuit.name_register("anc", 0, 1);
    be.circuit.add(Gate::unitary({0}, u));
    be.ancillas = {0};
    be.name = "scalar";
    return be;
}

/// p_Phi(x) from simulating the sequence on the scalar encoding.
inline Complex qsvt_polynomial(const QsvtPhases &phases, double x) {
    return extract_block(qsvt_sequence(scalar_encoding(x), phases))(0, 0);
}

/// max |p_Phi(x) - x^beta| over `points` equispaced x in [0, 1].
inline double qsvt_polynomial_defect(const QsvtPhases &phases, int points = 1001) {
    double worst = 0.0;
    for (int i = 0; i < points; ++i) {
        const double x = points == 1 ? 0.0 : static_cast<double>(i) / (points - 1);
        worst = std::max(worst, std::abs(qsvt_polynomial(phases, x) - std::pow(x, phases.beta)));
    }
    return worst;
}

struct PrepResult {
    int m = 0;
    int beta = 0;
    Circuit circuit;               // data[m] low, anc[a], signal
    ComplexVector postselected_state;  // normalized, length M + 1
    double fidelity = 0.0;
    double success_probability = 0.0;           // measured from the statevector
    double analytic_success_probability = 0.0;  // C^2 / (M + 1)
    double success_lower_bound = 0.0;           // M / ((M + 1)(2 beta + 1))
};

/// Data qubits are 0..m-1; everything above them is postselected on 0.
inline double good_probability(const ComplexVector &psi, int m) {
    const Eigen::Index keep = Eigen::Index{1} << m;
    return psi.head(keep).squaredNorm();
}

/// H^{(x) m} on the data register followed by the monomial QSVT on U_init.
inline Circuit prep_rh_circuit(int m, int beta) {
    const BlockEncoding seq = qsvt_sequence(build_u_init(m), load_phases(beta));
    Circuit c(seq.circuit.width());
    for (const auto &r : seq.circuit.registers()) c.name_register(r.name, r.offset, r.size);
    for (int q = 0; q < m; ++q) c.add(Gate::h(q));
    c.append(seq.circuit);
    return c;
}

inline PrepResult prepare_rh(int m, int beta) {
    if (m < 2) throw std::invalid_argument("prepare_rh: m must be >= 2");
    PrepResult res;
    res.m = m;
    res.beta = beta;
    res.circuit = prep_rh_circuit(m, beta);
    const ComplexVector out = simulate(res.circuit, basis_state(res.circuit.width(), 0));
    const int M = (1 << m) - 1;
    const ComplexVector post = out.head(M + 1);
    res.success_probability = post.squaredNorm();
    res.postselected_state = post / post.norm();
    const ComplexVector g = monomial_profile(beta, M);
    const ComplexVector r = g / g.norm();
    res.fidelity = std::norm(r.dot(res.postselected_state));
    res.analytic_success_probability = g.squaredNorm() / (M + 1);
    res.success_lower_bound = static_cast<double>(M) / ((M + 1.0) * (2.0 * beta + 1.0));
    return res;
}

struct Reflections {
    Circuit s_chi;  // -1 iff the two most significant bits differ
    Circuit s_0;    // I - 2|0><0|
};

/// Reflections on m qubits: S_chi = Z_{m-1} Z_{m-2}; S_0 = X-conjugated,
/// H-conjugated (m-1)-controlled X onto qubit 0.
inline Reflections reflections(int m) {
    if (m < 3) throw std::invalid_argument("reflections: m must be >= 3");
    Reflections r;
    r.s_chi = Circuit(m);
    r.s_chi.name_register("data", 0, m);
    r.s_chi.add(Gate::z(m - 1));
    r.s_chi.add(Gate::z(m - 2));

    r.s_0 = Circuit(m);
    r.s_0.name_register("data", 0, m);
    for (int q = 0; q < m; ++q) r.s_0.add(Gate::x(q));
    r.s_0.add(Gate::h(0));
    std::vector<Control> ctl;
    for (int q = 1; q < m; ++q) ctl.push_back({q, false});
    r.s_0.add(Gate::mcx(ctl, 0));
    r.s_0.add(Gate::h(0));
    for (int q = 0; q < m; ++q) r.s_0.add(Gate::x(q));
    return r;
}

/// Q = -A S_0 A^dagger S_chi.
inline ComplexMatrix grover_iterate(const ComplexMatrix &a, const ComplexMatrix &s_chi, const ComplexMatrix &s_0) {
    require_square(a, "grover_iterate");
    if (unitarity_defect(a) > 1e-10) throw std::invalid_argument("grover_iterate: A is not unitary");
    if (s_chi.rows() != a.rows() || s_0.rows() != a.rows() || s_chi.cols() != a.cols() || s_0.cols() != a.cols()) {
        throw std::invalid_argument("grover_iterate: reflection shape does not match A");
    }
    return -a * s_0 * a.adjoint() * s_chi;
}

/// k* = max(0, round(pi / (4 asin sqrt(p)) - 1/2)).
inline int optimal_iterates(double p) {
    if (!(p > 0.0 && p <= 1.0 + 1e-12)) throw std::invalid_argument("optimal_iterates: p must lie in (0, 1]");
    const double th = std::asin(std::sqrt(std::min(1.0, p)));
    return std::max(0, static_cast<int>(std::lround(kPi / (4.0 * th) - 0.5)));
}

struct AmplifiedPrep {
    int iterates = 0;
    double success_before = 0.0;
    double success_after = 0.0;
    double fidelity_after = 0.0;
};

/// Amplitude amplification of the postselection on the prep circuit. The
/// good subspace is "every non-data qubit reads 0"; its reflection is the
/// S_0 circuit on those qubits, and the |0> reflection is S_0 on all qubits.
/// Iterates act on the statevector, so there is no unitary_of width cap.
inline AmplifiedPrep amplify_prep(int m, int beta) {
    const PrepResult base = prepare_rh(m, beta);
    const Circuit &a = base.circuit;
    const int w = a.width();
    const Circuit a_dag = adjoint(a);
    const Circuit s0_all = reflections(w).s_0;
    Circuit s_good(w);
    {
        const Circuit s0_anc = reflections(w - m).s_0;
        std::vector<int> map(w - m);
        for (int i = 0; i < w - m; ++i) map[i] = m + i;
        s_good.append(s0_anc, map);
    }
    AmplifiedPrep res;
    res.success_before = base.success_probability;
    res.iterates = optimal_iterates(base.success_probability);
    ComplexVector psi = apply_circuit(a, basis_state(w, 0));
    for (int k = 0; k < res.iterates; ++k) {
        psi = apply_circuit(s_good, psi);
        psi = apply_circuit(a_dag, psi);
        psi = apply_circuit(s0_all, psi);
        psi = -apply_circuit(a, psi);
    }
    const int M = (1 << m) - 1;
    const ComplexVector post = psi.head(M + 1);
    res.success_after = post.squaredNorm();
    const ComplexVector g = monomial_profile(beta, M);
    res.fidelity_after = std::norm((g / g.norm()).dot(post / post.norm()));
    return res;
}

}  // namespace qdil
