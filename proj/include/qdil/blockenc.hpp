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

// Block-encodings as circuits: U_init, U_D, U_R, U_thetaF and the total
// generator I (x) H + i thetaF_h (x) K, plus dense stand-ins for H and K.

#include <qdil/circuits.hpp>
#include <qdil/dilation.hpp>
#include <qdil/numerics.hpp>

#include <cmath>
#include <string>
#include <vector>

namespace qdil {

/// `circuit` block-encodes T when phase * <0_anc| U |0_anc> = T / alpha
/// (within epsilon) on the data qubits. data[0] is the least significant bit
/// of the block index.
struct BlockEncoding {
    Circuit circuit;
    double alpha = 1.0;
    std::vector<int> ancillas;
    std::vector<int> data;
    double epsilon = 0.0;
    Complex phase = 1.0;
    std::string name;

    int ancilla_count() const { return static_cast<int>(ancillas.size()); }
    int data_width() const { return static_cast<int>(data.size()); }
};

inline int ancillas_for(int m) {
    // ceil(log2(m + 1)) qubits index the m + 1 LCU terms.
    int a = 0;
    while ((1 << a) < m + 1) ++a;
    return a;
}

inline void require_m(int m, const char *who) {
    if (m < 1 || m > 20) throw std::invalid_argument(std::string(who) + ": m must be in [1, 20]");
}

/// phase * <0_anc| U |0_anc> restricted to the data register. Only the
/// 2^data columns are simulated, so this works above the unitary_of cap.
inline ComplexMatrix extract_block(const BlockEncoding &be) {
    const int w = be.circuit.width();
    std::vector<char> role(w, 0);
    for (int q : be.data) {
        if (q < 0 || q >= w || role[q]) throw std::invalid_argument("extract_block: bad data qubit " + std::to_string(q));
        role[q] = 1;
    }
    for (int q : be.ancillas) {
        if (q < 0 || q >= w) throw std::invalid_argument("extract_block: ancilla outside circuit");
        if (role[q] == 1) throw std::invalid_argument("extract_block: ancilla " + std::to_string(q) + " is also data");
        if (role[q] == 2) throw std::invalid_argument("extract_block: duplicate ancilla");
        role[q] = 2;
    }
    for (int q = 0; q < w; ++q) {
        if (!role[q]) throw std::invalid_argument("extract_block: qubit " + std::to_string(q) + " is neither data nor ancilla");
    }
    const int d = be.data_width();
    const Eigen::Index dim = Eigen::Index{1} << d;
    auto scatter = [&](Eigen::Index j) {
        std::uint64_t idx = 0;
        for (int b = 0; b < d; ++b) {
            if (j & (Eigen::Index{1} << b)) idx |= std::uint64_t{1} << be.data[b];
        }
        return idx;
    };
    ComplexMatrix block(dim, dim);
    for (Eigen::Index j = 0; j < dim; ++j) {
        const ComplexVector out = apply_circuit(be.circuit, basis_state(w, scatter(j)));
        for (Eigen::Index i = 0; i < dim; ++i) block(i, j) = be.phase * out(static_cast<Eigen::Index>(scatter(i)));
    }
    return block;
}

/// Spectral-norm distance between the encoded block and target / alpha.
inline double measured_block_defect(const BlockEncoding &be, const ComplexMatrix &target) {
    const ComplexMatrix b = extract_block(be);
    if (b.rows() != target.rows() || b.cols() != target.cols()) {
        throw std::invalid_argument("measured_block_defect: target shape does not match the data register");
    }
    return spectral_norm(b - target / be.alpha);
}

/// Moves a unit-modulus phase scalar into the circuit's global phase, so
/// the encoding can be controlled or combined.
inline BlockEncoding fold_phase(BlockEncoding be) {
    if (std::abs(std::abs(be.phase) - 1.0) > 1e-12) {
        throw std::invalid_argument("fold_phase: phase must have unit modulus");
    }
    be.circuit.add_global_phase(std::arg(be.phase));
    be.phase = 1.0;
    return be;
}

// ---------------------------------------------------------------- LCU pieces

/// LCU weights for H_init = sum_i (i/M)|i><i| = 1/2 I - sum_k 2^k/(2M) Z_k.
inline RealVector lcu_weights_init(int m) {
    require_m(m, "lcu_weights_init");
    const double M = std::ldexp(1.0, m) - 1.0;
    RealVector w(m + 1);
    w(0) = 0.5;
    for (int k = 0; k < m; ++k) w(k + 1) = std::ldexp(1.0, k) / (2.0 * M);
    return w;
}

/// LCU weights for D = theta diag(1, 3, ..., 2M+1) = theta((M+1) I - sum_k 2^k Z_k).
/// They do not depend on theta, which only enters alpha_D.
inline RealVector lcu_weights_d(int m) {
    require_m(m, "lcu_weights_d");
    const double M = std::ldexp(1.0, m) - 1.0;
    RealVector w(m + 1);
    w(0) = (M + 1.0) / (2.0 * M + 1.0);
    for (int k = 0; k < m; ++k) w(k + 1) = std::ldexp(1.0, k) / (2.0 * M + 1.0);
    return w;
}

/// Select over data (m qubits, low) and anc (a qubits, high): branch j = 0 is
/// I, branch j = k+1 is -Z_k. Each -Z_k is H MCX H on data qubit k; the
/// minus signs come from a phase flip on |0>_anc plus a global phase of pi.
inline Circuit select_circuit(int m) {
    require_m(m, "select_circuit");
    const int a = ancillas_for(m);
    Circuit c;
    const Register data = c.add_register("data", m);
    const Register anc = c.add_register("anc", a);
    for (int k = 0; k < m; ++k) {
        const int j = k + 1;
        std::vector<Control> ctl;
        for (int b = 0; b < a; ++b) ctl.push_back({anc[b], !((j >> b) & 1)});
        c.add(Gate::h(data[k]));
        c.add(Gate::mcx(ctl, data[k]));
        c.add(Gate::h(data[k]));
    }
    // -1 on branch j = 0 only.
    Gate flip = Gate::z(anc[0]);
    for (int b = 1; b < a; ++b) flip.controls.push_back({anc[b], true});
    c.add(Gate::x(anc[0]));
    c.add(flip);
    c.add(Gate::x(anc[0]));
    c.add_global_phase(kPi);
    return c;
}

inline RealVector padded_amplitudes(const RealVector &weights, int a) {
    RealVector amp = RealVector::Zero(Eigen::Index{1} << a);
    amp.head(weights.size()) = weights.cwiseSqrt();
    amp /= amp.norm();
    return amp;
}

/// Prep^dagger Select Prep over data + anc.
inline Circuit lcu_circuit(int m, const RealVector &weights) {
    const int a = ancillas_for(m);
    const Circuit prep = mottonen_prep(padded_amplitudes(weights, a));
    Circuit c;
    const Register data = c.add_register("data", m);
    const Register anc = c.add_register("anc", a);
    (void)data;
    c.append(prep, anc.qubits());
    c.append(select_circuit(m));
    c.append(adjoint(prep), anc.qubits());
    return c;
}

inline BlockEncoding lcu_encoding(Circuit c, double alpha, const std::string &name) {
    BlockEncoding be;
    be.alpha = alpha;
    be.data = c.reg("data").qubits();
    be.ancillas = c.reg("anc").qubits();
    be.circuit = std::move(c);
    be.name = name;
    return be;
}

/// (1, a, 0) encoding of H_init = diag(i / M).
inline BlockEncoding build_u_init(int m) {
    return lcu_encoding(lcu_circuit(m, lcu_weights_init(m)), 1.0, "U_init");
}

inline void require_theta(double theta, const char *who) {
    if (!(theta > 0.0) || theta > 2.0 / 7.0 + 1e-15) {
        throw std::invalid_argument(std::string(who) + ": theta must lie in (0, 2/7]");
    }
}

/// (theta (2M+1), a, 0) encoding of D = theta diag(1, 3, ..., 2M+1).
inline BlockEncoding build_u_d(int m, double theta) {
    require_theta(theta, "build_u_d");
    const double M = std::ldexp(1.0, m) - 1.0;
    return lcu_encoding(lcu_circuit(m, lcu_weights_d(m)), theta * (2.0 * M + 1.0), "U_D");
}

/// Dense D = theta diag(2i + 1).
inline ComplexMatrix d_matrix(int m, double theta) {
    const Eigen::Index n = Eigen::Index{1} << m;
    ComplexMatrix d = ComplexMatrix::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) d(i, i) = theta * static_cast<double>(2 * i + 1);
    return d;
}

/// R = sum_{i<M} |i><i+1| on 2^m points.
inline ComplexMatrix shift_matrix(int m) {
    const Eigen::Index n = Eigen::Index{1} << m;
    ComplexMatrix r = ComplexMatrix::Zero(n, n);
    for (Eigen::Index i = 0; i + 1 < n; ++i) r(i, i + 1) = 1.0;
    return r;
}

/// QFT-adder decrement on m+1 qubits, |j> -> |j-1 mod 2^{m+1}>. With qubit m
/// as the ancilla the projected block is R. The swapless QFT leaves Fourier
/// bit b on qubit m-b, so the phase layer puts RZ(-pi/2^q) on qubit q.
inline BlockEncoding build_u_r(int m) {
    require_m(m, "build_u_r");
    const int n = m + 1;
    Circuit c;
    c.add_register("data", m);
    c.add_register("anc", 1);
    const Circuit f = qft(n);
    c.append(f);
    double gphase = 0.0;
    for (int q = 0; q < n; ++q) {
        const double ang = -kPi / std::ldexp(1.0, q);
        c.add(Gate::rz(q, ang));
        gphase += ang / 2.0;
    }
    c.append(adjoint(f));
    c.add_global_phase(gphase);
    return lcu_encoding(std::move(c), 1.0, "U_R");
}

/// LCU of U_D U_R and U_R^dagger U_D on one control prepared by H then Z:
/// block = (D R - R^dagger D) / (2 alpha_D) = theta F_h / (alpha_D / 2).
/// Qubits: data[m], r1, d1[a], r2, d2[a], c; 2a + 3 ancillas.
inline BlockEncoding build_u_thetaF(int m, double theta) {
    require_theta(theta, "build_u_thetaF");
    const int a = ancillas_for(m);
    const BlockEncoding ud = build_u_d(m, theta);
    const BlockEncoding ur = build_u_r(m);

    Circuit c;
    const Register data = c.add_register("data", m);
    const Register r1 = c.add_register("r1", 1);
    const Register d1 = c.add_register("d1", a);
    const Register r2 = c.add_register("r2", 1);
    const Register d2 = c.add_register("d2", a);
    const Register ctl = c.add_register("c", 1);

    auto join = [](std::vector<int> x, const std::vector<int> &y) {
        x.insert(x.end(), y.begin(), y.end());
        return x;
    };
    const std::vector<int> r_map = join(data.qubits(), r1.qubits());
    const std::vector<int> d_map = join(data.qubits(), d1.qubits());

    c.add(Gate::h(ctl[0]));
    c.add(Gate::z(ctl[0]));
    c.append(controlled(ur.circuit, true), join(r_map, ctl.qubits()));
    c.append(controlled(ud.circuit, true), join(d_map, ctl.qubits()));
    c.add(Gate::swap(r1[0], r2[0]));
    for (int i = 0; i < a; ++i) c.add(Gate::swap(d1[i], d2[i]));
    c.append(controlled(ud.circuit, false), join(d_map, ctl.qubits()));
    c.append(controlled(adjoint(ur.circuit), false), join(r_map, ctl.qubits()));
    c.add(Gate::h(ctl[0]));

    BlockEncoding be;
    be.alpha = ud.alpha / 2.0;
    be.data = data.qubits();
    for (const auto &r : {r1, d1, r2, d2, ctl}) {
        for (int q : r.qubits()) be.ancillas.push_back(q);
    }
    be.circuit = std::move(c);
    be.name = "U_thetaF";
    return be;
}

/// Dense theta F_h = (D R - R^dagger D) / 4 on 2^m points. Also valid for
/// m = 1, where build_fh refuses M = 1.
inline ComplexMatrix theta_fh(int m, double theta) {
    const ComplexMatrix d = d_matrix(m, theta), r = shift_matrix(m);
    return (d * r - r.adjoint() * d) / 4.0;
}

// ------------------------------------------------------------ stand-ins

/// Exact (alpha, a, 0) encoding of a dense T on log2(dim) qubits. No
/// ancilla when T / alpha is unitary; otherwise the one-ancilla dilation
/// [[A, sqrt(I - A A^dagger)], [sqrt(I - A^dagger A), -A^dagger]] with the
/// ancilla as the top qubit.
inline BlockEncoding exact_encoding(const ComplexMatrix &t, double alpha, const std::string &name = "exact") {
    require_square(t, "exact_encoding");
    if (!(alpha > 0.0)) throw std::invalid_argument("exact_encoding: alpha must be positive");
    const Eigen::Index dim = t.rows();
    if (dim < 2 || (dim & (dim - 1)) != 0) {
        throw std::invalid_argument("exact_encoding: dimension must be a power of two >= 2");
    }
    int n = 0;
    while ((Eigen::Index{1} << n) < dim) ++n;
    const ComplexMatrix a = t / alpha;
    BlockEncoding be;
    be.alpha = alpha;
    be.name = name;
    std::vector<int> targets;
    for (int q = 0; q < n; ++q) targets.push_back(q);
    be.data = targets;
    if (unitarity_defect(a) <= 1e-12) {
        Circuit c;
        c.add_register("data", n);
        c.add(Gate::unitary(targets, a));
        be.circuit = std::move(c);
        return be;
    }
    if (spectral_norm(a) > 1.0 + 1e-12) {
        throw std::invalid_argument("exact_encoding: ||T|| / alpha exceeds 1");
    }
    const ComplexMatrix id = ComplexMatrix::Identity(dim, dim);
    ComplexMatrix u(2 * dim, 2 * dim);
    u.topLeftCorner(dim, dim) = a;
    u.topRightCorner(dim, dim) = psd_sqrt(id - a * a.adjoint());
    u.bottomLeftCorner(dim, dim) = psd_sqrt(id - a.adjoint() * a);
    u.bottomRightCorner(dim, dim) = -a.adjoint();
    Circuit c;
    c.add_register("data", n);
    c.add_register("anc", 1);
    targets.push_back(n);
    c.add(Gate::unitary(targets, u));
    be.ancillas = {n};
    be.circuit = std::move(c);
    return be;
}

// ------------------------------------------------------------ composition

/// U_a (x) U_b: b's qubits low, a's high, so the block is kron(block_a, block_b).
inline BlockEncoding tensor_be(const BlockEncoding &a, const BlockEncoding &b) {
    const int wb = b.circuit.width();
    Circuit c(wb + a.circuit.width());
    std::vector<int> amap(a.circuit.width()), bmap(wb);
    for (int i = 0; i < wb; ++i) bmap[i] = i;
    for (int i = 0; i < a.circuit.width(); ++i) amap[i] = wb + i;
    c.append(b.circuit, bmap);
    c.append(a.circuit, amap);
    BlockEncoding be;
    be.alpha = a.alpha * b.alpha;
    be.epsilon = a.epsilon + b.epsilon + a.epsilon * b.epsilon;
    be.phase = a.phase * b.phase;
    be.data = b.data;
    for (int q : a.data) be.data.push_back(wb + q);
    be.ancillas = b.ancillas;
    for (int q : a.ancillas) be.ancillas.push_back(wb + q);
    be.circuit = std::move(c);
    be.name = a.name + "(x)" + b.name;
    return be;
}

inline double prep_tot_angle(double alpha_h, double alpha_f, double alpha_k) {
    return 2.0 * std::atan(std::sqrt(alpha_f * alpha_k / alpha_h));
}

/// Encoding of I (x) H + i thetaF_h (x) K with alpha = alpha_H + alpha_F alpha_K.
/// Block index: system (n qubits, from H and K) low, F's register high.
/// Qubits: system[n], rh[m], aH, aF, aK, t.
inline BlockEncoding combine_total(const BlockEncoding &beH, const BlockEncoding &beK, const BlockEncoding &beF) {
    if (beH.data_width() != beK.data_width()) {
        throw std::invalid_argument("combine_total: H and K act on different system widths");
    }
    const BlockEncoding h = fold_phase(beH), k = fold_phase(beK), f = fold_phase(beF);
    const int n = h.data_width();
    Circuit c;
    const Register sys = c.add_register("system", n);
    const Register rh = c.add_register("rh", f.data_width());
    const Register ah = c.add_register("aH", h.ancilla_count());
    const Register af = c.add_register("aF", f.ancilla_count());
    const Register ak = c.add_register("aK", k.ancilla_count());
    const Register t = c.add_register("t", 1);

    auto qubit_map = [](const BlockEncoding &be, const Register &data, const Register &anc, int control) {
        std::vector<int> map(be.circuit.width() + 1, -1);
        for (int i = 0; i < be.data_width(); ++i) map[be.data[i]] = data[i];
        for (int i = 0; i < be.ancilla_count(); ++i) map[be.ancillas[i]] = anc[i];
        map.back() = control;
        return map;
    };

    const double alpha_fk = f.alpha * k.alpha;
    const double angle = prep_tot_angle(h.alpha, f.alpha, k.alpha);
    c.add(Gate::ry(t[0], angle));
    c.add(Gate::s(t[0]));
    c.append(controlled(h.circuit, true), qubit_map(h, sys, ah, t[0]));
    c.append(controlled(k.circuit, false), qubit_map(k, sys, ak, t[0]));
    c.append(controlled(f.circuit, false), qubit_map(f, rh, af, t[0]));
    c.add(Gate::ry(t[0], -angle));

    BlockEncoding be;
    be.alpha = h.alpha + alpha_fk;
    const double eps_fk = f.epsilon + k.epsilon + f.epsilon * k.epsilon;
    be.epsilon = (h.alpha * h.epsilon + alpha_fk * eps_fk) / be.alpha;
    be.data = sys.qubits();
    for (int q : rh.qubits()) be.data.push_back(q);
    for (const auto &r : {ah, af, ak, t}) {
        for (int q : r.qubits()) be.ancillas.push_back(q);
    }
    be.circuit = std::move(c);
    be.name = "U_tot";
    return be;
}

/// Dense target of combine_total: kron(I_F, H) + i kron(thetaF, K).
inline ComplexMatrix total_generator(const ComplexMatrix &h, const ComplexMatrix &k, const ComplexMatrix &theta_f) {
    const ComplexMatrix id = ComplexMatrix::Identity(theta_f.rows(), theta_f.cols());
    return kron(id, h) + kI * kron(theta_f, k);
}

}  // namespace qdil
