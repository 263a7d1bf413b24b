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

// A small gate-model circuit IR with a dense statevector simulator.
//
// Qubit ordering is little-endian: qubit q contributes 2^q to the
// computational index. Every gate may carry any number of controls, each
// either closed (fires on |1>) or open (fires on |0>); CNOT, Toffoli, MCX
// and CPHASE are X and PHASE gates with one, two, k and one control.

#include <qdil/numerics.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <memory>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace qdil {

enum class GateKind { H, X, Z, S, Sdg, RY, RZ, Phase, Swap, Unitary };

struct Control {
    int qubit = 0;
    bool open = false;

    bool operator==(const Control &) const = default;
};

struct Gate {
    GateKind kind = GateKind::H;
    double angle = 0.0;
    std::vector<int> targets;
    std::vector<Control> controls;
    // Only for GateKind::Unitary; targets[0] is the least significant bit of
    // the matrix index.
    std::shared_ptr<const ComplexMatrix> matrix;

    static Gate single(GateKind k, int q, double angle = 0.0) {
        Gate g;
        g.kind = k;
        g.angle = angle;
        g.targets = {q};
        return g;
    }
    static Gate h(int q) { return single(GateKind::H, q); }
    static Gate x(int q) { return single(GateKind::X, q); }
    static Gate z(int q) { return single(GateKind::Z, q); }
    static Gate s(int q) { return single(GateKind::S, q); }
    static Gate ry(int q, double a) { return single(GateKind::RY, q, a); }
    static Gate rz(int q, double a) { return single(GateKind::RZ, q, a); }
    static Gate phase(int q, double a) { return single(GateKind::Phase, q, a); }
    static Gate cnot(int c, int t) { return x(t).with_control({c, false}); }
    static Gate toffoli(int c0, int c1, int t) { return x(t).with_control({c0, false}).with_control({c1, false}); }
    static Gate cphase(int c, int t, double a) { return phase(t, a).with_control({c, false}); }
    static Gate mcx(std::vector<Control> cs, int t) {
        Gate g = x(t);
        g.controls = std::move(cs);
        return g;
    }
    static Gate swap(int a, int b) {
        Gate g;
        g.kind = GateKind::Swap;
        g.targets = {a, b};
        return g;
    }
    static Gate unitary(std::vector<int> targets, ComplexMatrix m) {
        if (m.rows() != m.cols() || m.rows() != (Eigen::Index{1} << targets.size())) {
            throw std::invalid_argument("Gate::unitary: matrix size does not match target count");
        }
        Gate g;
        g.kind = GateKind::Unitary;
        g.targets = std::move(targets);
        g.matrix = std::make_shared<const ComplexMatrix>(std::move(m));
        return g;
    }

    Gate with_control(Control c) const {
        Gate g = *this;
        g.controls.push_back(c);
        return g;
    }

    Gate adjoint() const {
        Gate g = *this;
        switch (kind) {
            case GateKind::S: g.kind = GateKind::Sdg; break;
            case GateKind::Sdg: g.kind = GateKind::S; break;
            case GateKind::RY:
            case GateKind::RZ:
            case GateKind::Phase: g.angle = -angle; break;
            case GateKind::Unitary: g.matrix = std::make_shared<const ComplexMatrix>(matrix->adjoint()); break;
            default: break;
        }
        return g;
    }

    /// 2x2 matrix of a single-target kind.
    Eigen::Matrix2cd matrix2() const {
        Eigen::Matrix2cd u;
        const double r = 1.0 / std::sqrt(2.0);
        switch (kind) {
            case GateKind::H: u << r, r, r, -r; break;
            case GateKind::X: u << 0, 1, 1, 0; break;
            case GateKind::Z: u << 1, 0, 0, -1; break;
            case GateKind::S: u << 1, 0, 0, kI; break;
            case GateKind::Sdg: u << 1, 0, 0, -kI; break;
            case GateKind::RY: {
                const double c = std::cos(angle / 2), s = std::sin(angle / 2);
                u << c, -s, s, c;
                break;
            }
            case GateKind::RZ: u << std::exp(-kI * (angle / 2)), 0, 0, std::exp(kI * (angle / 2)); break;
            case GateKind::Phase: u << 1, 0, 0, std::exp(kI * angle); break;
            default: throw std::logic_error("Gate::matrix2: not a single-target kind");
        }
        return u;
    }

    std::string base_name() const {
        switch (kind) {
            case GateKind::H: return "H";
            case GateKind::X: return "X";
            case GateKind::Z: return "Z";
            case GateKind::S: return "S";
            case GateKind::Sdg: return "SDG";
            case GateKind::RY: return "RY";
            case GateKind::RZ: return "RZ";
            case GateKind::Phase: return "P";
            case GateKind::Swap: return "SWAP";
            case GateKind::Unitary: return "UNITARY";
        }
        return "?";
    }

    /// Resource-table label, e.g. "CNOT", "TOFFOLI", "MCX(4)", "CPHASE", "CRZ".
    std::string label() const {
        const std::size_t k = controls.size();
        if (kind == GateKind::X) {
            if (k == 0) return "X";
            if (k == 1) return "CNOT";
            if (k == 2) return "TOFFOLI";
            return "MCX(" + std::to_string(k) + ")";
        }
        if (kind == GateKind::Phase && k == 1) {
            return "CPHASE";
        }
        if (k == 0) return base_name();
        if (k == 1) return "C" + base_name();
        return "MC" + base_name() + "(" + std::to_string(k) + ")";
    }
};

struct Register {
    std::string name;
    int offset = 0;
    int size = 0;

    int operator[](int i) const { return offset + i; }
    std::vector<int> qubits() const {
        std::vector<int> q(size);
        for (int i = 0; i < size; ++i) q[i] = offset + i;
        return q;
    }
};

class Circuit {
public:
    Circuit() = default;
    explicit Circuit(int width) : width_(width) {
        if (width < 0) throw std::invalid_argument("Circuit: negative width");
    }

    int width() const { return width_; }
    const std::vector<Gate> &gates() const { return gates_; }
    const std::vector<Register> &registers() const { return registers_; }
    double global_phase() const { return global_phase_; }

    /// Appends a fresh register of `size` qubits at the top of the circuit.
    Register add_register(const std::string &name, int size) {
        if (size < 0) throw std::invalid_argument("add_register: negative size");
        for (const auto &r : registers_) {
            if (r.name == name) throw std::invalid_argument("add_register: duplicate register '" + name + "'");
        }
        Register r{name, width_, size};
        width_ += size;
        registers_.push_back(r);
        return r;
    }

    /// Names an existing qubit range; ranges may not overlap.
    Register name_register(const std::string &name, int offset, int size) {
        if (offset < 0 || size < 0 || offset + size > width_) {
            throw std::invalid_argument("name_register: range outside circuit");
        }
        for (const auto &r : registers_) {
            if (r.name == name) throw std::invalid_argument("name_register: duplicate register '" + name + "'");
            if (offset < r.offset + r.size && r.offset < offset + size) {
                throw std::invalid_argument("name_register: '" + name + "' overlaps '" + r.name + "'");
            }
        }
        Register r{name, offset, size};
        registers_.push_back(r);
        return r;
    }

    const Register &reg(const std::string &name) const {
        for (const auto &r : registers_) {
            if (r.name == name) return r;
        }
        throw std::out_of_range("Circuit: no register named '" + name + "'");
    }

    void add(Gate g) {
        validate(g);
        gates_.push_back(std::move(g));
    }

    void add_global_phase(double phi) { global_phase_ += phi; }

    /// Appends `sub` with its qubit i mapped to map[i].
    void append(const Circuit &sub, const std::vector<int> &map) {
        if (static_cast<int>(map.size()) != sub.width()) {
            throw std::invalid_argument("Circuit::append: qubit map has wrong length");
        }
        for (Gate g : sub.gates()) {
            for (int &t : g.targets) t = map[t];
            for (Control &c : g.controls) c.qubit = map[c.qubit];
            add(std::move(g));
        }
        global_phase_ += sub.global_phase();
    }

    /// Appends `sub` onto qubits 0..sub.width()-1.
    void append(const Circuit &sub) {
        std::vector<int> map(sub.width());
        for (int i = 0; i < sub.width(); ++i) map[i] = i;
        append(sub, map);
    }

private:
    void validate(const Gate &g) const {
        std::set<int> seen;
        auto check = [&](int q) {
            if (q < 0 || q >= width_) {
                throw std::invalid_argument("Circuit: qubit " + std::to_string(q) + " outside width " +
                                            std::to_string(width_));
            }
            if (!seen.insert(q).second) {
                throw std::invalid_argument("Circuit: gate " + g.label() + " touches qubit " + std::to_string(q) +
                                            " twice");
            }
        };
        const std::size_t want = g.kind == GateKind::Swap ? 2 : (g.kind == GateKind::Unitary ? g.targets.size() : 1);
        if (g.targets.empty() || g.targets.size() != want) {
            throw std::invalid_argument("Circuit: wrong number of targets for " + g.base_name());
        }
        for (int t : g.targets) check(t);
        for (const auto &c : g.controls) check(c.qubit);
        if (!std::isfinite(g.angle)) {
            throw std::invalid_argument("Circuit: non-finite gate angle");
        }
    }

    int width_ = 0;
    std::vector<Register> registers_;
    std::vector<Gate> gates_;
    double global_phase_ = 0.0;
};

inline Circuit adjoint(const Circuit &c) {
    Circuit out(c.width());
    for (const auto &r : c.registers()) out.name_register(r.name, r.offset, r.size);
    for (auto it = c.gates().rbegin(); it != c.gates().rend(); ++it) out.add(it->adjoint());
    out.add_global_phase(-c.global_phase());
    return out;
}

/// Controlled version of `c` on a new top qubit (index c.width()). Every gate
/// gains the control; the global phase becomes a phase gate on the control.
inline Circuit controlled(const Circuit &c, bool open = false) {
    Circuit out(c.width() + 1);
    for (const auto &r : c.registers()) out.name_register(r.name, r.offset, r.size);
    const int ctl = c.width();
    for (const Gate &g : c.gates()) out.add(g.with_control({ctl, open}));
    if (c.global_phase() != 0.0) {
        if (open) {
            // e^{i g} on |0>_c equals e^{i g} globally times e^{-i g} on |1>_c.
            out.add(Gate::phase(ctl, -c.global_phase()));
            out.add_global_phase(c.global_phase());
        } else {
            out.add(Gate::phase(ctl, c.global_phase()));
        }
    }
    return out;
}

namespace detail {

inline std::uint64_t bit(int q) { return std::uint64_t{1} << q; }

inline void control_mask(const Gate &g, std::uint64_t &mask, std::uint64_t &value) {
    mask = 0;
    value = 0;
    for (const auto &c : g.controls) {
        mask |= bit(c.qubit);
        if (!c.open) value |= bit(c.qubit);
    }
}

inline void apply_gate(ComplexVector &psi, const Gate &g) {
    const std::uint64_t dim = static_cast<std::uint64_t>(psi.size());
    std::uint64_t cmask, cval;
    control_mask(g, cmask, cval);
    if (g.kind == GateKind::Swap) {
        const std::uint64_t ba = bit(g.targets[0]), bb = bit(g.targets[1]);
        for (std::uint64_t i = 0; i < dim; ++i) {
            if ((i & ba) && !(i & bb) && (i & cmask) == cval) {
                std::swap(psi(i), psi((i & ~ba) | bb));
            }
        }
        return;
    }
    if (g.kind == GateKind::Unitary) {
        const std::size_t k = g.targets.size();
        const std::uint64_t sub = std::uint64_t{1} << k;
        std::uint64_t tmask = 0;
        for (int t : g.targets) tmask |= bit(t);
        std::vector<std::uint64_t> offs(sub);
        for (std::uint64_t s = 0; s < sub; ++s) {
            std::uint64_t o = 0;
            for (std::size_t b = 0; b < k; ++b) {
                if (s & (std::uint64_t{1} << b)) o |= bit(g.targets[b]);
            }
            offs[s] = o;
        }
        ComplexVector local(sub);
        for (std::uint64_t i = 0; i < dim; ++i) {
            if ((i & tmask) || (i & cmask) != cval) continue;
            for (std::uint64_t s = 0; s < sub; ++s) local(s) = psi(i | offs[s]);
            local = (*g.matrix) * local;
            for (std::uint64_t s = 0; s < sub; ++s) psi(i | offs[s]) = local(s);
        }
        return;
    }
    const Eigen::Matrix2cd u = g.matrix2();
    const std::uint64_t tb = bit(g.targets[0]);
    for (std::uint64_t i = 0; i < dim; ++i) {
        if ((i & tb) || (i & cmask) != cval) continue;
        const Complex a = psi(i), b = psi(i | tb);
        psi(i) = u(0, 0) * a + u(0, 1) * b;
        psi(i | tb) = u(1, 0) * a + u(1, 1) * b;
    }
}

}  // namespace detail

inline constexpr int kMaxSimulationWidth = 24;
inline constexpr int kMaxUnitaryWidth = 14;

/// Applies the circuit to `input` (length 2^width) without a norm check.
inline ComplexVector apply_circuit(const Circuit &c, ComplexVector psi) {
    if (c.width() > kMaxSimulationWidth) {
        throw std::invalid_argument("apply: circuit too wide to simulate");
    }
    if (psi.size() != (Eigen::Index{1} << c.width())) {
        throw std::invalid_argument("apply: state length does not match 2^width");
    }
    for (const Gate &g : c.gates()) detail::apply_gate(psi, g);
    if (c.global_phase() != 0.0) psi *= std::exp(kI * c.global_phase());
    return psi;
}

/// Runs the circuit on a unit-norm input state.
inline ComplexVector simulate(const Circuit &c, const ComplexVector &input) {
    if (std::abs(input.norm() - 1.0) > 1e-10) {
        throw std::invalid_argument("simulate: input state is not normalized");
    }
    return apply_circuit(c, input);
}

inline ComplexVector basis_state(int width, std::uint64_t index) {
    ComplexVector v = ComplexVector::Zero(Eigen::Index{1} << width);
    v(static_cast<Eigen::Index>(index)) = 1.0;
    return v;
}

inline ComplexMatrix unitary_of(const Circuit &c) {
    if (c.width() > kMaxUnitaryWidth) {
        throw std::invalid_argument("unitary_of: width above " + std::to_string(kMaxUnitaryWidth));
    }
    const Eigen::Index dim = Eigen::Index{1} << c.width();
    ComplexMatrix u(dim, dim);
    for (Eigen::Index j = 0; j < dim; ++j) {
        u.col(j) = apply_circuit(c, basis_state(c.width(), static_cast<std::uint64_t>(j)));
    }
    return u;
}

/// Moettoenen preparation of a real nonnegative state on `amplitudes.size()`
/// = 2^a qubits: one RY on the most significant qubit, then a uniformly
/// controlled RY per lower qubit, each built from 2^l RY and 2^l CNOT in
/// Gray-code order. Totals: 2^a - 1 RY and 2^a - 2 CNOT.
inline Circuit mottonen_prep(const RealVector &amplitudes) {
    const std::uint64_t n = static_cast<std::uint64_t>(amplitudes.size());
    if (n == 0 || (n & (n - 1)) != 0) {
        throw std::invalid_argument("mottonen_prep: length must be a power of two");
    }
    if ((amplitudes.array() < 0.0).any()) {
        throw std::invalid_argument("mottonen_prep: amplitudes must be nonnegative");
    }
    if (std::abs(amplitudes.norm() - 1.0) > 1e-10) {
        throw std::invalid_argument("mottonen_prep: amplitudes must have unit norm");
    }
    int a = 0;
    while ((std::uint64_t{1} << a) < n) ++a;
    Circuit c(a);
    c.name_register("prep", 0, a);
    if (a == 0) return c;

    auto gray = [](std::uint64_t i) { return i ^ (i >> 1); };
    for (int level = 0; level < a; ++level) {
        const int target = a - 1 - level;
        const std::uint64_t patterns = std::uint64_t{1} << level;
        const std::uint64_t block = std::uint64_t{1} << (a - level);
        // Rotation angle for each pattern of the higher (already prepared) qubits.
        std::vector<double> alpha(patterns);
        for (std::uint64_t p = 0; p < patterns; ++p) {
            const auto lo = amplitudes.segment(static_cast<Eigen::Index>(p * block), block / 2).norm();
            const auto hi = amplitudes.segment(static_cast<Eigen::Index>(p * block + block / 2), block / 2).norm();
            alpha[p] = 2.0 * std::atan2(hi, lo);
        }
        if (level == 0) {
            c.add(Gate::ry(target, alpha[0]));
            continue;
        }
        for (std::uint64_t i = 0; i < patterns; ++i) {
            double theta = 0.0;
            for (std::uint64_t p = 0; p < patterns; ++p) {
                const int parity = __builtin_popcountll(p & gray(i)) & 1;
                theta += parity ? -alpha[p] : alpha[p];
            }
            c.add(Gate::ry(target, theta / static_cast<double>(patterns)));
            const std::uint64_t changed = gray(i) ^ gray((i + 1) % patterns);
            const int b = __builtin_ctzll(changed);
            c.add(Gate::cnot(target + 1 + b, target));
        }
    }
    return c;
}

/// Quantum Fourier transform on n qubits: n H and n(n-1)/2 CPHASE.
///
/// Without swaps the output register is bit-reversed: the circuit maps |j> to
/// sum_k w^{jk} |rev(k)> / sqrt(N) with w = e^{2 pi i / N}. With swaps it is
/// exactly the DFT matrix.
inline Circuit qft(int n, bool swaps = false) {
    if (n < 1) throw std::invalid_argument("qft: need at least one qubit");
    Circuit c(n);
    c.name_register("qft", 0, n);
    for (int j = n - 1; j >= 0; --j) {
        c.add(Gate::h(j));
        for (int k = j - 1; k >= 0; --k) {
            c.add(Gate::cphase(k, j, kPi / static_cast<double>(std::uint64_t{1} << (j - k))));
        }
    }
    if (swaps) {
        for (int i = 0; i < n / 2; ++i) c.add(Gate::swap(i, n - 1 - i));
    }
    return c;
}

inline std::uint64_t bit_reverse(std::uint64_t x, int bits) {
    std::uint64_t r = 0;
    for (int b = 0; b < bits; ++b) {
        if (x & (std::uint64_t{1} << b)) r |= std::uint64_t{1} << (bits - 1 - b);
    }
    return r;
}

struct ResourceCount {
    std::map<std::string, long> counts;
    long toffoli_equivalent = 0;
    long total = 0;

    long operator[](const std::string &label) const {
        auto it = counts.find(label);
        return it == counts.end() ? 0 : it->second;
    }

    /// Number of gates acting on exactly two qubits (targets plus controls).
    long two_qubit = 0;
};

/// Per-label tallies. Toffoli equivalent: MCX with k >= 3 controls costs
/// 2k - 3 Toffolis (one clean ancilla), a plain Toffoli costs one.
inline ResourceCount count_resources(const Circuit &c) {
    ResourceCount rc;
    for (const Gate &g : c.gates()) {
        ++rc.counts[g.label()];
        ++rc.total;
        if (g.targets.size() + g.controls.size() == 2) ++rc.two_qubit;
        if (g.kind == GateKind::X) {
            const long k = static_cast<long>(g.controls.size());
            if (k == 2) rc.toffoli_equivalent += 1;
            if (k >= 3) rc.toffoli_equivalent += 2 * k - 3;
        }
    }
    return rc;
}

inline std::string resources_csv(const ResourceCount &rc, const std::string &component = "") {
    std::ostringstream os;
    const std::string prefix = component.empty() ? "" : component + ",";
    for (const auto &[label, n] : rc.counts) os << prefix << label << "," << n << "\n";
    os << prefix << "toffoli_equivalent," << rc.toffoli_equivalent << "\n";
    os << prefix << "total," << rc.total << "\n";
    return os.str();
}

/// Replaces every MCX with k >= 3 controls by the 2k - 3 Toffoli compute /
/// uncompute ladder. Adds max(k) - 2 clean work qubits in a register "work".
/// Open controls are turned into closed ones by X conjugation first.
inline Circuit expand_mcx(const Circuit &c) {
    std::size_t kmax = 0;
    for (const Gate &g : c.gates()) {
        if (g.kind == GateKind::X && g.controls.size() >= 3) kmax = std::max(kmax, g.controls.size());
    }
    const int extra = kmax >= 3 ? static_cast<int>(kmax) - 2 : 0;
    Circuit out(c.width());
    for (const auto &r : c.registers()) out.name_register(r.name, r.offset, r.size);
    const Register work = out.add_register("work", extra);
    for (const Gate &g : c.gates()) {
        if (!(g.kind == GateKind::X && g.controls.size() >= 3)) {
            out.add(g);
            continue;
        }
        for (const auto &ctl : g.controls) {
            if (ctl.open) out.add(Gate::x(ctl.qubit));
        }
        const int k = static_cast<int>(g.controls.size());
        std::vector<Gate> ladder;
        ladder.push_back(Gate::toffoli(g.controls[0].qubit, g.controls[1].qubit, work[0]));
        for (int i = 1; i <= k - 3; ++i) {
            ladder.push_back(Gate::toffoli(g.controls[i + 1].qubit, work[i - 1], work[i]));
        }
        for (const auto &t : ladder) out.add(t);
        out.add(Gate::toffoli(g.controls[k - 1].qubit, work[k - 3], g.targets[0]));
        for (auto it = ladder.rbegin(); it != ladder.rend(); ++it) out.add(*it);
        for (const auto &ctl : g.controls) {
            if (ctl.open) out.add(Gate::x(ctl.qubit));
        }
    }
    out.add_global_phase(c.global_phase());
    return out;
}

}  // namespace qdil
