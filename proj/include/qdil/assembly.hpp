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

// Plain-text circuit assembly, one gate per line. Grammar in
// docs/assembly.md. Open controls are written as X conjugations around a
// closed control, so the text only ever contains closed controls.

#include <qdil/circuits.hpp>

#include <cstdio>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

namespace qdil {

namespace detail {

inline std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::string export_name(const Gate &g) {
    const std::size_t k = g.controls.size();
    if (g.kind == GateKind::X) {
        if (k == 1) return "CNOT";
        if (k == 2) return "TOFFOLI";
        if (k >= 3) return "MCX";
        return "X";
    }
    if (g.kind == GateKind::Unitary) return k == 0 ? "U" : (k == 1 ? "CU" : "MCU");
    const std::string base = g.kind == GateKind::Phase ? "PHASE" : g.base_name();
    if (k == 0) return base;
    return (k == 1 ? "C" : "MC") + base;
}

}  // namespace detail

struct AssemblyOptions {
    // Rewrite MCX with k >= 3 controls into Toffoli ladders on extra work qubits.
    bool expand_mcx = false;
};

inline std::string to_assembly(const Circuit &circuit, AssemblyOptions opts = {}) {
    const Circuit c = opts.expand_mcx ? expand_mcx(circuit) : circuit;
    std::ostringstream os;
    os << "QUBITS " << c.width() << "\n";
    for (const auto &r : c.registers()) {
        if (r.size > 0) os << "REG " << r.name << " " << r.offset << " " << r.size << "\n";
    }
    if (c.global_phase() != 0.0) os << "GPHASE " << detail::fmt_double(c.global_phase()) << "\n";
    for (const Gate &g : c.gates()) {
        for (const auto &ctl : g.controls) {
            if (ctl.open) os << "X -> " << ctl.qubit << "\n";
        }
        os << detail::export_name(g);
        switch (g.kind) {
            case GateKind::RY:
            case GateKind::RZ:
            case GateKind::Phase: os << "(" << detail::fmt_double(g.angle) << ")"; break;
            case GateKind::Unitary: {
                // Row-major re,im pairs.
                os << "(";
                const auto &m = *g.matrix;
                for (Eigen::Index i = 0; i < m.rows(); ++i) {
                    for (Eigen::Index j = 0; j < m.cols(); ++j) {
                        if (i || j) os << ",";
                        os << detail::fmt_double(m(i, j).real()) << "," << detail::fmt_double(m(i, j).imag());
                    }
                }
                os << ")";
                break;
            }
            default: break;
        }
        for (const auto &ctl : g.controls) os << " " << ctl.qubit;
        os << " ->";
        for (int t : g.targets) os << " " << t;
        os << "\n";
        for (const auto &ctl : g.controls) {
            if (ctl.open) os << "X -> " << ctl.qubit << "\n";
        }
    }
    return os.str();
}

/// Parses the text produced by to_assembly. Controls come back closed.
inline Circuit parse_assembly(const std::string &text) {
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    Circuit c;
    bool have_width = false;
    auto fail = [&](const std::string &why) {
        throw std::invalid_argument("parse_assembly: line " + std::to_string(lineno) + ": " + why);
    };
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::string head;
        if (!(ls >> head)) continue;
        if (head == "QUBITS") {
            int w;
            if (have_width || !(ls >> w) || w < 0) fail("bad QUBITS line");
            c = Circuit(w);
            have_width = true;
            continue;
        }
        if (!have_width) fail("QUBITS must come first");
        if (head == "REG") {
            std::string name;
            int off, size;
            if (!(ls >> name >> off >> size)) fail("bad REG line");
            c.name_register(name, off, size);
            continue;
        }
        if (head == "GPHASE") {
            double g;
            if (!(ls >> g)) fail("bad GPHASE line");
            c.add_global_phase(g);
            continue;
        }
        std::string name = head;
        std::vector<double> args;
        if (auto open = head.find('('); open != std::string::npos) {
            // Angles may contain no spaces; re-join the rest of the token stream up to ')'.
            std::string rest = head.substr(open + 1);
            name = head.substr(0, open);
            while (rest.find(')') == std::string::npos) {
                std::string more;
                if (!(ls >> more)) fail("unterminated argument list");
                rest += more;
            }
            const auto close = rest.find(')');
            const std::string tail = rest.substr(close + 1);
            rest.erase(close);
            std::istringstream as(rest);
            std::string tok;
            while (std::getline(as, tok, ',')) {
                try {
                    args.push_back(std::stod(tok));
                } catch (const std::exception &) {
                    fail("bad number '" + tok + "'");
                }
            }
            if (!tail.empty()) fail("junk after ')'");
        }
        std::vector<int> controls, targets;
        bool arrow = false;
        std::string tok;
        while (ls >> tok) {
            if (tok == "->") {
                if (arrow) fail("two arrows");
                arrow = true;
                continue;
            }
            try {
                std::size_t used = 0;
                const int q = std::stoi(tok, &used);
                if (used != tok.size()) fail("bad qubit '" + tok + "'");
                (arrow ? targets : controls).push_back(q);
            } catch (const std::invalid_argument &e) {
                if (std::string(e.what()).rfind("parse_assembly", 0) == 0) throw;
                fail("bad qubit '" + tok + "'");
            }
        }
        if (!arrow || targets.empty()) fail("missing '-> targets'");

        if (name == "CNOT" || name == "TOFFOLI" || name == "MCX") name = "X";
        else if (name.rfind("MC", 0) == 0) name = name.substr(2);
        else if (name.size() > 1 && name[0] == 'C' && name != "CU") name = name.substr(1);
        else if (name == "CU") name = "U";

        Gate g;
        auto need_args = [&](std::size_t n) {
            if (args.size() != n) fail(name + " expects " + std::to_string(n) + " argument(s)");
        };
        if (name == "U") {
            const std::size_t dim = std::size_t{1} << targets.size();
            need_args(2 * dim * dim);
            ComplexMatrix m(dim, dim);
            for (std::size_t i = 0; i < dim; ++i) {
                for (std::size_t j = 0; j < dim; ++j) {
                    const std::size_t at = 2 * (i * dim + j);
                    m(i, j) = Complex(args[at], args[at + 1]);
                }
            }
            g = Gate::unitary(targets, m);
        } else if (name == "SWAP") {
            need_args(0);
            if (targets.size() != 2) fail("SWAP needs two targets");
            g = Gate::swap(targets[0], targets[1]);
        } else {
            if (targets.size() != 1) fail(name + " needs one target");
            static const std::map<std::string, GateKind> fixed = {
                {"H", GateKind::H}, {"X", GateKind::X}, {"Z", GateKind::Z}, {"S", GateKind::S}, {"SDG", GateKind::Sdg}};
            static const std::map<std::string, GateKind> rot = {
                {"RY", GateKind::RY}, {"RZ", GateKind::RZ}, {"PHASE", GateKind::Phase}};
            if (auto it = fixed.find(name); it != fixed.end()) {
                need_args(0);
                g = Gate::single(it->second, targets[0]);
            } else if (auto jt = rot.find(name); jt != rot.end()) {
                need_args(1);
                g = Gate::single(jt->second, targets[0], args[0]);
            } else {
                fail("unknown gate '" + head + "'");
            }
        }
        for (int q : controls) g.controls.push_back({q, false});
        try {
            c.add(std::move(g));
        } catch (const std::invalid_argument &e) {
            fail(e.what());
        }
    }
    if (!have_width) throw std::invalid_argument("parse_assembly: no QUBITS line");
    return c;
}

}  // namespace qdil
