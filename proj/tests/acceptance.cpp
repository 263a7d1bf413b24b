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


// Acceptance gate: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. Sub-checks that fail are named on the line.

#include <qdil/qdil.hpp>

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace qdil;

namespace {

struct Outcome {
    bool ok = true;
    std::vector<std::string> failed;
    std::ostringstream info;

    void check(bool cond, const std::string &what) {
        if (!cond) {
            ok = false;
            failed.push_back(what);
        }
    }
};

std::string sci(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

int run(int id, const std::string &title, double limit_s, const std::function<void(Outcome &)> &body) {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
        body(o);
    } catch (const std::exception &e) {
        o.check(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (limit_s > 0) o.check(secs < limit_s, "runtime " + sci(secs) + "s over " + sci(limit_s) + "s");
    std::printf("%s  %2d  %s  [%.2fs]  %s", o.ok ? "PASS" : "FAIL", id, title.c_str(), secs, o.info.str().c_str());
    if (!o.ok) {
        std::printf("  failed:");
        for (const auto &f : o.failed) std::printf(" {%s}", f.c_str());
    }
    std::printf("\n");
    std::fflush(stdout);
    return o.ok ? 0 : 1;
}

ComplexMatrix sigma_z() {
    ComplexMatrix z(2, 2);
    z << 1, 0, 0, -1;
    return z;
}

}  // namespace

int main() {
    int failures = 0;

    failures += run(1, "structural exactness", 1.0, [](Outcome &o) {
        double sbp = 0, hskew = 0, corner = 0, lh = 0, fskew = 0;
        for (int M = 8; M <= 1024; M *= 2) {
            const auto ops = build_operators(M);
            fskew = std::max(fskew, skew_defect(ops.Fh));
            sbp = std::max(sbp, sbp_residual(ops.D, ops.Hnorm));
            hskew = std::max(hskew, h_skew_defect(ops.GhTilde, ops.Hnorm));
            corner = std::max(corner, delta_outside_corners(ops.delta()));
            for (int beta = 0; beta <= 7; ++beta) {
                const auto t = build_triple(beta, M);
                // beta = 0 sits on the upper endpoint (C^2 = M + 1), so allow rounding
                const double c2 = t.C * t.C, lo = double(M) / (2 * beta + 1), slack = 1e-13 * c2;
                o.check(c2 >= lo - slack && c2 <= lo + 1.0 + slack,
                        "C^2 interval beta=" + std::to_string(beta) + " M=" + std::to_string(M));
                for (int x : t.mid_indices) lh = std::max(lh, std::abs(t.evaluate(t.r, x) - 1.0));
            }
        }
        o.check(fskew == 0.0, "skew_defect(F_h) = 0");
        o.check(sbp <= 1e-14, "SBP residual");
        o.check(hskew <= 1e-12, "H-skewness of G~_h");
        o.check(corner == 0.0, "Delta_h corner support");
        o.check(lh <= 1e-12, "<l_h|r_h> = 1");
        o.info << "M=8..1024 sbp=" << sci(sbp) << " hskew=" << sci(hskew) << " lh=" << sci(lh);
    });

    failures += run(2, "interior consistency <= C(theta) h^2", 5.0, [](Outcome &o) {
        double worst_ratio = 0;
        for (int beta : {3, 4, 5})
            for (int M = 32; M <= 512; M *= 2) {
                const double h = 1.0 / M;
                const double r = interior_consistency_defect(beta, M) / (consistency_constant(beta) * h * h);
                worst_ratio = std::max(worst_ratio, r);
                o.check(r <= 1.0, "beta=" + std::to_string(beta) + " M=" + std::to_string(M));
            }
        o.info << "beta=3..5 M=32..512 max defect/(C h^2)=" << sci(worst_ratio);
    });

    failures += run(3, "finite propagation", 5.0, [](Outcome &o) {
        double outside = 0, ratio = 0;
        for (int M : {8, 16}) {
            const ComplexMatrix f = build_fh(M);
            for (int k = 0; k <= M; ++k) {
                const auto p = finite_propagation_check(f, k);
                outside = std::max(outside, p.max_outside_band);
                ratio = std::max(ratio, p.max_entry / std::pow(double(M), k));
            }
        }
        o.check(outside == 0.0, "entries outside band");
        o.check(ratio <= 1.0, "max entry <= h^-k");
        o.info << "M=8,16 k<=M outside=" << sci(outside) << " max entry/h^-k=" << sci(ratio);
    });

    failures += run(4, "block-encoding equivalence", 30.0, [](Outcome &o) {
        const double theta = 2.0 / 7.0;
        double worst = 0;
        for (int m = 1; m <= 3; ++m) {
            const double M = (1 << m) - 1;
            const Eigen::Index n = Eigen::Index{1} << m;
            ComplexMatrix hi = ComplexMatrix::Zero(n, n);
            for (Eigen::Index i = 0; i < n; ++i) hi(i, i) = static_cast<double>(i) / M;
            const auto ui = build_u_init(m);
            const auto ud = build_u_d(m, theta);
            const auto ur = build_u_r(m);
            const auto uf = build_u_thetaF(m, theta);
            const double e[] = {max_abs(extract_block(ui) - hi),
                                max_abs(extract_block(ud) - d_matrix(m, theta) / ud.alpha),
                                max_abs(extract_block(ur) - shift_matrix(m)),
                                max_abs(extract_block(uf) - theta_fh(m, theta) / uf.alpha)};
            const char *names[] = {"U_init", "U_D", "U_R", "U_thetaF"};
            for (int i = 0; i < 4; ++i) {
                worst = std::max(worst, e[i]);
                o.check(e[i] <= 1e-9, std::string(names[i]) + " m=" + std::to_string(m));
            }
            o.check(ud.alpha == theta * (2 * M + 1), "alpha_D law m=" + std::to_string(m));
            o.check(uf.alpha == theta * (2 * M + 1) / 2, "alpha_thetaF law m=" + std::to_string(m));
        }
        o.info << "m=1..3 worst block error=" << sci(worst);
    });

    failures += run(5, "gate-count claims", 0.0, [](Outcome &o) {
        const RealVector amp = padded_amplitudes(lcu_weights_init(7), 3);
        const auto prep = count_resources(mottonen_prep(amp));
        o.check(prep["CNOT"] == 6 && prep["RY"] == 7, "Prep(a=3) 6 CNOT + 7 RY");
        for (int m = 4; m <= 7; ++m) {
            const int a = ancillas_for(m);
            o.check(count_resources(select_circuit(m)).toffoli_equivalent == m * (2 * a - 3),
                    "Select_init m(2a-3) at m=" + std::to_string(m));
        }
        for (int m = 0; m <= 6; ++m) {
            const auto q = count_resources(qft(m + 1));
            o.check(q["CPHASE"] == m * (m + 1) / 2 && q["H"] == m + 1 && q.total == q["CPHASE"] + q["H"],
                    "QFT(m+1) m=" + std::to_string(m));
        }
        for (int m = 3; m <= 8; ++m) {
            o.check(count_resources(reflections(m).s_0).toffoli_equivalent == 2 * m - 5,
                    "S_0 2m-5 at m=" + std::to_string(m));
        }
        o.info << "prep " << prep["CNOT"] << " CNOT/" << prep["RY"] << " RY; Select_init(m=7) "
               << count_resources(select_circuit(7)).toffoli_equivalent << " Toffoli";
    });

    failures += run(6, "QSVT table phases", 10.0, [](Outcome &o) {
        double worst = 0;
        for (int beta = 3; beta <= 7; ++beta) {
            const double d = qsvt_polynomial_defect(load_phases(beta), 1001);
            worst = std::max(worst, d);
            o.check(d <= 1e-10, "beta=" + std::to_string(beta));
        }
        o.info << "beta=3..7 max |p(x)-x^beta|=" << sci(worst);
    });

    failures += run(7, "state preparation", 60.0, [](Outcome &o) {
        const std::pair<int, int> cases[] = {{3, 3}, {4, 3}, {4, 4}};
        for (auto [m, beta] : cases) {
            const std::string tag = "(" + std::to_string(m) + "," + std::to_string(beta) + ")";
            const auto r = prepare_rh(m, beta);
            o.check(r.fidelity >= 1 - 1e-8, tag + " fidelity");
            o.check(r.success_probability >= r.success_lower_bound, tag + " p lower bound");
            o.check(std::abs(r.success_probability - r.analytic_success_probability) <= 1e-12, tag + " p = C^2/(M+1)");
            const auto a = amplify_prep(m, beta);
            o.check(a.success_after >= 0.9, tag + " amplified p=" + sci(a.success_after) + " after k=" +
                                                std::to_string(a.iterates));
            o.info << tag << " p=" << sci(r.success_probability) << "->" << sci(a.success_after) << " ";
        }
    });

    failures += run(8, "global error bound", 120.0, [](Outcome &o) {
        const double theta = 2.0 / 7.0;
        const double T = 0.9 / (8.0 * std::exp(1.0) * theta);
        const auto rows = scaling_sweep(scalar_problem(Kappa::constant(1.0), T), 3, {32, 64, 128, 256});
        for (const auto &r : rows) {
            o.check(r.measured_error <= r.bound_value, "M=" + std::to_string(r.M) + " error <= bound");
            o.info << "M=" << r.M << ":" << sci(r.measured_error) << "<=" << sci(r.bound_value) << " ";
        }
        const double slope = rows.back().slope_estimate;
        o.info << "slope=" << sci(slope);
        o.check(slope >= -1.8 && slope <= -1.2, "slope " + sci(slope) + " outside [-1.8, -1.2]");
    });

    failures += run(9, "unitary-limit reduction", 0.0, [](Outcome &o) {
        ProblemSpec p;
        p.N = 2;
        p.H = sigma_z();
        p.K = ComplexMatrix::Zero(2, 2);
        p.x0 = ComplexVector(2);
        p.x0 << std::sqrt(0.5), Complex(0, std::sqrt(0.5));
        p.T = 1.3;
        double worst = 0;
        for (int M : {8, 15, 64, 255, 511}) {
            const DilatedRun run = dilated_run(p, 3, M);
            for (int x : mid_indices(M)) {
                const double e = (evaluate_at(run, p.N, x) - run.truth).norm();
                worst = std::max(worst, e);
                o.check(e <= 1e-10, "M=" + std::to_string(M) + " x=" + std::to_string(x));
            }
        }
        o.info << "M=8..511 all mid x, worst error=" << sci(worst);
    });

    failures += run(10, "oracle cross-checks", 0.0, [](Outcome &o) {
        std::mt19937 rng(10);
        std::normal_distribution<double> nd;
        RealVector amp(8);
        amp << 1, 2, 3, 4, 5, 6, 7, 8;
        const std::vector<std::pair<std::string, Circuit>> families = {
            {"mottonen", mottonen_prep(amp.normalized())},
            {"qft", qft(5)},
            {"select", select_circuit(7)},
            {"U_init", build_u_init(3).circuit},
            {"U_D", build_u_d(3, 0.25).circuit},
            {"U_R", build_u_r(3).circuit},
            {"U_thetaF", build_u_thetaF(2, 2.0 / 7.0).circuit},
            {"U_tot", combine_total(exact_encoding(sigma_z(), 1.0), exact_encoding(-sigma_z() * sigma_z(), 1.0),
                                    build_u_thetaF(1, 2.0 / 7.0))
                          .circuit},
            {"qsvt", qsvt_sequence(build_u_init(3), load_phases(5)).circuit},
            {"prep_rh", prep_rh_circuit(4, 3)},
            {"S_chi", reflections(6).s_chi},
            {"S_0", reflections(6).s_0},
        };
        double worst = 0;
        for (const auto &[name, c] : families) {
            const ComplexMatrix u = unitary_of(c);
            for (int k = 0; k < 10; ++k) {
                ComplexVector v(u.rows());
                for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = Complex(nd(rng), nd(rng));
                v.normalize();
                const double e = (simulate(c, v) - u * v).norm();
                worst = std::max(worst, e);
                o.check(e <= 1e-10, name);
            }
        }
        ComplexMatrix a(3, 3);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) a(i, j) = Complex(nd(rng), nd(rng)) * 0.3;
        const Generator gen = [&](double) { return a; };
        const double inv = max_abs(time_ordered_propagator(gen, TimeGrid(0, 1, 1)) -
                                   time_ordered_propagator(gen, TimeGrid(0, 1, 100)));
        o.check(inv <= 1e-12, "constant-generator invariance");
        o.info << families.size() << " families x 10 states worst=" << sci(worst) << " propagator invariance=" << sci(inv);
    });

    std::printf("%d of 10 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
