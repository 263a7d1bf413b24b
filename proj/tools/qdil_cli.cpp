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


// qdil command line front end. JSON and CSV go to stdout, diagnostics to stderr.

#include <qdil/qdil.hpp>

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <iomanip>
#include <iostream>

using json = nlohmann::ordered_json;
using namespace qdil;

namespace {

json complex_vector(const ComplexVector &v) {
    json out = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back({v(i).real(), v(i).imag()});
    return out;
}

json counts_json(const ResourceCount &rc) {
    json g = json::object();
    for (const auto &[label, n] : rc.counts) g[label] = n;
    g["toffoli_equivalent"] = rc.toffoli_equivalent;
    g["total"] = rc.total;
    return g;
}

ComplexMatrix sigma_z() {
    ComplexMatrix z(2, 2);
    z << 1, 0, 0, -1;
    return z;
}

double theta_for(int beta) { return 2.0 / (2.0 * beta + 1.0); }

void triple_cmd(int M, int beta) {
    const auto t = build_triple(beta, M);
    const auto ops = build_operators(M);
    double lh = 0;
    for (int x : t.mid_indices) lh = std::max(lh, std::abs(t.evaluate(t.r, x) - 1.0));
    json j;
    j["M"] = M;
    j["beta"] = beta;
    j["theta"] = t.theta;
    j["C"] = t.C;
    j["C2"] = t.C * t.C;
    j["C2_lower"] = double(M) / (2 * beta + 1);
    j["C2_upper"] = double(M) / (2 * beta + 1) + 1.0;
    j["mid_indices"] = {t.mid_indices.front(), t.mid_indices.back()};
    j["lh_rh_defect"] = lh;
    j["fh_skew_defect"] = skew_defect(ops.Fh);
    j["fh_tilde_skew_defect"] = skew_defect(ops.FhTilde);
    j["sbp_residual"] = sbp_residual(ops.D, ops.Hnorm);
    j["gh_tilde_h_skew_defect"] = h_skew_defect(ops.GhTilde, ops.Hnorm);
    j["delta_outside_corners"] = delta_outside_corners(ops.delta());
    j["interior_consistency_defect"] = interior_consistency_defect(beta, M);
    j["consistency_bound"] = consistency_constant(beta) / (double(M) * M);
    j["circuit_compatible"] = t.circuit_compatible;
    j["warnings"] = t.warnings;
    std::cout << j.dump(2) << "\n";
}

struct Resolved {
    ProblemSpec problem;
    int beta;
    int M;
};

Resolved resolve(const std::string &path, std::optional<int> M, std::optional<int> beta) {
    const RunConfig cfg = load_config(path);
    Resolved r{cfg.problem, 3, 0};
    if (beta) r.beta = *beta;
    else if (cfg.beta) r.beta = *cfg.beta;
    if (M) r.M = *M;
    else if (cfg.M) r.M = *cfg.M;
    return r;
}

void evolve_cmd(const std::string &path, std::optional<int> M_flag, std::optional<int> beta_flag,
                std::optional<int> x_flag) {
    const Resolved r = resolve(path, M_flag, beta_flag);
    if (r.M == 0) throw std::invalid_argument("evolve: M missing (flag or config)");
    const int x = x_flag ? *x_flag : r.M / 2;
    const auto res = end_to_end(r.problem, r.beta, r.M, x);
    json j;
    j["M"] = r.M;
    j["beta"] = r.beta;
    j["x"] = x;
    j["T"] = r.problem.T;
    j["error"] = res.error;
    j["bound"] = res.bound;
    j["steps"] = res.steps;
    j["approx"] = complex_vector(res.approx);
    j["truth"] = complex_vector(res.truth);
    j["warnings"] = res.warnings;
    std::cout << j.dump(2) << "\n";
}

void scaling_cmd(const std::string &path, std::vector<int> Ms, std::optional<int> beta_flag) {
    const Resolved r = resolve(path, std::nullopt, beta_flag);
    for (const auto &w : bound_inputs(r.problem, r.beta, Ms.front()).warnings()) std::cerr << "warning: " << w << "\n";
    const auto rows = scaling_sweep(r.problem, r.beta, std::move(Ms));
    std::cout << "M,measured_error,bound_value,slope_estimate\n";
    for (const auto &row : rows)
        std::cout << row.M << "," << row.measured_error << "," << row.bound_value << "," << row.slope_estimate << "\n";
}

void resources_cmd(int m, int beta) {
    const double theta = theta_for(beta);
    std::cout << "component,gate,count\n";
    std::cout << resources_csv(count_resources(build_u_init(m).circuit), "U_init");
    std::cout << resources_csv(count_resources(select_circuit(m)), "Select_init");
    std::cout << resources_csv(count_resources(build_u_d(m, theta).circuit), "U_D");
    std::cout << resources_csv(count_resources(build_u_r(m).circuit), "U_R");
    std::cout << resources_csv(count_resources(build_u_thetaF(m, theta).circuit), "U_thetaF");
    std::cout << resources_csv(count_resources(qft(m + 1)), "QFT");
    if (m >= 2) std::cout << resources_csv(count_resources(prep_rh_circuit(m, beta)), "Prep_rh");
    if (m >= 3) std::cout << resources_csv(count_resources(reflections(m).s_0), "S_0");
}

void block_encode_cmd(int m, double theta, const std::string &which, bool expand) {
    BlockEncoding be;
    ComplexMatrix target;
    if (which == "init") {
        be = build_u_init(m);
        const Eigen::Index n = Eigen::Index{1} << m;
        target = ComplexMatrix::Zero(n, n);
        for (Eigen::Index i = 0; i < n; ++i) target(i, i) = double(i) / double(n - 1);
    } else if (which == "D") {
        be = build_u_d(m, theta);
        target = d_matrix(m, theta);
    } else if (which == "R") {
        be = build_u_r(m);
        target = shift_matrix(m);
    } else if (which == "thetaF") {
        be = build_u_thetaF(m, theta);
        target = theta_fh(m, theta);
    } else {
        // H = sigma_z and K = -I stand in for the system encodings
        const ComplexMatrix k = -ComplexMatrix::Identity(2, 2);
        be = combine_total(exact_encoding(sigma_z(), 1.0), exact_encoding(k, 1.0), build_u_thetaF(m, theta));
        target = total_generator(sigma_z(), k, theta_fh(m, theta));
    }
    std::cout << "# " << be.name << " alpha=" << std::setprecision(17) << be.alpha << " ancillas=" << be.ancilla_count()
              << "\n";
    std::cout << to_assembly(be.circuit, AssemblyOptions{expand});
    std::cout << "# resources\ngate,count\n" << resources_csv(count_resources(be.circuit));
    std::cout << "# block defect\n" << measured_block_defect(be, target) << "\n";
}

void prep_rh_cmd(int m, int beta, bool amplify) {
    const auto r = prepare_rh(m, beta);
    json j;
    j["m"] = m;
    j["beta"] = beta;
    j["fidelity"] = r.fidelity;
    j["success_probability"] = r.success_probability;
    j["analytic_success_probability"] = r.analytic_success_probability;
    j["success_lower_bound"] = r.success_lower_bound;
    j["iterates"] = 0;
    if (amplify) {
        const auto a = amplify_prep(m, beta);
        j["iterates"] = a.iterates;
        j["amplified_success_probability"] = a.success_after;
        j["amplified_fidelity"] = a.fidelity_after;
    }
    j["gate_counts"] = counts_json(count_resources(r.circuit));
    std::cout << j.dump(2) << "\n";
}

void operators_cmd(int M, const std::string &which) {
    const auto ops = build_operators(M);
    const std::map<std::string, ComplexMatrix> table = {
        {"D", ops.D},           {"H", ops.Hnorm},         {"P", ops.P},   {"Gh", ops.Gh},
        {"GhTilde", ops.GhTilde}, {"FhTilde", ops.FhTilde}, {"Fh", ops.Fh}, {"Delta", ops.delta()}};
    const ComplexMatrix &a = table.at(which);
    std::cout << "row,col,re,im\n";
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            if (a(i, j) != Complex(0.0))
                std::cout << i << "," << j << "," << a(i, j).real() << "," << a(i, j).imag() << "\n";
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"qdil: dilation operators, block encodings, QSVT state preparation"};
    app.require_subcommand(1);
    std::cout << std::setprecision(17);

    int M = 0, beta = 3, m = 1;
    std::optional<int> oM, obeta, ox;
    std::string config, which;
    std::vector<int> Ms;
    double theta = 2.0 / 7.0;
    bool amplify = false, expand = false;

    auto *triple = app.add_subcommand("triple", "structural report for the ancilla triple and operators");
    triple->add_option("--M", M, "grid size")->required();
    triple->add_option("--beta", beta, "monomial degree");

    auto *evolve = app.add_subcommand("evolve", "single dilated run, JSON report");
    evolve->add_option("--config", config, "config file")->required()->check(CLI::ExistingFile);
    evolve->add_option("--M", oM, "grid size (overrides config)");
    evolve->add_option("--beta", obeta, "monomial degree (overrides config)");
    evolve->add_option("--x", ox, "evaluation index, default M/2");

    auto *scaling = app.add_subcommand("scaling", "error against the global bound over several M");
    scaling->add_option("--config", config, "config file")->required()->check(CLI::ExistingFile);
    scaling->add_option("--M-list", Ms, "ascending powers of two")->required()->delimiter(',');
    scaling->add_option("--beta", obeta, "monomial degree (overrides config)");

    auto *resources = app.add_subcommand("resources", "gate counts of every circuit component");
    resources->add_option("--m", m, "data qubits")->required();
    resources->add_option("--beta", beta, "monomial degree, theta = 2/(2 beta + 1)");

    auto *block = app.add_subcommand("block-encode", "emit a block-encoding circuit with its counts and defect");
    block->add_option("--m", m, "data qubits")->required();
    block->add_option("--theta", theta, "theta in (0, 2/7]");
    block->add_option("--which", which, "component")->required()->check(
        CLI::IsMember({"init", "D", "R", "thetaF", "total"}));
    block->add_flag("--expand-mcx", expand, "rewrite multi-controlled X as Toffoli ladders");

    auto *prep = app.add_subcommand("prep-rh", "prepare |r_h> by QSVT, JSON report");
    prep->add_option("--m", m, "data qubits")->required();
    prep->add_option("--beta", beta, "monomial degree")->required();
    prep->add_flag("--amplify", amplify, "apply fixed-schedule amplitude amplification");

    auto *operators = app.add_subcommand("operators", "nonzero entries of a dilation operator as CSV");
    operators->add_option("--M", M, "grid size")->required();
    operators->add_option("--which", which, "operator")->required()->check(
        CLI::IsMember({"D", "H", "P", "Gh", "GhTilde", "FhTilde", "Fh", "Delta"}));

    CLI11_PARSE(app, argc, argv);

    try {
        if (*triple) triple_cmd(M, beta);
        else if (*evolve) evolve_cmd(config, oM, obeta, ox);
        else if (*scaling) scaling_cmd(config, Ms, obeta);
        else if (*resources) resources_cmd(m, beta);
        else if (*block) block_encode_cmd(m, theta, which, expand);
        else if (*prep) prep_rh_cmd(m, beta, amplify);
        else if (*operators) operators_cmd(M, which);
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
