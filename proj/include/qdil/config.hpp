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

// Flat "key = value" problem files for the CLI. Example:
//
//   # two-level damped system
//   N = 2
//   H = 1 0 0 -1
//   K = -0.25 -0.25 -0.25 -0.25
//   kappa = linear:1,0.5
//   T = 0.5
//   x0 = 0.7071067811865476 0.7071067811865476
//   beta = 3
//   M = 64
//
// Matrices are row-major; entries are separated by spaces or commas and may
// be complex: 2, -0.5, 3i, -i, 1+2i, 1.5e-3-4e-2i.

#include <qdil/experiments.hpp>

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>

namespace qdil {

struct RunConfig {
    ProblemSpec problem;
    std::optional<int> beta;
    std::optional<int> M;
};

namespace detail {

inline std::string trim(const std::string &s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

inline double parse_real(const std::string &tok, const std::string &what) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(tok, &used);
    } catch (const std::exception &) {
        used = 0;
    }
    if (used == 0 || used != tok.size() || !std::isfinite(v)) {
        throw std::invalid_argument("config: bad number '" + tok + "' in " + what);
    }
    return v;
}

}  // namespace detail

inline Complex parse_complex(const std::string &raw) {
    const std::string tok = detail::trim(raw);
    if (tok.empty()) throw std::invalid_argument("config: empty complex token");
    if (tok.back() != 'i') return detail::parse_real(tok, "'" + tok + "'");
    const std::string body = tok.substr(0, tok.size() - 1);
    // Split at the last sign that is not leading and not an exponent sign.
    std::size_t split = std::string::npos;
    for (std::size_t i = body.size(); i-- > 1;) {
        if ((body[i] == '+' || body[i] == '-') && body[i - 1] != 'e' && body[i - 1] != 'E') {
            split = i;
            break;
        }
    }
    const std::string re = split == std::string::npos ? "" : body.substr(0, split);
    std::string im = split == std::string::npos ? body : body.substr(split);
    if (im.empty() || im == "+") im = "1";
    if (im == "-") im = "-1";
    return {re.empty() ? 0.0 : detail::parse_real(re, "'" + tok + "'"), detail::parse_real(im, "'" + tok + "'")};
}

inline std::vector<Complex> parse_complex_list(const std::string &value) {
    std::string s = value;
    std::replace(s.begin(), s.end(), ',', ' ');
    std::istringstream in(s);
    std::vector<Complex> out;
    std::string tok;
    while (in >> tok) out.push_back(parse_complex(tok));
    return out;
}

inline Kappa parse_kappa(const std::string &value) {
    const std::string v = detail::trim(value);
    if (v.rfind("const:", 0) == 0) return Kappa::constant(detail::parse_real(detail::trim(v.substr(6)), "kappa"));
    if (v.rfind("linear:", 0) == 0) {
        const std::string rest = v.substr(7);
        const auto comma = rest.find(',');
        if (comma == std::string::npos) throw std::invalid_argument("config: kappa = linear:a,b needs two numbers");
        return Kappa::linear(detail::parse_real(detail::trim(rest.substr(0, comma)), "kappa"),
                             detail::parse_real(detail::trim(rest.substr(comma + 1)), "kappa"));
    }
    throw std::invalid_argument("config: kappa must be const:c or linear:a,b");
}

/// Missing keys: H = 0, K = 0, kappa = const:1, T = 1, x0 = e_0.
inline RunConfig parse_config(const std::string &text) {
    std::map<std::string, std::string> kv;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw std::invalid_argument("config: line " + std::to_string(lineno) + " has no '='");
        }
        const std::string key = detail::trim(line.substr(0, eq));
        static const std::set<std::string> known = {"N", "H", "K", "kappa", "T", "x0", "beta", "M"};
        if (!known.count(key)) throw std::invalid_argument("config: unknown key '" + key + "'");
        if (kv.count(key)) throw std::invalid_argument("config: duplicate key '" + key + "'");
        kv[key] = detail::trim(line.substr(eq + 1));
    }
    auto as_int = [&](const std::string &key) {
        const double v = detail::parse_real(kv.at(key), key);
        if (v != std::floor(v) || std::abs(v) > 1e9) throw std::invalid_argument("config: " + key + " must be an integer");
        return static_cast<int>(v);
    };
    RunConfig cfg;
    ProblemSpec &p = cfg.problem;
    if (!kv.count("N")) throw std::invalid_argument("config: N is required");
    p.N = as_int("N");
    if (p.N < 1) throw std::invalid_argument("config: N must be >= 1");
    auto matrix = [&](const std::string &key) {
        ComplexMatrix m = ComplexMatrix::Zero(p.N, p.N);
        if (!kv.count(key)) return m;
        const auto vals = parse_complex_list(kv.at(key));
        if (vals.size() != static_cast<std::size_t>(p.N) * p.N) {
            throw std::invalid_argument("config: " + key + " needs N*N = " + std::to_string(p.N * p.N) + " entries");
        }
        for (int i = 0; i < p.N; ++i) {
            for (int j = 0; j < p.N; ++j) m(i, j) = vals[static_cast<std::size_t>(i) * p.N + j];
        }
        return m;
    };
    p.H = matrix("H");
    p.K = matrix("K");
    p.kappa = kv.count("kappa") ? parse_kappa(kv.at("kappa")) : Kappa::constant(1.0);
    p.T = kv.count("T") ? detail::parse_real(kv.at("T"), "T") : 1.0;
    p.x0 = ComplexVector::Zero(p.N);
    if (kv.count("x0")) {
        const auto vals = parse_complex_list(kv.at("x0"));
        if (vals.size() != static_cast<std::size_t>(p.N)) throw std::invalid_argument("config: x0 needs N entries");
        for (int i = 0; i < p.N; ++i) p.x0(i) = vals[i];
    } else {
        p.x0(0) = 1.0;
    }
    if (kv.count("beta")) cfg.beta = as_int("beta");
    if (kv.count("M")) cfg.M = as_int("M");
    p.validate();
    return cfg;
}

inline RunConfig load_config(const std::string &path) {
    std::ifstream f(path);
    if (!f) throw std::invalid_argument("config: cannot open '" + path + "'");
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_config(ss.str());
}

}  // namespace qdil
