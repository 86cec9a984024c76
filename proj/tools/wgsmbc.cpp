// Copyright 2026 The wgs-mbc Authors
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


#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "wgs/error.hpp"
#include "wgs/mbc_engine.hpp"
#include "wgs/montecarlo_runner.hpp"
#include "wgs/protocol_gadgets.hpp"
#include "wgs/resource_graph.hpp"
#include "wgs/verification.hpp"

using namespace wgs;
using json = nlohmann::ordered_json;

namespace {

struct Config {
    double phi = kPi;
    std::string phi_frac;
    double phi1 = kPi, phi2 = kPi, theta = 0;
    int n = 2, k = 1, m = 1;
    double delta = 0.1;
    std::int64_t trials = 100000;
    std::uint64_t seed = 20260611;
    int threads = 1;
    int qubit_cap = 22;
    double tolerance = 1e-9;
    std::string config_path;
    std::string suite = "all";
    std::string format = "json";
    std::string kind = "lattice";
    std::string out;
    std::vector<double> phis;
    std::vector<int> ks, ms;
    double z_gate = 4;
    bool as_json = false;
    bool timing = false;
};

double parse_frac(const std::string &s) {
    auto slash = s.find('/');
    try {
        double p = std::stod(s.substr(0, slash));
        double q = slash == std::string::npos ? 1.0 : std::stod(s.substr(slash + 1));
        if (q == 0) {
            throw std::invalid_argument("zero denominator");
        }
        return p * kPi / q;
    } catch (const std::exception &) {
        throw Error(ErrorCode::InvalidParams, "--phi-frac expects p/q, got '" + s + "'");
    }
}

std::string num(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

json diag_json(const DiagOp2 &d) {
    json a = json::array();
    for (int i = 0; i < 4; i++) {
        a.push_back({d[i].real(), d[i].imag()});
    }
    return a;
}

std::string diag_text(const DiagOp2 &d) {
    std::string s = "diag(";
    for (int i = 0; i < 4; i++) {
        s += (i ? ", " : "") + num(d[i].real()) + (d[i].imag() < 0 ? "" : "+") + num(d[i].imag()) + "i";
    }
    return s + ")";
}

void emit(const Config &c, const std::string &bytes) {
    if (c.out.empty()) {
        std::cout << bytes;
    } else {
        write_file(c.out, bytes);
    }
}

// Config file values fill options that were not given on the command line.
// Returns the keys taken from the file.
std::vector<std::string> apply_config(Config &c, CLI::App *sub) {
    std::vector<std::string> used;
    if (c.config_path.empty()) {
        return used;
    }
    std::ifstream in(c.config_path);
    if (!in) {
        throw Error(ErrorCode::IoError, "cannot read config " + c.config_path);
    }
    json j;
    try {
        j = json::parse(in);
    } catch (const json::exception &e) {
        throw Error(ErrorCode::IoError, std::string("bad config JSON: ") + e.what());
    }
    std::map<std::string, std::function<void(const json &)>> set{
        {"phi", [&](const json &v) { c.phi = v.get<double>(); }},
        {"phi-frac", [&](const json &v) { c.phi_frac = v.get<std::string>(); }},
        {"phi1", [&](const json &v) { c.phi1 = v.get<double>(); }},
        {"phi2", [&](const json &v) { c.phi2 = v.get<double>(); }},
        {"theta", [&](const json &v) { c.theta = v.get<double>(); }},
        {"n", [&](const json &v) { c.n = v.get<int>(); }},
        {"k", [&](const json &v) { c.k = v.get<int>(); }},
        {"m", [&](const json &v) { c.m = v.get<int>(); }},
        {"delta", [&](const json &v) { c.delta = v.get<double>(); }},
        {"trials", [&](const json &v) { c.trials = v.get<std::int64_t>(); }},
        {"seed", [&](const json &v) { c.seed = v.get<std::uint64_t>(); }},
        {"threads", [&](const json &v) { c.threads = v.get<int>(); }},
        {"qubit-cap", [&](const json &v) { c.qubit_cap = v.get<int>(); }},
        {"tolerance", [&](const json &v) { c.tolerance = v.get<double>(); }},
        {"suite", [&](const json &v) { c.suite = v.get<std::string>(); }},
        {"format", [&](const json &v) { c.format = v.get<std::string>(); }},
        {"kind", [&](const json &v) { c.kind = v.get<std::string>(); }},
        {"out", [&](const json &v) { c.out = v.get<std::string>(); }},
        {"phis", [&](const json &v) { c.phis = v.get<std::vector<double>>(); }},
        {"ks", [&](const json &v) { c.ks = v.get<std::vector<int>>(); }},
        {"ms", [&](const json &v) { c.ms = v.get<std::vector<int>>(); }},
        {"z-gate", [&](const json &v) { c.z_gate = v.get<double>(); }},
    };
    for (const auto &[key, value] : j.items()) {
        auto it = set.find(key);
        if (it == set.end()) {
            throw Error(ErrorCode::InvalidParams, "unknown config key '" + key + "'");
        }
        CLI::Option *opt = sub->get_option_no_throw("--" + key);
        if (opt == nullptr || opt->count() > 0) {
            continue;
        }
        if (key == "phi" && sub->get_option("--phi-frac")->count() > 0) {
            continue;
        }
        try {
            it->second(value);
        } catch (const json::exception &e) {
            throw Error(ErrorCode::InvalidParams, "config key '" + key + "': " + e.what());
        }
        used.push_back(key);
    }
    return used;
}

int cmd_compose(const Config &c) {
    Ket1 meas = success_failure_basis(0.0, 0.0, c.theta).success;
    DiagOp2 contraction = compose(cp_tilde(c.phi1), cp_tilde(c.phi2), meas);
    std::optional<ClosedForm> f;
    std::string method = "closed form";
    DiagOp2 closed;
    try {
        f = compose_cp_tilde(c.phi1, c.phi2, c.theta);
        closed = f->to_diag();
    } catch (const Error &e) {
        if (e.code() != ErrorCode::SingularAngle) {
            throw;
        }
        // theta = 0 or pi is a weighted X measurement, which has its own exact form.
        double r = std::remainder(c.theta, 2 * kPi);
        bool x_minus = std::abs(r) < 1e-12, x_plus = std::abs(std::abs(r) - kPi) < 1e-12;
        if (!x_minus && !x_plus) {
            std::cerr << "error: theta = " << num(c.theta)
                      << " lies in the excluded set |theta| in {|phi1 + phi2|/2, |phi1 - phi2|/2}\n  (" << e.what()
                      << ")\n";
            return 1;
        }
        closed = weighted_x_compose(x_plus ? Sign::Plus : Sign::Minus, 1, 1, c.phi1, c.phi2).to_diag();
        method = "weighted X composition (theta is on the closed form's excluded set)";
    }
    double dev = max_abs_diff(closed, contraction);
    bool ok = dev <= c.tolerance;
    if (c.as_json) {
        json j;
        j["phi1"] = c.phi1;
        j["phi2"] = c.phi2;
        j["theta"] = c.theta;
        j["method"] = f ? "closed_form" : "weighted_x";
        if (f) {
            j["case"] = f->mbc_case == MbcCase::I ? "I" : "II";
            j["chi"] = f->chi;
            j["coefficient"] = {f->coefficient.real(), f->coefficient.imag()};
            j["left"] = {f->left.real(), f->left.imag()};
            j["right"] = {f->right.real(), f->right.imag()};
            j["usign"] = f->usign;
        }
        j["closed_form"] = diag_json(closed);
        j["contraction"] = diag_json(contraction);
        j["max_deviation"] = dev;
        j["tolerance"] = c.tolerance;
        j["pass"] = ok;
        std::cout << j.dump(1) << "\n";
    } else {
        std::cout << "phi1 " << num(c.phi1) << "  phi2 " << num(c.phi2) << "  theta " << num(c.theta) << "\n";
        std::cout << "method " << method << "\n";
        if (f) {
            std::cout << "case " << (f->mbc_case == MbcCase::I ? "I" : "II") << ", chi " << num(f->chi) << ", usign ["
                      << f->usign[0] << " " << f->usign[1] << " " << f->usign[2] << " " << f->usign[3] << "]\n";
        }
        std::cout << "closed form  " << diag_text(closed) << "\n";
        std::cout << "contraction  " << diag_text(contraction) << "\n";
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%.3e", dev);
        std::cout << "max entry deviation " << buf << (ok ? " (ok)" : " (exceeds tolerance)") << "\n";
    }
    return ok ? 0 : 1;
}

int cmd_verify(const Config &c, bool with_phi) {
    VerifyConfig v;
    v.seed = c.seed;
    v.mc_trials = c.trials;
    v.threads = c.threads;
    v.n = c.n;
    v.tolerance = c.tolerance;
    v.oracle.qubit_cap = c.qubit_cap;
    if (with_phi) {
        v.phi = c.phi;
    }
    auto names = suite_names();
    if (std::find(names.begin(), names.end(), c.suite) == names.end()) {
        std::cerr << "error: unknown suite '" << c.suite << "'; known:";
        for (const auto &s : names) {
            std::cerr << " " << s;
        }
        std::cerr << "\n";
        return 2;
    }
    auto results = run_suite(c.suite, v);
    const CheckResult *first_fail = nullptr;
    for (const auto &r : results) {
        std::cout << (r.passed ? "PASS " : "FAIL ") << r.name << ": " << r.detail;
        if (c.timing) {
            char buf[32];
            std::snprintf(buf, sizeof(buf), " [%.2f s]", r.seconds);
            std::cout << buf;
        }
        std::cout << "\n";
        if (!r.passed && first_fail == nullptr) {
            first_fail = &r;
        }
    }
    if (first_fail) {
        std::cout << "first failing check: " << first_fail->name << "\n";
        return 1;
    }
    std::cout << "all " << results.size() << " checks passed\n";
    return 0;
}

int cmd_graph(const Config &c) {
    ResourceGraph g;
    if (c.kind == "lattice") {
        g = build_lattice(c.n, c.k, c.m, c.phi);
    } else if (c.kind == "edge") {
        g = build_edge_gadget(c.k, c.m, c.phi);
    } else if (c.kind == "line") {
        g = build_line(c.k, c.phi);
    } else if (c.kind == "decorated") {
        g = build_decorated_lattice(c.n, c.phi);
    } else {
        throw Error(ErrorCode::InvalidParams, "unknown graph kind '" + c.kind + "'");
    }
    emit(c, c.format == "dot" ? export_dot(g) : export_json(g));
    if (!c.out.empty()) {
        std::cout << "wrote " << c.out << ": " << g.vertices.size() << " qubits, " << g.ancilla_count()
                  << " ancillas, " << g.edges.size() << " edges\n";
    }
    return 0;
}

int cmd_sweep(const Config &c) {
    std::vector<double> phis = c.phis.empty() ? std::vector<double>{c.phi} : c.phis;
    std::vector<int> ks = c.ks.empty() ? std::vector<int>{c.k} : c.ks;
    std::vector<int> ms = c.ms.empty() ? std::vector<int>{c.m} : c.ms;
    auto rows = sweep(phis, ks, ms, c.n, c.trials, c.seed, c.threads);
    emit(c, sweep_csv(rows));
    int over = 0;
    for (const auto &r : rows) {
        over += std::abs(r.report.z_score) >= c.z_gate;
    }
    if (over > 0) {
        std::cerr << over << " row(s) with |z| >= " << c.z_gate << "\n";
        return 1;
    }
    return 0;
}

int cmd_bounds(const Config &c) {
    AnalyticValues a = analytic(c.phi, c.n, 1, 1, c.delta);
    bool ok = a.P_at_min >= 1 - c.delta;
    if (c.as_json) {
        json j;
        j["phi"] = c.phi;
        j["n"] = c.n;
        j["delta"] = c.delta;
        j["k_min"] = a.k_min;
        j["m_min"] = a.m_min;
        j["N"] = consumed_qubits(c.n, a.k_min, a.m_min);
        j["P"] = a.P_at_min;
        j["pass"] = ok;
        std::cout << j.dump(1) << "\n";
    } else {
        std::cout << "phi " << num(c.phi) << "  n " << c.n << "  delta " << num(c.delta) << "\n";
        std::cout << "k_min " << a.k_min << "\n";
        std::cout << "m_min " << a.m_min << "\n";
        std::cout << "N " << num(consumed_qubits(c.n, a.k_min, a.m_min)) << "\n";
        std::cout << "P(n, k_min, m_min) " << num(a.P_at_min) << (ok ? " >= " : " < ") << "1 - delta\n";
    }
    return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Measurement-based composition on weighted graph states"};
    app.require_subcommand(1);
    Config c;

    auto common = [&](CLI::App *s) {
        s->add_option("--config", c.config_path, "JSON file with option values; flags take precedence");
    };
    auto angle = [&](CLI::App *s) {
        auto *p = s->add_option("--phi", c.phi, "edge weight in radians");
        auto *f = s->add_option("--phi-frac", c.phi_frac, "edge weight as p/q, meaning p*pi/q");
        p->excludes(f);
    };
    auto size = [&](CLI::App *s) {
        s->add_option("--n", c.n, "lattice side")->check(CLI::PositiveNumber);
        s->add_option("--k", c.k, "MEP lines per side");
        s->add_option("--m", c.m, "parallel lines per edge");
    };
    auto rng = [&](CLI::App *s) {
        s->add_option("--trials", c.trials, "Monte Carlo trials");
        s->add_option("--seed", c.seed, "RNG seed")->envname("WGS_SEED");
        s->add_option("--threads", c.threads, "worker threads")->check(CLI::PositiveNumber);
    };

    auto *compose_cmd = app.add_subcommand("compose", "closed form against direct contraction");
    common(compose_cmd);
    compose_cmd->add_option("--phi1", c.phi1, "first weight");
    compose_cmd->add_option("--phi2", c.phi2, "second weight");
    compose_cmd->add_option("--theta", c.theta, "measurement angle");
    compose_cmd->add_option("--tolerance", c.tolerance, "deviation gate");
    compose_cmd->add_flag("--json", c.as_json, "JSON output");

    auto *verify_cmd = app.add_subcommand("verify", "run verification suites");
    common(verify_cmd);
    angle(verify_cmd);
    size(verify_cmd);
    rng(verify_cmd);
    verify_cmd->add_option("--suite", c.suite, "closed-form, gadgets, near-det, lattice, montecarlo, bounds, "
                                               "properties or all");
    verify_cmd->add_option("--qubit-cap", c.qubit_cap, "state-vector qubit limit");
    verify_cmd->add_option("--tolerance", c.tolerance, "numeric tolerance");
    verify_cmd->add_flag("--timing", c.timing, "print wall time per check");

    auto *graph_cmd = app.add_subcommand("graph", "export a resource graph");
    common(graph_cmd);
    angle(graph_cmd);
    size(graph_cmd);
    graph_cmd->add_option("--kind", c.kind)->check(CLI::IsMember({"lattice", "edge", "line", "decorated"}));
    graph_cmd->add_option("--format", c.format)->check(CLI::IsMember({"json", "dot"}));
    graph_cmd->add_option("--out", c.out, "output file (default stdout)");

    auto *sweep_cmd = app.add_subcommand("sweep", "Monte Carlo sweep to CSV");
    common(sweep_cmd);
    angle(sweep_cmd);
    size(sweep_cmd);
    rng(sweep_cmd);
    sweep_cmd->add_option("--phis", c.phis, "phi grid")->delimiter(',');
    sweep_cmd->add_option("--ks", c.ks, "k grid")->delimiter(',');
    sweep_cmd->add_option("--ms", c.ms, "m grid")->delimiter(',');
    sweep_cmd->add_option("--z-gate", c.z_gate, "fail if any |z| reaches this");
    sweep_cmd->add_option("--out", c.out, "output file (default stdout)");

    auto *bounds_cmd = app.add_subcommand("bounds", "k_min, m_min and P for a target failure rate");
    common(bounds_cmd);
    angle(bounds_cmd);
    bounds_cmd->add_option("--n", c.n, "lattice side");
    bounds_cmd->add_option("--delta", c.delta, "allowed failure probability");
    bounds_cmd->add_flag("--json", c.as_json, "JSON output");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        app.exit(e);
        return 2;
    }

    CLI::App *sub = app.get_subcommands().front();
    try {
        auto from_file = apply_config(c, sub);
        bool with_phi = false;
        if (sub->get_option_no_throw("--phi")) {
            with_phi = sub->get_option("--phi")->count() > 0 || sub->get_option("--phi-frac")->count() > 0 ||
                       std::find(from_file.begin(), from_file.end(), "phi") != from_file.end() ||
                       std::find(from_file.begin(), from_file.end(), "phi-frac") != from_file.end();
        }
        if (!c.phi_frac.empty()) {
            c.phi = parse_frac(c.phi_frac);
        }
        if (sub == compose_cmd) {
            return cmd_compose(c);
        }
        if (sub == verify_cmd) {
            return cmd_verify(c, with_phi);
        }
        if (sub == graph_cmd) {
            return cmd_graph(c);
        }
        if (sub == sweep_cmd) {
            return cmd_sweep(c);
        }
        return cmd_bounds(c);
    } catch (const Error &e) {
        std::cerr << "error: " << e.what() << "\n";
        bool usage = e.code() == ErrorCode::InvalidParams || e.code() == ErrorCode::InvalidK;
        return usage ? 2 : 1;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
