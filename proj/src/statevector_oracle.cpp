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

#include "wgs/statevector_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "json.hpp"
#include "wgs/error.hpp"
#include "wgs/philox.hpp"

namespace wgs {

double StateVec::norm2() const {
    double s = 0;
    for (const auto &a : amp) {
        s += std::norm(a);
    }
    return s;
}

int StateVec::position(int label) const {
    auto it = std::find(labels.begin(), labels.end(), label);
    if (it == labels.end()) {
        throw Error(ErrorCode::QubitAbsent, "qubit " + std::to_string(label) + " not in state");
    }
    return static_cast<int>(it - labels.begin());
}

static void check_cap(std::size_t q, const OracleConfig &cfg) {
    if (q > static_cast<std::size_t>(cfg.qubit_cap)) {
        throw Error(ErrorCode::TooManyQubits,
                    std::to_string(q) + " qubits exceeds the cap of " + std::to_string(cfg.qubit_cap));
    }
}

StateVec build_wgs(const ResourceGraph &g, double phi, const OracleConfig &cfg) {
    std::size_t q = g.vertices.size();
    check_cap(q, cfg);
    StateVec s;
    for (std::size_t i = 0; i < q; i++) {
        s.labels.push_back(static_cast<int>(i));
    }
    int ne = static_cast<int>(g.edges.size());
    std::vector<std::uint64_t> masks;
    for (const auto &e : g.edges) {
        masks.push_back((std::uint64_t(1) << e.u) | (std::uint64_t(1) << e.v));
    }
    double scale = std::pow(2.0, -0.5 * static_cast<double>(q));
    std::vector<cplx> phase(2 * ne + 1);
    for (int c = -ne; c <= ne; c++) {
        phase[c + ne] = std::polar(scale, phi * c);
    }
    s.amp.resize(std::size_t(1) << q);
    for (std::uint64_t x = 0; x < s.amp.size(); x++) {
        int c = 0;
        for (int e = 0; e < ne; e++) {
            if ((x & masks[e]) == masks[e]) {
                c += g.edges[e].sign;
            }
        }
        s.amp[x] = phase[c + ne];
    }
    return s;
}

StateVec build_wgs_dense(const ResourceGraph &g, double phi, const OracleConfig &cfg) {
    std::size_t q = g.vertices.size();
    check_cap(q, cfg);
    StateVec s;
    for (std::size_t i = 0; i < q; i++) {
        s.labels.push_back(static_cast<int>(i));
    }
    s.amp.assign(std::size_t(1) << q, cplx(std::pow(2.0, -0.5 * static_cast<double>(q))));
    for (const auto &e : g.edges) {
        cplx gate = std::polar(1.0, e.sign * phi);
        std::uint64_t mask = (std::uint64_t(1) << e.u) | (std::uint64_t(1) << e.v);
        for (std::uint64_t x = 0; x < s.amp.size(); x++) {
            if ((x & mask) == mask) {
                s.amp[x] *= gate;
            }
        }
    }
    return s;
}

StateVec project(const StateVec &s, int label, const Ket1 &ket) {
    int p = s.position(label);
    StateVec out;
    out.labels = s.labels;
    out.labels.erase(out.labels.begin() + p);
    std::size_t half = s.amp.size() / 2;
    out.amp.resize(half);
    cplx k0 = std::conj(ket.a0), k1 = std::conj(ket.a1);
    std::size_t low = (std::size_t(1) << p) - 1, bit = std::size_t(1) << p;
    for (std::size_t i = 0; i < half; i++) {
        std::size_t base = ((i & ~low) << 1) | (i & low);
        out.amp[i] = k0 * s.amp[base] + k1 * s.amp[base | bit];
    }
    return out;
}

void apply_diag(StateVec &s, int label, const SingleQubitDiag &d) {
    std::size_t bit = std::size_t(1) << s.position(label);
    for (std::size_t i = 0; i < s.amp.size(); i++) {
        s.amp[i] *= (i & bit) ? d.d1 : d.d0;
    }
}

static BranchRecord normalized_branch(const StateVec &s, int label, const Ket1 &ket, int outcome) {
    BranchRecord r{outcome, 0.0, project(s, label, ket)};
    double in = s.norm2();
    double out = r.state.norm2();
    r.probability = out / in;
    if (out > 0) {
        double f = 1 / std::sqrt(out);
        for (auto &a : r.state.amp) {
            a *= f;
        }
    }
    return r;
}

std::array<BranchRecord, 2> measure(const StateVec &s, int label, const Ket1 &ket_plus, const Ket1 &ket_minus) {
    return {normalized_branch(s, label, ket_plus, +1), normalized_branch(s, label, ket_minus, -1)};
}

std::array<BranchRecord, 2> measure(const StateVec &s, int label, const Observable &obs) {
    return measure(s, label, obs.plus, obs.minus);
}

std::array<BranchRecord, 2> measure(const StateVec &s, int label, const WeightedBasis &basis) {
    return measure(s, label, basis.failure, basis.success);
}

namespace {

std::vector<const ScheduledMeasurement *> flatten(const MeasurementSchedule &s) {
    std::vector<const ScheduledMeasurement *> order;
    for (const auto &step : s.steps) {
        for (const auto &m : step) {
            order.push_back(&m);
        }
    }
    return order;
}

struct Walker {
    const std::vector<const ScheduledMeasurement *> &order;
    const BranchVisitor &visit;
    const OracleConfig &cfg;
    OutcomeTable table;
    std::size_t leaves = 0;

    void run(std::size_t d, const StateVec &s) {
        if (d == order.size()) {
            if (++leaves > cfg.branch_cap) {
                throw Error(ErrorCode::BranchExplosion, "more than " + std::to_string(cfg.branch_cap) + " branches");
            }
            visit(table, s.norm2(), s);
            return;
        }
        const ScheduledMeasurement &m = *order[d];
        Observable obs = m.basis(table);
        for (int outcome : {+1, -1}) {
            StateVec next = project(s, m.qubit, obs.ket(outcome));
            if (next.norm2() < cfg.prune) {
                continue;
            }
            table[m.qubit] = outcome;
            run(d + 1, next);
            table[m.qubit] = 0;
        }
    }
};

}  // namespace

void for_each_branch(const ResourceGraph &g, const MeasurementSchedule &s, const BranchVisitor &visit,
                     const OracleConfig &cfg) {
    StateVec init = build_wgs(g, g.params.phi, cfg);
    auto order = flatten(s);
    Walker w{order, visit, cfg, OutcomeTable(g.vertices.size(), 0)};
    w.run(0, init);
}

static StateVec normalized(StateVec s) {
    double n = s.norm2();
    if (n > 0) {
        double f = 1 / std::sqrt(n);
        for (auto &a : s.amp) {
            a *= f;
        }
    }
    return s;
}

std::vector<ScheduleBranch> run_schedule_exhaustive(const ResourceGraph &g, const MeasurementSchedule &s,
                                                    const OracleConfig &cfg) {
    std::vector<ScheduleBranch> out;
    for_each_branch(
        g, s, [&](const OutcomeTable &t, double p, const StateVec &st) { out.push_back({t, p, normalized(st)}); },
        cfg);
    return out;
}

ScheduleBranch run_schedule_sample(const ResourceGraph &g, const MeasurementSchedule &s, std::uint64_t seed,
                                   const OracleConfig &cfg, std::ostream *trace) {
    StateVec st = build_wgs(g, g.params.phi, cfg);
    PhiloxStream rng(seed, 0);
    OutcomeTable table(g.vertices.size(), 0);
    double prob = 1;
    for (std::size_t step = 0; step < s.steps.size(); step++) {
        for (const auto &m : s.steps[step]) {
            Observable obs = m.basis(table);
            auto br = measure(st, m.qubit, obs);
            int pick = rng.uniform() < br[0].probability ? 0 : 1;
            if (br[pick].probability <= 0) {
                pick = 1 - pick;
            }
            table[m.qubit] = br[pick].outcome;
            prob *= br[pick].probability;
            st = std::move(br[pick].state);
            if (trace) {
                nlohmann::ordered_json j{{"step", step},
                                         {"qubit", g.vertices[m.qubit].id},
                                         {"basis", obs.name},
                                         {"outcome", table[m.qubit]},
                                         {"probability", br[pick].probability}};
                *trace << j.dump() << "\n";
            }
        }
    }
    return {table, prob, st};
}

DiagOp2 extract_kraus(const StateVec &t) {
    if (t.labels.size() != 2) {
        throw Error(ErrorCode::NonTargetResidue,
                    "expected two target qubits, found " + std::to_string(t.labels.size()));
    }
    // Bit 0 carries the first target, so index = a + 2b.
    return {2.0 * t.amp[0], 2.0 * t.amp[2], 2.0 * t.amp[1], 2.0 * t.amp[3]};
}

DiagOp2 extract_kraus(const ResourceGraph &g, const ScheduleBranch &b) {
    for (int l : b.state.labels) {
        if (g.vertices[l].role != Role::Target) {
            throw Error(ErrorCode::NonTargetResidue, "unmeasured ancilla " + g.vertices[l].id);
        }
    }
    return std::sqrt(b.probability) * extract_kraus(b.state);
}

StateVec cluster_state(int n) {
    if (n < 1 || n * n > 22) {
        throw Error(ErrorCode::TooManyQubits, "cluster state too large");
    }
    ResourceGraph g;
    g.kind = GraphKind::Lattice;
    for (int r = 0; r < n; r++) {
        for (int c = 0; c < n; c++) {
            g.add_vertex(target_id(r, c), Role::Target);
        }
    }
    for (auto [u, v] : lattice_edges(n)) {
        g.add_edge(u, v);
    }
    return build_wgs(g, kPi);
}

double fidelity(const StateVec &a, const StateVec &b) {
    if (a.labels != b.labels) {
        throw Error(ErrorCode::InvalidParams, "fidelity needs states on the same qubits");
    }
    cplx ov = 0;
    for (std::size_t i = 0; i < a.amp.size(); i++) {
        ov += std::conj(a.amp[i]) * b.amp[i];
    }
    return std::norm(ov) / (a.norm2() * b.norm2());
}

}  // namespace wgs
