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

#include "wgs/resource_graph.hpp"

#include <boost/graph/adjacency_list.hpp>
#include <boost/graph/boyer_myrvold_planar_test.hpp>
#include <fstream>
#include <memory>
#include <set>
#include <sstream>

#include "json.hpp"
#include "wgs/error.hpp"
#include "wgs/protocol_gadgets.hpp"

namespace wgs {

const char *graph_kind_name(GraphKind kind) {
    switch (kind) {
        case GraphKind::Line:
            return "line";
        case GraphKind::EdgeGadget:
            return "edge_gadget";
        case GraphKind::Lattice:
            return "lattice";
        case GraphKind::Decorated:
            return "decorated_lattice";
        case GraphKind::Path:
            return "path";
    }
    return "?";
}

int ResourceGraph::add_vertex(const std::string &id, Role role) {
    if (index_.count(id)) {
        throw Error(ErrorCode::InvalidParams, "duplicate vertex id " + id);
    }
    int idx = static_cast<int>(vertices.size());
    vertices.push_back({id, role});
    index_[id] = idx;
    return idx;
}

void ResourceGraph::add_edge(int u, int v, int sign) {
    edges.push_back({u, v, sign});
}

int ResourceGraph::find(const std::string &id) const {
    auto it = index_.find(id);
    return it == index_.end() ? -1 : it->second;
}

int ResourceGraph::at(const std::string &id) const {
    int i = find(id);
    if (i < 0) {
        throw Error(ErrorCode::QubitAbsent, "no vertex " + id);
    }
    return i;
}

std::vector<int> ResourceGraph::targets() const {
    std::vector<int> t;
    for (std::size_t i = 0; i < vertices.size(); i++) {
        if (vertices[i].role == Role::Target) {
            t.push_back(static_cast<int>(i));
        }
    }
    return t;
}

std::size_t ResourceGraph::ancilla_count() const {
    return vertices.size() - targets().size();
}

bool ResourceGraph::same_structure(const ResourceGraph &o) const {
    if (kind != o.kind || params.n != o.params.n || params.k != o.params.k || params.m != o.params.m ||
        params.phi != o.params.phi || vertices.size() != o.vertices.size() || edges.size() != o.edges.size()) {
        return false;
    }
    for (std::size_t i = 0; i < vertices.size(); i++) {
        if (vertices[i].id != o.vertices[i].id || vertices[i].role != o.vertices[i].role) {
            return false;
        }
    }
    for (std::size_t i = 0; i < edges.size(); i++) {
        if (edges[i].u != o.edges[i].u || edges[i].v != o.edges[i].v || edges[i].sign != o.edges[i].sign) {
            return false;
        }
    }
    return true;
}

std::string target_id(int r, int c) {
    return "t" + std::to_string(r) + "_" + std::to_string(c);
}

std::string line_qubit_id(int e, int l, int i) {
    return "e" + std::to_string(e) + ".l" + std::to_string(l) + ".q" + std::to_string(i);
}

std::string chain_qubit_id(int e, int l, char side, int j, int i) {
    return "e" + std::to_string(e) + ".l" + std::to_string(l) + "." + side + std::to_string(j) + ".c" +
           std::to_string(i);
}

static std::string decorated_id(int e, int i) {
    return "e" + std::to_string(e) + ".d" + std::to_string(i);
}

namespace {

void add_chain(ResourceGraph &g, int e, int l, char side, int j, int from, int to) {
    int prev = from;
    for (int i = 1; i <= 7; i++) {
        int v = g.add_vertex(chain_qubit_id(e, l, side, j, i), Role::Ancilla);
        g.add_edge(prev, v);
        prev = v;
    }
    g.add_edge(prev, to);
}

// T_L = k chains = q1 - q2 - q3 - q4 - q5 = k chains = T_R
void add_line(ResourceGraph &g, int e, int l, int k, int tl, int tr) {
    int q[6];
    for (int i = 1; i <= 5; i++) {
        q[i] = g.add_vertex(line_qubit_id(e, l, i), Role::Ancilla);
    }
    for (int i = 1; i < 5; i++) {
        g.add_edge(q[i], q[i + 1]);
    }
    for (int j = 0; j < k; j++) {
        add_chain(g, e, l, 'L', j, tl, q[1]);
    }
    for (int j = 0; j < k; j++) {
        add_chain(g, e, l, 'R', j, q[5], tr);
    }
}

void check_km(int k, int m) {
    if (k < 1) {
        throw Error(ErrorCode::InvalidK, "k must be >= 1");
    }
    if (m < 1) {
        throw Error(ErrorCode::InvalidParams, "m must be >= 1");
    }
}

}  // namespace

ResourceGraph build_line(int k, double phi) {
    check_km(k, 1);
    ResourceGraph g;
    g.kind = GraphKind::Line;
    g.params = {0, k, 1, phi};
    int tl = g.add_vertex("tL", Role::Target);
    int tr = g.add_vertex("tR", Role::Target);
    add_line(g, 0, 0, k, tl, tr);
    return g;
}

ResourceGraph build_edge_gadget(int k, int m, double phi) {
    check_km(k, m);
    ResourceGraph g;
    g.kind = GraphKind::EdgeGadget;
    g.params = {0, k, m, phi};
    int tl = g.add_vertex("tL", Role::Target);
    int tr = g.add_vertex("tR", Role::Target);
    for (int l = 0; l < m; l++) {
        add_line(g, 0, l, k, tl, tr);
    }
    return g;
}

std::vector<std::pair<int, int>> lattice_edges(int n) {
    std::vector<std::pair<int, int>> out;
    for (int r = 0; r < n; r++) {
        for (int c = 0; c + 1 < n; c++) {
            out.push_back({r * n + c, r * n + c + 1});
        }
    }
    for (int r = 0; r + 1 < n; r++) {
        for (int c = 0; c < n; c++) {
            out.push_back({r * n + c, (r + 1) * n + c});
        }
    }
    return out;
}

static void add_targets(ResourceGraph &g, int n) {
    for (int r = 0; r < n; r++) {
        for (int c = 0; c < n; c++) {
            g.add_vertex(target_id(r, c), Role::Target);
        }
    }
}

ResourceGraph build_lattice(int n, int k, int m, double phi) {
    if (n < 2) {
        throw Error(ErrorCode::InvalidParams, "lattice needs n >= 2");
    }
    check_km(k, m);
    ResourceGraph g;
    g.kind = GraphKind::Lattice;
    g.params = {n, k, m, phi};
    add_targets(g, n);
    auto es = lattice_edges(n);
    for (std::size_t e = 0; e < es.size(); e++) {
        for (int l = 0; l < m; l++) {
            add_line(g, static_cast<int>(e), l, k, es[e].first, es[e].second);
        }
    }
    return g;
}

ResourceGraph build_decorated_lattice(int n, double phi) {
    if (n < 2) {
        throw Error(ErrorCode::InvalidParams, "lattice needs n >= 2");
    }
    ResourceGraph g;
    g.kind = GraphKind::Decorated;
    g.params = {n, 0, 0, phi};
    add_targets(g, n);
    auto es = lattice_edges(n);
    for (std::size_t e = 0; e < es.size(); e++) {
        int prev = es[e].first;
        for (int i = 1; i <= 3; i++) {
            int v = g.add_vertex(decorated_id(static_cast<int>(e), i), Role::Ancilla);
            g.add_edge(prev, v);
            prev = v;
        }
        g.add_edge(prev, es[e].second);
    }
    return g;
}

ResourceGraph build_path(int ancillas, double phi) {
    if (ancillas < 0) {
        throw Error(ErrorCode::InvalidParams, "negative ancilla count");
    }
    ResourceGraph g;
    g.kind = GraphKind::Path;
    g.params = {0, ancillas, 0, phi};
    int prev = g.add_vertex("tL", Role::Target);
    for (int i = 1; i <= ancillas; i++) {
        int v = g.add_vertex("a" + std::to_string(i), Role::Ancilla);
        g.add_edge(prev, v);
        prev = v;
    }
    int tr = g.add_vertex("tR", Role::Target);
    g.add_edge(prev, tr);
    return g;
}

std::size_t MeasurementSchedule::size() const {
    std::size_t s = 0;
    for (const auto &st : steps) {
        s += st.size();
    }
    return s;
}

bool MeasurementSchedule::valid(const ResourceGraph &g, std::string *why) const {
    auto fail = [&](const std::string &msg) {
        if (why) {
            *why = msg;
        }
        return false;
    };
    std::vector<int> step_of(g.vertices.size(), -1);
    for (std::size_t s = 0; s < steps.size(); s++) {
        for (const auto &m : steps[s]) {
            if (m.qubit < 0 || m.qubit >= static_cast<int>(g.vertices.size())) {
                return fail("qubit index out of range");
            }
            if (g.vertices[m.qubit].role == Role::Target) {
                return fail("target " + g.vertices[m.qubit].id + " is measured");
            }
            if (step_of[m.qubit] >= 0) {
                return fail(g.vertices[m.qubit].id + " measured twice");
            }
            step_of[m.qubit] = static_cast<int>(s);
        }
    }
    for (std::size_t i = 0; i < g.vertices.size(); i++) {
        if (g.vertices[i].role == Role::Ancilla && step_of[i] < 0) {
            return fail(g.vertices[i].id + " never measured");
        }
    }
    for (std::size_t s = 0; s < steps.size(); s++) {
        for (const auto &m : steps[s]) {
            for (int d : m.depends_on) {
                if (step_of[d] < 0 || step_of[d] >= static_cast<int>(s)) {
                    return fail(g.vertices[m.qubit].id + " depends on " + g.vertices[d].id +
                                " from the same or a later step");
                }
            }
        }
    }
    return true;
}

namespace {

struct LineIds {
    int q[6];
    std::vector<std::array<int, 8>> left, right;  // [1..7]
};

LineIds line_ids(const ResourceGraph &g, int e, int l, int k) {
    LineIds ids;
    for (int i = 1; i <= 5; i++) {
        ids.q[i] = g.at(line_qubit_id(e, l, i));
    }
    for (char side : {'L', 'R'}) {
        for (int j = 0; j < k; j++) {
            std::array<int, 8> c{};
            for (int i = 1; i <= 7; i++) {
                c[i] = g.at(chain_qubit_id(e, l, side, j, i));
            }
            (side == 'L' ? ids.left : ids.right).push_back(c);
        }
    }
    return ids;
}

bool cz_ok(const OutcomeTable &t, const LineIds &ids) {
    return t[ids.q[2]] < 0 && t[ids.q[3]] < 0 && t[ids.q[4]] < 0;
}

bool chain_ok(const OutcomeTable &t, const std::array<int, 8> &c) {
    return t[c[2]] < 0 && t[c[3]] < 0 && t[c[5]] < 0 && t[c[6]] < 0;
}

void schedule_edge(const ResourceGraph &g, int e, MeasurementSchedule &s) {
    int k = g.params.k, m = g.params.m;
    double phi = g.params.phi;
    auto shared = std::make_shared<std::vector<LineIds>>();
    for (int l = 0; l < m; l++) {
        shared->push_back(line_ids(g, e, l, k));
    }
    const std::vector<LineIds> &lines = *shared;
    auto cz_obs = cz_observables(Sign::Plus, phi);
    for (int l = 0; l < m; l++) {
        const LineIds &ids = lines[l];
        // Selection depends on every CZ gadget up to this line.
        std::vector<int> sel_deps;
        for (int p = 0; p <= l; p++) {
            for (int i = 2; i <= 4; i++) {
                sel_deps.push_back(lines[p].q[i]);
            }
        }
        auto selected = [shared, l](const OutcomeTable &t) {
            for (int p = 0; p < l; p++) {
                if (cz_ok(t, (*shared)[p])) {
                    return false;
                }
            }
            return cz_ok(t, (*shared)[l]);
        };
        for (int i = 2; i <= 4; i++) {
            Observable o = cz_obs[i - 2];
            s.steps[0].push_back({ids.q[i], {}, [o](const OutcomeTable &) { return o; }});
        }
        for (const auto *side : {&ids.left, &ids.right}) {
            for (const auto &c : *side) {
                for (int pos = 0; pos < 4; pos++) {
                    Observable o = mep_observable(pos, 0, phi);
                    s.steps[0].push_back({c[pos + 2], {}, [o](const OutcomeTable &) { return o; }});
                }
                int center = c[4];
                s.steps[1].push_back({c[6], {center}, [center, phi](const OutcomeTable &t) {
                                          return mep_observable(4, t[center], phi);
                                      }});
                std::vector<int> deps = sel_deps;
                for (int i : {2, 3, 5, 6}) {
                    deps.push_back(c[i]);
                }
                for (int end : {1, 7}) {
                    s.steps[2].push_back({c[end], deps, [c, selected, phi](const OutcomeTable &t) {
                                              return selected(t) && chain_ok(t, c) ? observable_x(1, phi)
                                                                                   : observable_z();
                                          }});
                }
            }
        }
        // X_n on q1 / q5 of the selected line, from the q-side chain ends.
        for (int side = 0; side < 2; side++) {
            const auto &chains = side == 0 ? ids.left : ids.right;
            const std::vector<std::array<int, 8>> *cp_chains = &chains;
            int q = side == 0 ? ids.q[1] : ids.q[5];
            int near_end = side == 0 ? 7 : 1;
            std::vector<int> deps = sel_deps;
            for (const auto &c : chains) {
                for (int i : {2, 3, 5, 6}) {
                    deps.push_back(c[i]);
                }
                deps.push_back(c[near_end]);
            }
            s.steps[3].push_back({q, deps, [shared, cp_chains, selected, near_end, phi](const OutcomeTable &t) {
                                      if (!selected(t)) {
                                          return observable_z();
                                      }
                                      int ok = 0, nz = 0;
                                      for (const auto &c : *cp_chains) {
                                          if (chain_ok(t, c)) {
                                              ok++;
                                          } else {
                                              nz += t[c[near_end]] < 0;
                                          }
                                      }
                                      return observable_x(nz + (ok + 1) / 2.0, phi);
                                  }});
        }
    }
}

}  // namespace

MeasurementSchedule schedule(const ResourceGraph &g) {
    MeasurementSchedule s;
    switch (g.kind) {
        case GraphKind::Decorated: {
            s.steps.resize(1);
            auto obs = cz_observables(Sign::Plus, g.params.phi);
            int edges = static_cast<int>(lattice_edges(g.params.n).size());
            for (int e = 0; e < edges; e++) {
                for (int i = 1; i <= 3; i++) {
                    Observable o = obs[i - 1];
                    s.steps[0].push_back({g.at(decorated_id(e, i)), {}, [o](const OutcomeTable &) { return o; }});
                }
            }
            return s;
        }
        case GraphKind::Line:
        case GraphKind::EdgeGadget:
        case GraphKind::Lattice: {
            s.steps.resize(4);
            int edges = g.kind == GraphKind::Lattice ? static_cast<int>(lattice_edges(g.params.n).size()) : 1;
            for (int e = 0; e < edges; e++) {
                schedule_edge(g, e, s);
            }
            return s;
        }
        case GraphKind::Path:
            break;
    }
    throw Error(ErrorCode::UnscheduledGraph, std::string("no protocol schedule for ") + graph_kind_name(g.kind));
}

MeasurementSchedule path_schedule(const ResourceGraph &g,
                                  const std::vector<std::function<Observable(const std::vector<int> &)>> &rules) {
    if (g.kind != GraphKind::Path || static_cast<int>(rules.size()) != g.params.k) {
        throw Error(ErrorCode::UnscheduledGraph, "path schedule needs a path graph with one rule per ancilla");
    }
    // One qubit per step, so a rule may read every earlier outcome.
    MeasurementSchedule s;
    std::vector<int> order;
    for (int i = 1; i <= g.params.k; i++) {
        order.push_back(g.at("a" + std::to_string(i)));
    }
    for (int i = 0; i < g.params.k; i++) {
        std::vector<int> before(order.begin(), order.begin() + i);
        auto rule = rules[i];
        s.steps.push_back({{order[i], before, [before, rule](const OutcomeTable &t) {
                                std::vector<int> prev;
                                for (int v : before) {
                                    prev.push_back(t[v]);
                                }
                                return rule(prev);
                            }}});
    }
    return s;
}

bool is_planar(const ResourceGraph &g) {
    using G = boost::adjacency_list<boost::vecS, boost::vecS, boost::undirectedS,
                                    boost::property<boost::vertex_index_t, int>>;
    G bg(g.vertices.size());
    for (const auto &e : g.edges) {
        boost::add_edge(e.u, e.v, bg);
    }
    return boost::boyer_myrvold_planarity_test(bg);
}

std::string export_json(const ResourceGraph &g) {
    nlohmann::ordered_json j;
    j["version"] = 1;
    j["kind"] = graph_kind_name(g.kind);
    j["params"] = {{"n", g.params.n}, {"k", g.params.k}, {"m", g.params.m}, {"phi", g.params.phi}};
    auto &vs = j["vertices"] = nlohmann::ordered_json::array();
    for (const auto &v : g.vertices) {
        vs.push_back({{"id", v.id}, {"role", v.role == Role::Target ? "target" : "ancilla"}});
    }
    auto &es = j["edges"] = nlohmann::ordered_json::array();
    for (const auto &e : g.edges) {
        es.push_back({{"u", g.vertices[e.u].id}, {"v", g.vertices[e.v].id}, {"sign", e.sign}});
    }
    return j.dump(1) + "\n";
}

std::string export_dot(const ResourceGraph &g) {
    std::ostringstream out;
    out.precision(17);
    out << "graph wgs {\n";
    out << "  graph [kind=\"" << graph_kind_name(g.kind) << "\", n=" << g.params.n << ", k=" << g.params.k
        << ", m=" << g.params.m << ", phi=" << g.params.phi << "];\n";
    for (const auto &v : g.vertices) {
        bool t = v.role == Role::Target;
        out << "  \"" << v.id << "\" [role=" << (t ? "target" : "ancilla") << ", shape=" << (t ? "box" : "circle")
            << ", color=" << (t ? "red" : "black") << "];\n";
    }
    for (const auto &e : g.edges) {
        out << "  \"" << g.vertices[e.u].id << "\" -- \"" << g.vertices[e.v].id << "\" [sign=" << e.sign
            << ", weight=" << e.sign * g.params.phi << "];\n";
    }
    out << "}\n";
    return out.str();
}

ResourceGraph import_json(const std::string &text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const std::exception &ex) {
        throw Error(ErrorCode::IoError, std::string("bad graph json: ") + ex.what());
    }
    try {
        std::string kind = j.at("kind");
        const auto &p = j.at("params");
        int n = p.at("n"), k = p.at("k"), m = p.at("m");
        double phi = p.at("phi");
        ResourceGraph g;
        if (kind == "line") {
            g = build_line(k, phi);
        } else if (kind == "edge_gadget") {
            g = build_edge_gadget(k, m, phi);
        } else if (kind == "lattice") {
            g = build_lattice(n, k, m, phi);
        } else if (kind == "decorated_lattice") {
            g = build_decorated_lattice(n, phi);
        } else if (kind == "path") {
            g = build_path(k, phi);
        } else {
            throw Error(ErrorCode::IoError, "unknown graph kind " + kind);
        }
        // The file must describe exactly the graph its parameters build.
        ResourceGraph read;
        read.kind = g.kind;
        read.params = g.params;
        for (const auto &v : j.at("vertices")) {
            std::string role = v.at("role");
            read.add_vertex(v.at("id"), role == "target" ? Role::Target : Role::Ancilla);
        }
        for (const auto &e : j.at("edges")) {
            int u = read.find(e.at("u")), v = read.find(e.at("v"));
            if (u < 0 || v < 0) {
                throw Error(ErrorCode::IoError, "edge references unknown vertex");
            }
            read.add_edge(u, v, e.at("sign"));
        }
        if (!read.same_structure(g)) {
            throw Error(ErrorCode::IoError, "graph json does not match its params block");
        }
        return read;
    } catch (const Error &) {
        throw;
    } catch (const std::exception &ex) {
        throw Error(ErrorCode::IoError, std::string("bad graph json: ") + ex.what());
    }
}

void write_file(const std::string &path, const std::string &bytes) {
    std::ofstream f(path, std::ios::binary);
    if (!f) {
        throw Error(ErrorCode::IoError, "cannot open " + path);
    }
    f << bytes;
    if (!f) {
        throw Error(ErrorCode::IoError, "write failed for " + path);
    }
}

}  // namespace wgs
