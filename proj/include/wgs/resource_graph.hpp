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

#ifndef WGS_RESOURCE_GRAPH_HPP
#define WGS_RESOURCE_GRAPH_HPP

#include <functional>
#include <iosfwd>
#include <string>
#include <unordered_map>
#include <vector>

#include "wgs/measurement_bases.hpp"

namespace wgs {

enum class Role { Target, Ancilla };

enum class GraphKind { Line, EdgeGadget, Lattice, Decorated, Path };

const char *graph_kind_name(GraphKind kind);

struct Vertex {
    std::string id;
    Role role;
};

struct GraphEdge {
    int u;
    int v;
    int sign = +1;  // weight sign * phi
};

struct GraphParams {
    int n = 0;
    int k = 0;
    int m = 0;
    double phi = 0;
};

struct ResourceGraph {
    GraphKind kind = GraphKind::Path;
    GraphParams params;
    std::vector<Vertex> vertices;
    std::vector<GraphEdge> edges;

    int add_vertex(const std::string &id, Role role);
    void add_edge(int u, int v, int sign = +1);
    /// Vertex index by id, -1 if absent.
    int find(const std::string &id) const;
    int at(const std::string &id) const;
    std::vector<int> targets() const;
    std::size_t ancilla_count() const;
    bool same_structure(const ResourceGraph &o) const;

   private:
    std::unordered_map<std::string, int> index_;
};

/// One line between two fresh targets "tL", "tR" (2 + 5 + 14k qubits).
ResourceGraph build_line(int k, double phi);
/// m parallel lines between "tL" and "tR".
ResourceGraph build_edge_gadget(int k, int m, double phi);
ResourceGraph build_lattice(int n, int k, int m, double phi);
ResourceGraph build_decorated_lattice(int n, double phi);
/// target - a_1 - ... - a_r - target, for single gadgets.
ResourceGraph build_path(int ancillas, double phi);

/// Lattice edges in build order: horizontal (row-major) then vertical.
std::vector<std::pair<int, int>> lattice_edges(int n);
std::string target_id(int r, int c);
std::string line_qubit_id(int e, int l, int i);
std::string chain_qubit_id(int e, int l, char side, int j, int i);

// Measurement outcomes indexed by vertex; 0 while unmeasured.
using OutcomeTable = std::vector<int>;
using BasisResolver = std::function<Observable(const OutcomeTable &)>;

struct ScheduledMeasurement {
    int qubit;
    std::vector<int> depends_on;
    BasisResolver basis;
};

struct MeasurementSchedule {
    std::vector<std::vector<ScheduledMeasurement>> steps;

    std::size_t size() const;
    /// Every ancilla once, no target, dependencies only on earlier steps.
    bool valid(const ResourceGraph &g, std::string *why = nullptr) const;
};

MeasurementSchedule schedule(const ResourceGraph &g);
/// Single-step schedule measuring the path ancillas with the given rules.
MeasurementSchedule path_schedule(const ResourceGraph &g, const std::vector<std::function<Observable(const std::vector<int> &)>> &rules);

bool is_planar(const ResourceGraph &g);

std::string export_json(const ResourceGraph &g);
std::string export_dot(const ResourceGraph &g);
ResourceGraph import_json(const std::string &text);
void write_file(const std::string &path, const std::string &bytes);

}  // namespace wgs

#endif
