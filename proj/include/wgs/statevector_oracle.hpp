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

#ifndef WGS_STATEVECTOR_ORACLE_HPP
#define WGS_STATEVECTOR_ORACLE_HPP

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <vector>

#include "wgs/resource_graph.hpp"

namespace wgs {

/// Dense state. Qubit at bit position i carries graph vertex labels[i].
struct StateVec {
    std::vector<int> labels;
    std::vector<cplx> amp;

    double norm2() const;
    int position(int label) const;
};

struct OracleConfig {
    int qubit_cap = 22;
    std::size_t branch_cap = std::size_t(1) << 21;
    double prune = 1e-14;
};

/// Phase counting: amplitude of x is 2^{-q/2} prod_edges e^{i sign phi x_u x_v}.
StateVec build_wgs(const ResourceGraph &g, double phi, const OracleConfig &cfg = {});
/// Same state by applying CP gates one at a time to |+...+>.
StateVec build_wgs_dense(const ResourceGraph &g, double phi, const OracleConfig &cfg = {});

struct BranchRecord {
    int outcome;  // +1 / -1
    double probability;
    StateVec state;  // normalized, measured qubit removed
};

/// Projects `label` onto ket_plus (outcome +1) and ket_minus (outcome -1).
std::array<BranchRecord, 2> measure(const StateVec &s, int label, const Ket1 &ket_plus, const Ket1 &ket_minus);
std::array<BranchRecord, 2> measure(const StateVec &s, int label, const Observable &obs);
/// Success ket is reported as outcome -1, failure as +1.
std::array<BranchRecord, 2> measure(const StateVec &s, int label, const WeightedBasis &basis);

/// Unnormalized projection without renormalization.
StateVec project(const StateVec &s, int label, const Ket1 &ket);
void apply_diag(StateVec &s, int label, const SingleQubitDiag &d);

struct ScheduleBranch {
    OutcomeTable outcomes;
    double probability;
    StateVec state;  // normalized, targets only
};

using BranchVisitor = std::function<void(const OutcomeTable &, double probability, const StateVec &unnormalized)>;

/// Depth-first over every outcome string; branches below cfg.prune are dropped.
void for_each_branch(const ResourceGraph &g, const MeasurementSchedule &s, const BranchVisitor &visit,
                     const OracleConfig &cfg = {});
std::vector<ScheduleBranch> run_schedule_exhaustive(const ResourceGraph &g, const MeasurementSchedule &s,
                                                    const OracleConfig &cfg = {});
/// One trajectory; trace (optional) receives JSON lines per measurement.
ScheduleBranch run_schedule_sample(const ResourceGraph &g, const MeasurementSchedule &s, std::uint64_t seed,
                                   const OracleConfig &cfg = {}, std::ostream *trace = nullptr);

/// Diagonal Kraus on the two targets, read off as 2 * (K|++>).
DiagOp2 extract_kraus(const ResourceGraph &g, const ScheduleBranch &b);
DiagOp2 extract_kraus(const StateVec &unnormalized_targets);

StateVec cluster_state(int n);
double fidelity(const StateVec &a, const StateVec &b);

}  // namespace wgs

#endif
