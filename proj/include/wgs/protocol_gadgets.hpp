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

#ifndef WGS_PROTOCOL_GADGETS_HPP
#define WGS_PROTOCOL_GADGETS_HPP

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "wgs/mbc_engine.hpp"

namespace wgs {

// Closed-form probabilities.
double p_cz(double phi);
double p_p(double phi);
double p_cz_alt(double phi);
/// Success probability of one line of the near-deterministic MEP (k = 1).
double d_single(double phi);
double d_k(double phi, std::int64_t k);
double e_m(double phi, std::int64_t m);

/// Observable with -1 ket ket_vw(v, w) and +1 ket ket_vw(v + pi, w).
Observable observable_vw(double v, double w, const std::string &name);

// Measurement sequences on a path target - a_1 - ... - a_r - target. Every
// edge is CP(phi). Rule i sees the outcomes of a_1..a_{i-1}.
using BasisRule = std::function<Observable(const std::vector<int> &previous)>;
using SuccessRule = std::function<bool(const std::vector<int> &outcomes)>;

Instrument path_instrument(double phi, const std::vector<BasisRule> &rules, const SuccessRule &success);
DiagOp2 path_kraus(double phi, const std::vector<Observable> &observables, const std::vector<int> &outcomes);

std::vector<Observable> cz_observables(Sign sign, double phi);
std::vector<Observable> alt_cz_observables(double phi);
/// Basis of MEP position 0..4; the last one depends on the center outcome.
Observable mep_observable(int position, int center_outcome, double phi);
std::vector<BasisRule> mep_rules(double phi);

Instrument cz_gadget(Sign sign, double phi);
Instrument mep_gadget(double phi);
Instrument alt_cz_gadget(double phi);
Instrument detach(double phi);

/// Sign of the projector an MEP branch produces (center -1 gives P+), 0 on failure.
int mep_branch_sign(const std::vector<int> &outcomes);

SingleQubitDiag cz_left_local(double phi);
SingleQubitDiag cz_right_local(double phi);
DiagOp2 cz_success_kraus(double phi);
DiagOp2 alt_cz_success_kraus(double phi);
DiagOp2 mep_success_kraus(Sign sign, double phi);

// One seven-qubit chain T - c1 - ... - c7 - q. c2..c6 form an MEP gadget;
// c1, c7 are measured in X_1 when it succeeded and in Z otherwise.
enum class ChainClass {
    SuccessPlus,   // MEP ok, X_1 outcomes agree, P+
    SuccessMinus,  // MEP ok, X_1 outcomes agree, P-
    SplitPlus,     // MEP ok, X_1 outcomes differ
    SplitMinus,
    Fail00,  // MEP failed, Z outcomes (c1, c7) as bits
    Fail01,
    Fail10,
    Fail11,
};
inline constexpr int kChainClasses = 8;
const char *chain_class_name(ChainClass c);

struct ChainBranch {
    DiagOp2 kraus;  // on (T, q)
    ChainClass cls;
    std::array<int, 7> outcomes;  // c1..c7, +1 / -1
};
std::vector<ChainBranch> chain_branches(double phi);
ChainClass classify_chain(const std::array<int, 7> &outcomes);

/// Aggregated class operators: sum over members of K^dagger K equals
/// class^dagger class, with members checked to be proportional.
std::array<DiagOp2, kChainClasses> chain_classes(double phi);

// Outcome sources. Gadget code asks for one choice at a time.
class OutcomeSource {
   public:
    virtual ~OutcomeSource() = default;
    /// Picks an index. Probabilities need not be normalized; zero entries are never picked.
    virtual std::size_t choose(const std::vector<double> &probs) = 0;
};

/// Depth-first enumeration by replay: run the gadget, then call next() until false.
class EnumeratingSource : public OutcomeSource {
   public:
    std::size_t choose(const std::vector<double> &probs) override;
    bool next();
    /// Product of the normalized probabilities chosen along the current path.
    double path_probability() const;

   private:
    struct Level {
        std::vector<std::size_t> options;
        std::vector<double> probs;
        std::size_t pos = 0;
    };
    std::vector<Level> stack_;
    std::size_t depth_ = 0;
};

class SampledSource : public OutcomeSource {
   public:
    explicit SampledSource(std::function<double()> uniform) : uniform_(std::move(uniform)) {
    }
    std::size_t choose(const std::vector<double> &probs) override;

   private:
    std::function<double()> uniform_;
};

/// Per-phi data shared by all near-deterministic evaluations.
struct NearDetModel {
    double phi = 0;
    std::array<DiagOp2, kChainClasses> classes;
    std::array<std::array<double, 4>, kChainClasses> class_abs2;
    DiagOp2 cz_success;
    double cz_probability = 0;

    static NearDetModel build(double phi);
};

struct SideRegisters {
    bool success = false;
    int sign = 0;  // projector sign of the successful lines, 0 if none
    int nz_l = 0;  // Z = -1 on failed lines, end next to the first qubit
    int nz_r = 0;  // same, end next to the second qubit
    int n = 0;     // lines whose MEP succeeded
    int ns = 0;    // of those, lines whose X_1 pair agreed
};

struct SideOutcome {
    DiagOp2 kraus;  // on (T, q), includes the branch weight
    SideRegisters reg;
    std::vector<ChainClass> chains;
};

struct NearDetOptions {
    /// When false, stop once success is decided and skip register-only draws.
    bool full_registers = true;
};

SideOutcome near_det_mep(const NearDetModel &model, int k, OutcomeSource &source,
                         const NearDetOptions &opt = {});
SideOutcome near_det_mep(double phi, int k, OutcomeSource &source);

/// Predicted MEP Kraus shape for given registers (unit weight).
DiagOp2 near_det_mep_shape(double phi, const SideRegisters &reg);

struct ByproductFrame {
    int zL = 0;
    int zR = 0;
    double rzL = 0;
    double rzR = 0;

    DiagOp2 op() const;
};

struct NearDetCzOutcome {
    DiagOp2 kraus;  // on (T_L, T_R), includes the branch weight
    bool success = false;
    int line = -1;  // selected line, -1 if every CZ gadget failed
    SideRegisters left;
    SideRegisters right;
    int nz_L = 0;  // Z = -1 on target-adjacent ends of unselected lines
    int nz_R = 0;
    int b_l = 0;  // 1 iff the q1 outcome was -1
    int b_r = 0;
    int b_p = 0;  // 1 iff the side signs differ
    double x_left = 0;  // index n of the X_n measured on q1
    double x_right = 0;
    ByproductFrame frame;

    std::map<std::string, int> registers() const;
};

NearDetCzOutcome near_det_cz(const NearDetModel &model, int k, int m, OutcomeSource &source,
                             const NearDetOptions &opt = {});
NearDetCzOutcome near_det_cz(double phi, int k, int m, OutcomeSource &source);

/// Side branches merged when registers agree and operators are proportional;
/// one weighted operator stands for each merged group.
std::vector<SideOutcome> side_classes(const NearDetModel &model, int k);

/// Every branch of near_det_cz with its probability, using side_classes.
/// Same assembly code as near_det_cz.
void enumerate_near_det_cz(const NearDetModel &model, int k, int m,
                           const std::function<void(const NearDetCzOutcome &, double probability)> &visit);

ByproductFrame near_det_frame(double phi, const SideRegisters &left, const SideRegisters &right, int nz_L,
                              int nz_R, int b_l, int b_r);

struct AnalyticValues {
    double p_cz;
    double p_p;
    double p_cz_alt;
    double D_k;
    double E_m;
    double P;
    std::int64_t k_min;
    std::int64_t m_min;
    double N;
    double P_at_min;
};
AnalyticValues analytic(double phi, int n, std::int64_t k, std::int64_t m, double delta);
double overall_probability(double phi, int n, std::int64_t k, std::int64_t m);
double consumed_qubits(int n, std::int64_t k, std::int64_t m);
std::int64_t k_min(double phi, int n, double delta);
std::int64_t m_min(double phi, int n, double delta);

}  // namespace wgs

#endif
