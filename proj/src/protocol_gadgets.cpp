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

#include "wgs/protocol_gadgets.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <tuple>

#include "wgs/error.hpp"

namespace wgs {

namespace {

void require_nonzero(double phi) {
    if (phi == 0) {
        throw Error(ErrorCode::ZeroWeight, "gadget needs phi != 0");
    }
}

double mean_abs2(const DiagOp2 &k) {
    auto a = k.abs2();
    return (a[0] + a[1] + a[2] + a[3]) / 4;
}

SingleQubitDiag z_power(int n) {
    return (n & 1) ? SingleQubitDiag::pauli_z() : SingleQubitDiag::identity();
}

// Inner product <a, b> over the four diagonal entries.
cplx dot(const DiagOp2 &a, const DiagOp2 &b) {
    cplx s = 0;
    for (int i = 0; i < 4; i++) {
        s += std::conj(a[i]) * b[i];
    }
    return s;
}

std::vector<double> binomial_half(int n) {
    std::vector<double> pmf(n + 1);
    for (int j = 0; j <= n; j++) {
        pmf[j] = std::exp(std::lgamma(n + 1.0) - std::lgamma(j + 1.0) - std::lgamma(n - j + 1.0) -
                          n * std::log(2.0));
    }
    return pmf;
}

}  // namespace

double p_cz(double phi) {
    double s = std::sin(phi / 2), c = std::cos(phi / 2);
    return std::pow(s, 4) / (8 * (1 + c * c));
}

double p_p(double phi) {
    double s = std::sin(phi / 2), c = std::cos(phi / 2);
    return std::pow(s, 6) / (16 * (1 + c * c));
}

double p_cz_alt(double phi) {
    double s = std::abs(std::sin(phi / 2));
    return std::pow(s, 5) / (16 * (1 + s) * (1 + s));
}

double d_single(double phi) {
    double s = std::sin(phi / 2), c = std::cos(phi / 2);
    return std::pow(s, 8) / (32 * (1 + c * c));
}

// 1 - (1 - p)^k without cancellation for tiny p or huge k.
static double at_least_once(double p, std::int64_t k) {
    return -std::expm1(static_cast<double>(k) * std::log1p(-p));
}

double d_k(double phi, std::int64_t k) {
    return at_least_once(d_single(phi), k);
}

double e_m(double phi, std::int64_t m) {
    return at_least_once(p_cz(phi), m);
}

double overall_probability(double phi, int n, std::int64_t k, std::int64_t m) {
    double edges = 2.0 * n * (n - 1);
    return std::exp(edges * (2 * std::log(d_k(phi, k)) + std::log(e_m(phi, m))));
}

double consumed_qubits(int n, std::int64_t k, std::int64_t m) {
    return 2.0 * n * (n - 1) * (5.0 * m + 14.0 * static_cast<double>(k) * m);
}

std::int64_t k_min(double phi, int n, double delta) {
    double v = 64 * std::pow(kPi, 8) * std::pow(std::abs(phi), -8) * std::log(8 * n * (n - 1) / delta);
    return static_cast<std::int64_t>(std::ceil(v));
}

std::int64_t m_min(double phi, int n, double delta) {
    double v = 16 * std::pow(kPi, 4) * std::pow(std::abs(phi), -4) * std::log(4 * n * (n - 1) / delta);
    return static_cast<std::int64_t>(std::ceil(v));
}

AnalyticValues analytic(double phi, int n, std::int64_t k, std::int64_t m, double delta) {
    if (n < 2 || !(delta > 0) || phi == 0 || k < 1 || m < 1) {
        throw Error(ErrorCode::InvalidParams, "analytic needs n >= 2, delta > 0, phi != 0, k, m >= 1");
    }
    AnalyticValues a;
    a.p_cz = p_cz(phi);
    a.p_p = p_p(phi);
    a.p_cz_alt = p_cz_alt(phi);
    a.D_k = d_k(phi, k);
    a.E_m = e_m(phi, m);
    a.P = overall_probability(phi, n, k, m);
    a.k_min = k_min(phi, n, delta);
    a.m_min = m_min(phi, n, delta);
    a.N = consumed_qubits(n, k, m);
    a.P_at_min = overall_probability(phi, n, a.k_min, a.m_min);
    return a;
}

Observable observable_vw(double v, double w, const std::string &name) {
    return {ket_vw(v + kPi, w), ket_vw(v, w), name};
}

DiagOp2 path_kraus(double phi, const std::vector<Observable> &observables, const std::vector<int> &outcomes) {
    DiagOp2 k = cp(phi);
    for (std::size_t i = 0; i < observables.size(); i++) {
        k = compose(k, cp(phi), observables[i].ket(outcomes[i]));
    }
    return k;
}

Instrument path_instrument(double phi, const std::vector<BasisRule> &rules, const SuccessRule &success) {
    Instrument ins;
    std::size_t r = rules.size();
    for (std::size_t mask = 0; mask < (std::size_t(1) << r); mask++) {
        std::vector<int> outcomes;
        std::vector<Observable> obs;
        for (std::size_t i = 0; i < r; i++) {
            obs.push_back(rules[i](outcomes));
            outcomes.push_back((mask >> (r - 1 - i)) & 1 ? -1 : +1);
        }
        ins.branches.push_back({path_kraus(phi, obs, outcomes), success(outcomes), outcomes});
    }
    return ins;
}

std::vector<Observable> cz_observables(Sign sign, double phi) {
    if (sign == Sign::Plus) {
        return {observable_xpm(Sign::Minus, Sign::Plus, phi), observable_y(Sign::Plus, phi),
                observable_xpm(Sign::Minus, Sign::Minus, phi)};
    }
    return {observable_xpm(Sign::Plus, Sign::Minus, phi), observable_y(Sign::Minus, phi),
            observable_xpm(Sign::Plus, Sign::Plus, phi)};
}

std::vector<Observable> alt_cz_observables(double phi) {
    require_nonzero(phi);
    GadgetAngles a = alt_gadget_angles(phi);
    double flip = kPi * step_h(-phi);
    return {observable_vw(0, phi + flip, "X'_a"), observable_vw(-a.eta, phi, "X'_b"),
            observable_vw(0, phi + a.theta, "Y'"), observable_vw(-a.eta, phi + flip, "X'_c")};
}

Observable mep_observable(int position, int center_outcome, double phi) {
    switch (position) {
        case 0:
            return observable_xpm(Sign::Plus, Sign::Minus, phi);
        case 1:
            return observable_y(Sign::Minus, phi);
        case 2:
            return observable_x(1, phi);
        case 3:
            return observable_y(Sign::Plus, phi);
        case 4:
            return center_outcome < 0 ? observable_xpm(Sign::Minus, Sign::Plus, phi)
                                      : observable_xpm(Sign::Minus, Sign::Minus, phi);
    }
    throw Error(ErrorCode::InvalidParams, "MEP position out of range");
}

std::vector<BasisRule> mep_rules(double phi) {
    std::vector<BasisRule> rules;
    for (int pos = 0; pos < 5; pos++) {
        rules.push_back([pos, phi](const std::vector<int> &prev) {
            return mep_observable(pos, pos == 4 ? prev[2] : 0, phi);
        });
    }
    return rules;
}

static bool all_minus(const std::vector<int> &o) {
    return std::all_of(o.begin(), o.end(), [](int x) { return x < 0; });
}

int mep_branch_sign(const std::vector<int> &o) {
    if (o.size() != 5 || o[0] > 0 || o[1] > 0 || o[3] > 0 || o[4] > 0) {
        return 0;
    }
    return o[2] < 0 ? +1 : -1;
}

static std::vector<BasisRule> fixed_rules(const std::vector<Observable> &obs) {
    std::vector<BasisRule> rules;
    for (const auto &o : obs) {
        rules.push_back([o](const std::vector<int> &) { return o; });
    }
    return rules;
}

Instrument cz_gadget(Sign sign, double phi) {
    require_nonzero(phi);
    return path_instrument(phi, fixed_rules(cz_observables(sign, phi)), all_minus);
}

Instrument mep_gadget(double phi) {
    require_nonzero(phi);
    return path_instrument(phi, mep_rules(phi), [](const std::vector<int> &o) { return mep_branch_sign(o) != 0; });
}

Instrument alt_cz_gadget(double phi) {
    require_nonzero(phi);
    return path_instrument(phi, fixed_rules(alt_cz_observables(phi)), all_minus);
}

Instrument detach(double phi) {
    return instrument(cp(phi), cp(phi), observable_z());
}

SingleQubitDiag cz_left_local(double phi) {
    return rz((phi + kPi) / 2);
}

SingleQubitDiag cz_right_local(double phi) {
    return rz((phi - kPi) / 2);
}

DiagOp2 cz_success_kraus(double phi) {
    return std::sqrt(p_cz(phi)) * (DiagOp2::kron(cz_left_local(phi), cz_right_local(phi)) * cz());
}

DiagOp2 alt_cz_success_kraus(double phi) {
    return std::sqrt(p_cz_alt(phi)) * (DiagOp2::kron(cz_left_local(phi), cz_right_local(phi)) * cz());
}

DiagOp2 mep_success_kraus(Sign sign, double phi) {
    DiagOp2 locals = DiagOp2::kron(rz(phi / 2), SingleQubitDiag::pauli_z() * rz(phi / 2));
    return std::sqrt(p_p(phi)) * (locals * (sign == Sign::Plus ? p_plus() : p_minus()));
}

const char *chain_class_name(ChainClass c) {
    switch (c) {
        case ChainClass::SuccessPlus:
            return "success+";
        case ChainClass::SuccessMinus:
            return "success-";
        case ChainClass::SplitPlus:
            return "split+";
        case ChainClass::SplitMinus:
            return "split-";
        case ChainClass::Fail00:
            return "fail00";
        case ChainClass::Fail01:
            return "fail01";
        case ChainClass::Fail10:
            return "fail10";
        case ChainClass::Fail11:
            return "fail11";
    }
    return "?";
}

ChainClass classify_chain(const std::array<int, 7> &o) {
    int e1 = o[0] < 0, e7 = o[6] < 0;
    bool ok = o[1] < 0 && o[2] < 0 && o[4] < 0 && o[5] < 0;
    if (!ok) {
        return static_cast<ChainClass>(static_cast<int>(ChainClass::Fail00) + 2 * e1 + e7);
    }
    bool plus = o[3] < 0;
    if (e1 == e7) {
        return plus ? ChainClass::SuccessPlus : ChainClass::SuccessMinus;
    }
    return plus ? ChainClass::SplitPlus : ChainClass::SplitMinus;
}

std::vector<ChainBranch> chain_branches(double phi) {
    require_nonzero(phi);
    std::vector<ChainBranch> out;
    Observable x1 = observable_x(1, phi), z = observable_z();
    for (int mask = 0; mask < 32; mask++) {
        std::vector<int> mid;
        DiagOp2 inner = cp(phi);
        for (int pos = 0; pos < 5; pos++) {
            int outcome = (mask >> (4 - pos)) & 1 ? -1 : +1;
            Observable o = mep_observable(pos, pos == 4 ? mid[2] : 0, phi);
            inner = compose(inner, cp(phi), o.ket(outcome));
            mid.push_back(outcome);
        }
        const Observable &ends = mep_branch_sign(mid) != 0 ? x1 : z;
        for (int e1 : {+1, -1}) {
            for (int e7 : {+1, -1}) {
                DiagOp2 k = compose(compose(cp(phi), inner, ends.ket(e1)), cp(phi), ends.ket(e7));
                std::array<int, 7> o{e1, mid[0], mid[1], mid[2], mid[3], mid[4], e7};
                out.push_back({k, classify_chain(o), o});
            }
        }
    }
    return out;
}

std::array<DiagOp2, kChainClasses> chain_classes(double phi) {
    std::vector<ChainBranch> br = chain_branches(phi);
    std::array<DiagOp2, kChainClasses> out;
    for (int c = 0; c < kChainClasses; c++) {
        const ChainBranch *rep = nullptr;
        double best = -1;
        for (const auto &b : br) {
            if (static_cast<int>(b.cls) == c && mean_abs2(b.kraus) > best) {
                best = mean_abs2(b.kraus);
                rep = &b;
            }
        }
        DiagOp2 r = rep->kraus;
        double rr = dot(r, r).real();
        double weight = 0;
        for (const auto &b : br) {
            if (static_cast<int>(b.cls) != c) {
                continue;
            }
            cplx lambda = dot(r, b.kraus) / rr;
            if (max_abs_diff(b.kraus, lambda * r) > 1e-10 * std::max(1e-3, r.max_abs())) {
                throw Error(ErrorCode::InvalidParams, std::string("chain class not proportional: ") +
                                                          chain_class_name(b.cls));
            }
            weight += std::norm(lambda);
        }
        DiagOp2 k = std::sqrt(weight) * r;
        // Structural zeros (P+ / P- supports) are made exact.
        double cut = 1e-12 * k.max_abs();
        for (int i = 0; i < 4; i++) {
            if (std::abs(k[i]) < cut) {
                k[i] = 0;
            }
        }
        out[c] = k;
    }
    return out;
}

std::size_t EnumeratingSource::choose(const std::vector<double> &probs) {
    if (depth_ < stack_.size()) {
        const Level &l = stack_[depth_++];
        return l.options[l.pos];
    }
    double total = 0;
    for (double p : probs) {
        total += p;
    }
    Level l;
    for (std::size_t i = 0; i < probs.size(); i++) {
        if (probs[i] > 0) {
            l.options.push_back(i);
            l.probs.push_back(probs[i] / total);
        }
    }
    if (l.options.empty()) {
        throw Error(ErrorCode::InvalidParams, "no outcome with positive probability");
    }
    stack_.push_back(std::move(l));
    depth_++;
    return stack_.back().options[0];
}

bool EnumeratingSource::next() {
    depth_ = 0;
    while (!stack_.empty()) {
        Level &l = stack_.back();
        if (l.pos + 1 < l.options.size()) {
            l.pos++;
            return true;
        }
        stack_.pop_back();
    }
    return false;
}

double EnumeratingSource::path_probability() const {
    double p = 1;
    for (const auto &l : stack_) {
        p *= l.probs[l.pos];
    }
    return p;
}

std::size_t SampledSource::choose(const std::vector<double> &probs) {
    double total = 0;
    std::size_t last = probs.size();
    for (std::size_t i = 0; i < probs.size(); i++) {
        total += probs[i];
        if (probs[i] > 0) {
            last = i;
        }
    }
    if (last == probs.size()) {
        throw Error(ErrorCode::InvalidParams, "no outcome with positive probability");
    }
    double u = uniform_() * total;
    double acc = 0;
    for (std::size_t i = 0; i < last; i++) {
        acc += probs[i];
        if (probs[i] > 0 && u < acc) {
            return i;
        }
    }
    return last;
}

NearDetModel NearDetModel::build(double phi) {
    require_nonzero(phi);
    NearDetModel m;
    m.phi = phi;
    m.classes = chain_classes(phi);
    for (int c = 0; c < kChainClasses; c++) {
        m.class_abs2[c] = m.classes[c].abs2();
    }
    for (const auto &b : cz_gadget(Sign::Plus, phi).branches) {
        if (b.success) {
            m.cz_success = b.kraus;
        }
    }
    m.cz_probability = mean_abs2(m.cz_success);
    return m;
}

SideOutcome near_det_mep(const NearDetModel &model, int k, OutcomeSource &source, const NearDetOptions &opt) {
    if (k < 1) {
        throw Error(ErrorCode::InvalidK, "near-deterministic MEP needs k >= 1");
    }
    SideOutcome out;
    // Only |K|^2 matters for the next draw since everything is diagonal.
    std::array<double, 4> w{0.25, 0.25, 0.25, 0.25};
    std::vector<double> probs(kChainClasses);
    for (int j = 0; j < k; j++) {
        if (!opt.full_registers && out.reg.success) {
            break;
        }
        for (int c = 0; c < kChainClasses; c++) {
            const auto &a = model.class_abs2[c];
            probs[c] = w[0] * a[0] + w[1] * a[1] + w[2] * a[2] + w[3] * a[3];
        }
        int c = static_cast<int>(source.choose(probs));
        out.kraus = out.kraus * model.classes[c];
        double norm = 0;
        for (int i = 0; i < 4; i++) {
            w[i] *= model.class_abs2[c][i];
            norm += w[i];
        }
        for (auto &x : w) {
            x /= norm;
        }
        auto cls = static_cast<ChainClass>(c);
        out.chains.push_back(cls);
        SideRegisters &r = out.reg;
        switch (cls) {
            case ChainClass::SuccessPlus:
            case ChainClass::SuccessMinus:
                r.success = true;
                r.ns++;
                r.n++;
                r.sign = cls == ChainClass::SuccessPlus ? +1 : -1;
                break;
            case ChainClass::SplitPlus:
            case ChainClass::SplitMinus:
                // Not a projector; it only shifts the local angles.
                r.n++;
                break;
            default: {
                int bits = c - static_cast<int>(ChainClass::Fail00);
                r.nz_l += bits >> 1;
                r.nz_r += bits & 1;
            }
        }
    }
    return out;
}

SideOutcome near_det_mep(double phi, int k, OutcomeSource &source) {
    return near_det_mep(NearDetModel::build(phi), k, source);
}

DiagOp2 near_det_mep_shape(double phi, const SideRegisters &reg) {
    double half = reg.n / 2.0;
    DiagOp2 locals = DiagOp2::kron(rz((reg.nz_l + half) * phi), z_power(reg.ns) * rz((reg.nz_r + half) * phi));
    return locals * (reg.sign > 0 ? p_plus() : p_minus());
}

DiagOp2 ByproductFrame::op() const {
    return DiagOp2::kron(z_power(zL) * rz(rzL), z_power(zR) * rz(rzR));
}

ByproductFrame near_det_frame(double phi, const SideRegisters &left, const SideRegisters &right, int nz_L,
                              int nz_R, int b_l, int b_r) {
    int b_p = left.sign != right.sign;
    double nL = left.nz_l + nz_L + left.n / 2.0;
    double nR = right.nz_r + nz_R + right.n / 2.0;
    ByproductFrame f;
    f.zL = left.ns + b_l + b_p;
    f.zR = right.ns + b_r + b_p;
    f.rzL = nL * phi + kPi / 2;
    f.rzR = nR * phi - kPi / 2;
    return f;
}

namespace {

// Unselected lines plus the failed CZ attempts before the selected one.
DiagOp2 unselected_factor(double phi, int nz_L, int nz_R, double weight) {
    SingleQubitDiag a{1.0, std::polar(1.0, phi * nz_L)};
    SingleQubitDiag b{1.0, std::polar(1.0, phi * nz_R)};
    return DiagOp2::kron(a, b) * std::sqrt(weight);
}

// The four (q1, q5) outcomes of the selected line, index 2 b_l + b_r.
std::array<DiagOp2, 4> selected_line_branches(const NearDetModel &model, const SideOutcome &left,
                                              const SideOutcome &right, NearDetCzOutcome &out) {
    out.left = left.reg;
    out.right = right.reg;
    out.success = left.reg.success && right.reg.success;
    out.b_p = left.reg.sign != right.reg.sign;
    out.x_left = left.reg.nz_r + (left.reg.n + 1) / 2.0;
    out.x_right = right.reg.nz_l + (right.reg.n + 1) / 2.0;
    Observable ql = observable_x(out.x_left, model.phi);
    Observable qr = observable_x(out.x_right, model.phi);
    std::array<DiagOp2, 4> ks;
    for (int bl = 0; bl < 2; bl++) {
        DiagOp2 half = compose(left.kraus, model.cz_success, ql.ket(bl ? -1 : +1));
        for (int br = 0; br < 2; br++) {
            ks[2 * bl + br] = compose(half, right.kraus, qr.ket(br ? -1 : +1));
        }
    }
    return ks;
}

void finish(const NearDetModel &model, NearDetCzOutcome &out, int pick, const DiagOp2 &k, const DiagOp2 &rest) {
    out.b_l = pick >> 1;
    out.b_r = pick & 1;
    out.kraus = k * rest;
    out.frame = near_det_frame(model.phi, out.left, out.right, out.nz_L, out.nz_R, out.b_l, out.b_r);
}

}  // namespace

NearDetCzOutcome near_det_cz(const NearDetModel &model, int k, int m, OutcomeSource &source,
                             const NearDetOptions &opt) {
    if (k < 1 || m < 1) {
        throw Error(ErrorCode::InvalidParams, "near-deterministic CZ needs k, m >= 1");
    }
    NearDetCzOutcome out;
    double p = model.cz_probability;
    double fail_weight = 1;
    for (int l = 0; l < m; l++) {
        if (source.choose({p, 1 - p}) == 0) {
            out.line = l;
            break;
        }
        fail_weight *= 1 - p;
    }
    int unselected = out.line < 0 ? m : m - 1;
    double rest_weight = fail_weight;
    if (opt.full_registers) {
        // Target-adjacent chain ends of unselected lines are Z-measured;
        // each is a fair coin contributing diag(1, e^{i phi}).
        std::vector<double> pmf = binomial_half(k * unselected);
        out.nz_L = static_cast<int>(source.choose(pmf));
        out.nz_R = static_cast<int>(source.choose(pmf));
        rest_weight *= pmf[out.nz_L] * pmf[out.nz_R];
    }
    DiagOp2 rest = unselected_factor(model.phi, out.nz_L, out.nz_R, rest_weight);
    if (out.line < 0) {
        out.kraus = rest;
        return out;
    }
    SideOutcome left = near_det_mep(model, k, source, opt);
    SideOutcome right;
    if (opt.full_registers || left.reg.success) {
        right = near_det_mep(model, k, source, opt);
    }
    if (!opt.full_registers) {
        out.left = left.reg;
        out.right = right.reg;
        out.success = left.reg.success && right.reg.success;
        out.b_p = left.reg.sign != right.reg.sign;
        return out;
    }
    auto ks = selected_line_branches(model, left, right, out);
    std::vector<double> probs(4);
    for (int i = 0; i < 4; i++) {
        probs[i] = mean_abs2(ks[i]);
    }
    int pick = static_cast<int>(source.choose(probs));
    finish(model, out, pick, ks[pick], rest);
    return out;
}

std::vector<SideOutcome> side_classes(const NearDetModel &model, int k) {
    std::map<std::tuple<bool, int, int, int, int, int>, std::vector<SideOutcome>> groups;
    EnumeratingSource src;
    do {
        SideOutcome o = near_det_mep(model, k, src);
        const SideRegisters &r = o.reg;
        groups[{r.success, r.sign, r.nz_l, r.nz_r, r.n, r.ns}].push_back(std::move(o));
    } while (src.next());
    // A register group can still hold distinct operators (split chains are
    // not captured by the registers), so cluster by proportionality.
    std::vector<SideOutcome> out;
    for (auto &[key, members] : groups) {
        std::vector<SideOutcome> reps;
        std::vector<double> weights;
        for (const auto &o : members) {
            bool placed = false;
            for (size_t i = 0; i < reps.size() && !placed; i++) {
                const DiagOp2 &r = reps[i].kraus;
                cplx lambda = dot(r, o.kraus) / dot(r, r).real();
                if (max_abs_diff(o.kraus, lambda * r) <= 1e-10 * std::max(r.max_abs(), o.kraus.max_abs())) {
                    weights[i] += std::norm(lambda);
                    placed = true;
                }
            }
            if (!placed && o.kraus.max_abs() > 0) {
                reps.push_back(o);
                weights.push_back(1.0);
            }
        }
        for (size_t i = 0; i < reps.size(); i++) {
            reps[i].kraus = reps[i].kraus * std::sqrt(weights[i]);
            out.push_back(std::move(reps[i]));
        }
    }
    return out;
}

void enumerate_near_det_cz(const NearDetModel &model, int k, int m,
                           const std::function<void(const NearDetCzOutcome &, double)> &visit) {
    if (k < 1 || m < 1) {
        throw Error(ErrorCode::InvalidParams, "near-deterministic CZ needs k, m >= 1");
    }
    std::vector<SideOutcome> sides = side_classes(model, k);
    double p = model.cz_probability;
    for (int line = -1; line < m; line++) {
        int failed = line < 0 ? m : line;
        double fail_weight = std::pow(1 - p, failed);
        int unselected = line < 0 ? m : m - 1;
        std::vector<double> pmf = binomial_half(k * unselected);
        for (int a = 0; a <= k * unselected; a++) {
            for (int b = 0; b <= k * unselected; b++) {
                NearDetCzOutcome out;
                out.line = line;
                out.nz_L = a;
                out.nz_R = b;
                DiagOp2 rest = unselected_factor(model.phi, a, b, fail_weight * pmf[a] * pmf[b]);
                if (line < 0) {
                    out.kraus = rest;
                    visit(out, mean_abs2(out.kraus));
                    continue;
                }
                for (const auto &left : sides) {
                    for (const auto &right : sides) {
                        NearDetCzOutcome o = out;
                        auto ks = selected_line_branches(model, left, right, o);
                        for (int pick = 0; pick < 4; pick++) {
                            finish(model, o, pick, ks[pick], rest);
                            visit(o, mean_abs2(o.kraus));
                        }
                    }
                }
            }
        }
    }
}

NearDetCzOutcome near_det_cz(double phi, int k, int m, OutcomeSource &source) {
    return near_det_cz(NearDetModel::build(phi), k, m, source);
}

std::map<std::string, int> NearDetCzOutcome::registers() const {
    return {{"success", success},       {"line", line},
            {"sign_l", left.sign},      {"sign_r", right.sign},
            {"nz_l.left", left.nz_l},   {"nz_r.left", left.nz_r},
            {"n_l", left.n},            {"ns_l", left.ns},
            {"nz_l.right", right.nz_l}, {"nz_r.right", right.nz_r},
            {"n_r", right.n},           {"ns_r", right.ns},
            {"nz_L", nz_L},             {"nz_R", nz_R},
            {"b_l", b_l},               {"b_r", b_r},
            {"b_p", b_p}};
}

}  // namespace wgs
