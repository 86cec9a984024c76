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

#include "wgs/mbc_engine.hpp"

#include <cmath>

#include "wgs/error.hpp"

namespace wgs {

namespace {

const cplx I1(0, 1);
const cplx kIPow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};

int mod4(int x) {
    return ((x % 4) + 4) % 4;
}

int sgn0(double x) {
    return x >= 0 ? 1 : -1;
}

DiagOp2 sign_diag(const std::array<int, 4> &s) {
    return {double(s[0]), double(s[1]), double(s[2]), double(s[3])};
}

}  // namespace

DiagOp2 compose(const DiagOp2 &o1, const DiagOp2 &o2, const Ket1 &meas) {
    DiagOp2 r;
    const double s = 1 / std::sqrt(2.0);
    for (int a = 0; a < 2; a++) {
        for (int c = 0; c < 2; c++) {
            cplx acc = 0;
            for (int b = 0; b < 2; b++) {
                acc += std::conj(meas[b]) * o1.at(a, b) * o2.at(b, c);
            }
            r[2 * a + c] = acc * s;
        }
    }
    return r;
}

DiagOp2 ClosedForm::to_diag() const {
    return coefficient * (DiagOp2::kron(rz(left), rz(right)) * ep_tilde(chi) * sign_diag(usign));
}

std::array<int, 4> usign_direct(double phi1, double phi2, double theta) {
    double pp = (phi1 + phi2) / 2;
    double pm = (phi1 - phi2) / 2;
    return {sgn0(theta + pp), sgn0(theta + pm), sgn0(theta - pm), sgn0(theta - pp)};
}

std::array<int, 4> usign_from_table(double phi1, double phi2, double theta) {
    static const std::array<int, 4> U[4] = {{1, 1, 1, 1}, {1, 1, -1, -1}, {1, -1, 1, -1}, {-1, 1, 1, -1}};
    // sigma(1..4) per sign pattern (phi+, phi-, |phi+|-|phi-|), indexed by
    // 4*[phi+ < 0] + 2*[phi- < 0] + [|phi+| < |phi-|].
    static const int sigma[8][4] = {
        {1, 2, 3, 4},  // + + +  e
        {2, 1, 4, 3},  // + + -  (12)(34)
        {1, 3, 2, 4},  // + - +  (23)
        {3, 1, 4, 2},  // + - -  (1342)
        {4, 2, 3, 1},  // - + +  (14)
        {2, 4, 1, 3},  // - + -  (1243)
        {4, 3, 2, 1},  // - - +  (14)(23)
        {3, 4, 1, 2},  // - - -  (13)(24)
    };
    double pp = (phi1 + phi2) / 2;
    double pm = (phi1 - phi2) / 2;
    double hi = std::max(std::abs(pp), std::abs(pm));
    double lo = std::min(std::abs(pp), std::abs(pm));
    int row = 4 * (sgn0(pp) < 0) + 2 * (sgn0(pm) < 0) + (sgn0(std::abs(pp) - std::abs(pm)) < 0);
    const int *s = sigma[row];
    auto mul = [](const std::array<int, 4> &a, const std::array<int, 4> &b) {
        return std::array<int, 4>{a[0] * b[0], a[1] * b[1], a[2] * b[2], a[3] * b[3]};
    };
    const std::array<int, 4> czs{1, 1, 1, -1};
    if (theta > hi) {
        return U[0];
    }
    if (theta > lo) {
        return mul(U[s[0] - 1], czs);
    }
    if (theta > -lo) {
        return mul(U[s[0] - 1], U[s[1] - 1]);
    }
    std::array<int, 4> neg{-1, -1, -1, -1};
    if (theta > -hi) {
        return mul(neg, mul(U[s[3] - 1], czs));
    }
    return neg;
}

ClosedForm compose_cp_tilde(double phi1, double phi2, double theta) {
    if (phi1 == 0 || phi2 == 0) {
        throw Error(ErrorCode::ZeroWeight, "closed form needs nonzero weights");
    }
    double pp = (phi1 + phi2) / 2;
    double pm = (phi1 - phi2) / 2;
    for (double p : {pp, pm}) {
        if (std::abs(std::abs(theta) - std::abs(p)) <= 1e-12 * std::max(1.0, std::abs(theta))) {
            throw Error(ErrorCode::SingularAngle, "|theta| equals |phi+| or |phi-|, which the closed form excludes");
        }
    }
    auto st2 = std::pow(std::sin(theta / 2), 2);
    ClosedForm f;
    f.r_plus = std::log(std::abs(std::sin((pp + theta) / 2) / std::sin((pp - theta) / 2)));
    f.r_minus = std::log(std::abs(std::sin((pm + theta) / 2) / std::sin((pm - theta) / 2)));
    f.m_plus = std::sqrt(std::abs(std::pow(std::sin(pp / 2), 2) - st2));
    f.m_minus = std::sqrt(std::abs(std::pow(std::sin(pm / 2), 2) - st2));
    f.c_value = std::sqrt((f.m_plus * f.m_plus + f.m_minus * f.m_minus) / 2);
    f.chi = 4 * std::atan((f.m_plus - f.m_minus) / (f.m_plus + f.m_minus));
    f.usign = usign_direct(phi1, phi2, theta);
    double hi = std::max(std::abs(pp), std::abs(pm));
    double lo = std::min(std::abs(pp), std::abs(pm));
    f.mbc_case = (std::abs(theta) < lo || std::abs(theta) > hi) ? MbcCase::I : MbcCase::II;
    f.coefficient = I1 * f.c_value;
    f.left = ComplexAngle(I1 * (f.r_plus + f.r_minus) / 2.0);
    f.right = ComplexAngle(I1 * (f.r_plus - f.r_minus) / 2.0);
    return f;
}

ClosedForm compose_closed_form(const CanonicalForm &o1, const CanonicalForm &o2, double theta) {
    for (const auto *o : {&o1, &o2}) {
        if (std::abs(o->theta - kPi / 2) > 1e-9) {
            throw Error(ErrorCode::InvalidParams, "closed form needs CP-type operators (Schmidt phase pi/2)");
        }
    }
    ClosedForm f = compose_cp_tilde(o1.phi, o2.phi, theta);
    ComplexAngle c = o1.cB + o2.cA;
    f.coefficient *= o1.C * o2.C / std::sqrt(std::cosh(c.imag()));
    f.left = o1.cA + f.left;
    f.right = o2.cB + f.right;
    return f;
}

CaseFormulas case_formulas(double phi1, double phi2, double theta, double chi) {
    MixedSums s = mixed_sums(phi1, phi2);
    double pp = std::abs((phi1 + phi2) / 2);
    double pm = std::abs((phi1 - phi2) / 2);
    bool case_one = std::abs(theta) < std::min(pp, pm) || std::abs(theta) > std::max(pp, pm);
    CaseFormulas r;
    if (case_one) {
        double t = std::tan(chi / 2);
        r.n1 = std::abs(t * (std::cos(phi2 / 2) - std::cos(theta) * std::cos(phi1 / 2)) / (2 * s.s_minus));
        r.n2 = std::abs(t * (std::cos(phi1 / 2) - std::cos(theta) * std::cos(phi2 / 2)) / (2 * s.s_minus));
        r.sin2_half_theta = s.s_plus - s.s_minus / std::sin(chi / 2);
        r.coefficient = std::sqrt(std::abs(s.s_plus - std::pow(std::sin(theta / 2), 2)));
    } else {
        double d = 2 * s.s_minus * std::cos(chi / 2);
        r.n1 = std::abs(std::sin(phi1 / 2) * std::sin(theta) / d);
        r.n2 = std::abs(std::sin(phi2 / 2) * std::sin(theta) / d);
        r.sin2_half_theta = s.s_plus - s.s_minus * std::sin(chi / 2);
        r.coefficient = std::sqrt(std::abs(s.s_minus));
    }
    return r;
}

DiagOp2 WeightedXResult::to_diag() const {
    SingleQubitDiag zl = z_left ? SingleQubitDiag::pauli_z() : SingleQubitDiag::identity();
    SingleQubitDiag zr = z_right ? SingleQubitDiag::pauli_z() : SingleQubitDiag::identity();
    return (phase * coefficient) * apply_local(cp_family(index, weight), zl, zr);
}

WeightedXResult weighted_x_compose(Sign sign, int i, int j, double phi1, double phi2) {
    if (phi1 == 0 || phi2 == 0) {
        throw Error(ErrorCode::ZeroWeight, "weighted Pauli-X composition needs nonzero weights");
    }
    if (i < 0 || i > 3 || j < 0 || j > 3) {
        throw Error(ErrorCode::InvalidParams, "family index must be in {0,1,2,3}");
    }
    MixedSums s = mixed_sums(phi1, phi2);
    double t1 = std::tan(phi1 / 4);
    double t2 = std::tan(phi2 / 4);
    WeightedXResult r;
    if (sign == Sign::Plus) {
        r.index = mod4(i + j);
        r.weight = 4 * std::atan(t1 * t2);
        r.coefficient = std::sqrt(s.c_plus);
        r.phase = I1;
        return r;
    }
    r.index = mod4(i - j);
    r.coefficient = std::sqrt(s.s_plus);
    double ratio = t1 / t2;
    if (std::abs(ratio) <= 1) {
        r.weight = 4 * std::atan(ratio);
        r.phase = kIPow[j] * double(sgn0(std::sin(phi2 / 4)));
        r.z_right = true;
    } else {
        r.weight = 4 * std::atan(1 / ratio);
        if ((i - j) % 2 != 0) {
            r.weight = -r.weight;
        }
        r.phase = kIPow[i] * double(sgn0(std::sin(phi1 / 4)));
        r.z_left = true;
    }
    return r;
}

ChainWeight chain_weights(Sign first_sign, const std::vector<ChainStep> &steps, double phi) {
    if (steps.empty()) {
        throw Error(ErrorCode::InvalidParams, "chain needs at least one measurement");
    }
    ChainWeight acc{1, sgn(first_sign) * phi};
    for (const auto &step : steps) {
        WeightedXResult r = weighted_x_compose(step.measurement, acc.index, 1, acc.weight, sgn(step.weight_sign) * phi);
        acc = {r.index, r.weight};
    }
    return acc;
}

ChainWeight chain_weights_closed_form(int plus_count, int minus_count, int negative_count, double phi) {
    int e = plus_count - minus_count + 1;
    double t = std::pow(std::tan(phi / 4), e);
    if (negative_count % 2 != 0) {
        t = -t;
    }
    if (std::abs(t) <= 1) {
        return {mod4(e), 4 * std::atan(t)};
    }
    return {mod4(-e), 4 * std::atan(1 / t)};
}

bool same_cp_family_member(ChainWeight a, ChainWeight b, double tol) {
    DiagOp2 x = cp_family(a.index, a.weight);
    DiagOp2 y = cp_family(b.index, b.weight);
    for (int zl = 0; zl < 2; zl++) {
        for (int zr = 0; zr < 2; zr++) {
            DiagOp2 yz = apply_local(y, zl ? SingleQubitDiag::pauli_z() : SingleQubitDiag::identity(),
                                     zr ? SingleQubitDiag::pauli_z() : SingleQubitDiag::identity());
            int pivot = 0;
            for (int k = 1; k < 4; k++) {
                if (std::abs(yz[k]) > std::abs(yz[pivot])) {
                    pivot = k;
                }
            }
            cplx scale = x[pivot] / yz[pivot];
            if (max_abs_diff(x, scale * yz) <= tol) {
                return true;
            }
        }
    }
    return false;
}

double Instrument::completeness_defect() const {
    std::array<double, 4> sum{0, 0, 0, 0};
    for (const auto &b : branches) {
        auto a = b.kraus.abs2();
        for (int k = 0; k < 4; k++) {
            sum[k] += a[k];
        }
    }
    double worst = 0;
    for (double s : sum) {
        worst = std::max(worst, std::abs(s - 1));
    }
    return worst;
}

std::vector<double> Instrument::probabilities(const std::array<cplx, 4> &state) const {
    std::vector<double> out;
    out.reserve(branches.size());
    for (const auto &b : branches) {
        double p = 0;
        for (int k = 0; k < 4; k++) {
            p += std::norm(b.kraus[k] * state[k]);
        }
        out.push_back(p);
    }
    return out;
}

double Instrument::success_probability(const std::array<cplx, 4> &state) const {
    auto p = probabilities(state);
    double s = 0;
    for (size_t k = 0; k < p.size(); k++) {
        if (branches[k].success) {
            s += p[k];
        }
    }
    return s;
}

Instrument instrument(const DiagOp2 &o1, const DiagOp2 &o2, const WeightedBasis &basis) {
    Instrument ins;
    ins.branches.push_back({compose(o1, o2, basis.success), true, {-1}});
    ins.branches.push_back({compose(o1, o2, basis.failure), false, {+1}});
    return ins;
}

Instrument instrument(const DiagOp2 &o1, const DiagOp2 &o2, const Observable &obs) {
    Instrument ins;
    ins.branches.push_back({compose(o1, o2, obs.plus), false, {+1}});
    ins.branches.push_back({compose(o1, o2, obs.minus), true, {-1}});
    return ins;
}

std::array<cplx, 4> plus_plus_state() {
    return {0.5, 0.5, 0.5, 0.5};
}

}  // namespace wgs
