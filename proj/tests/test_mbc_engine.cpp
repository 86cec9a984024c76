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

#include <cmath>
#include <random>

#include "doctest.h"
#include "wgs/error.hpp"
#include "wgs/mbc_engine.hpp"

using namespace wgs;

namespace {

const cplx I1(0, 1);

// Direct evaluation of the contraction, written independently of compose().
DiagOp2 contract(const DiagOp2 &o1, const DiagOp2 &o2, const Ket1 &k) {
    DiagOp2 r;
    for (int a = 0; a < 2; a++) {
        for (int c = 0; c < 2; c++) {
            r[2 * a + c] = (std::conj(k.a0) * o1[2 * a] * o2[c] + std::conj(k.a1) * o1[2 * a + 1] * o2[2 + c]) /
                           std::sqrt(2.0);
        }
    }
    return r;
}

DiagOp2 random_diag(std::mt19937_64 &rng) {
    std::normal_distribution<double> g;
    return {cplx(g(rng), g(rng)), cplx(g(rng), g(rng)), cplx(g(rng), g(rng)), cplx(g(rng), g(rng))};
}

Ket1 random_ket(std::mt19937_64 &rng) {
    std::normal_distribution<double> g;
    Ket1 k{cplx(g(rng), g(rng)), cplx(g(rng), g(rng))};
    double n = std::sqrt(k.norm2());
    return {k.a0 / n, k.a1 / n};
}

bool off_singular(double p1, double p2, double th, double margin) {
    double pp = std::abs((p1 + p2) / 2), pm = std::abs((p1 - p2) / 2);
    return std::abs(std::abs(th) - pp) > margin && std::abs(std::abs(th) - pm) > margin;
}

}  // namespace

TEST_CASE("compose examples") {
    CHECK(max_abs_diff(compose(DiagOp2::identity(), DiagOp2::identity(), ket_plus()), DiagOp2::identity()) < 1e-12);
    for (double phi : {0.5, 1.7, -2.2, kPi}) {
        DiagOp2 s = compose(cp(phi), cp(phi), apply(rz(phi), ket_minus()));
        DiagOp2 want = std::sin(phi / 2) * apply_local(p_plus(), rz(phi / 2), SingleQubitDiag::pauli_z() * rz(phi / 2));
        CHECK(equal_up_to_phase(s, want, 1e-12));
        DiagOp2 f = compose(cp(phi), cp(-phi), ket_plus());
        DiagOp2 fw = apply_local(p_plus() + std::cos(phi / 2) * p_minus(), rz(phi / 2), rz(-phi / 2));
        CHECK(equal_up_to_phase(f, fw, 1e-12));
    }
}

TEST_CASE("compose matches independent contraction") {
    std::mt19937_64 rng(8);
    for (int t = 0; t < 500; t++) {
        DiagOp2 a = random_diag(rng), b = random_diag(rng);
        Ket1 k = random_ket(rng);
        CHECK(max_abs_diff(compose(a, b, k), contract(a, b, k)) < 1e-12);
    }
}

TEST_CASE("closed form of CP~ pairs equals contraction") {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(-kPi, kPi);
    int tested = 0;
    double worst = 0;
    while (tested < 10000) {
        double p1 = u(rng), p2 = u(rng), th = u(rng);
        if (!off_singular(p1, p2, th, 1e-3)) {
            continue;
        }
        ClosedForm f = compose_cp_tilde(p1, p2, th);
        Ket1 k = success_failure_basis(0.0, 0.0, th).success;
        worst = std::max(worst, max_abs_diff(f.to_diag(), contract(cp_tilde(p1), cp_tilde(p2), k)));
        tested++;
    }
    CHECK(worst < 1e-9);
}

TEST_CASE("closed form with complex locals equals contraction") {
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(-kPi, kPi);
    std::uniform_real_distribution<double> im(-1, 1);
    int tested = 0;
    double worst = 0;
    while (tested < 2000) {
        CanonicalForm a, b;
        a.C = cplx(u(rng), u(rng));
        b.C = cplx(u(rng), u(rng));
        a.cA = cplx(u(rng), im(rng));
        a.cB = cplx(u(rng), im(rng));
        b.cA = cplx(u(rng), im(rng));
        b.cB = cplx(u(rng), im(rng));
        a.phi = u(rng);
        b.phi = u(rng);
        a.theta = b.theta = kPi / 2;
        double th = u(rng);
        if (!off_singular(a.phi, b.phi, th, 1e-3)) {
            continue;
        }
        ClosedForm f = compose_closed_form(a, b, th);
        Ket1 k = success_failure_basis(a.cB, b.cA, th).success;
        DiagOp2 direct = contract(from_canonical(a), from_canonical(b), k);
        worst = std::max(worst, max_abs_diff(f.to_diag(), direct) / std::max(1.0, direct.max_abs()));
        tested++;
    }
    CHECK(worst < 1e-9);
    CanonicalForm e;
    e.theta = 0;
    e.phi = 1;
    CHECK_THROWS_AS(compose_closed_form(e, e, 0.3), Error);
}

TEST_CASE("closed form examples") {
    // Equal weights with theta = 0 sit on the excluded set (phi- = 0); the
    // weighted X composition covers that point.
    CHECK_THROWS_AS(compose_cp_tilde(kPi, kPi, 0.0), Error);
    WeightedXResult x = weighted_x_compose(Sign::Minus, 1, 1, kPi, kPi);
    CHECK(max_abs_diff(x.to_diag(), compose(cp_tilde(kPi), cp_tilde(kPi), ket_minus())) < 1e-12);
    CHECK(x.z_right);
    CHECK(equal_up_to_local_diag(x.to_diag(), p_plus()).has_value());
    ClosedForm f = compose_cp_tilde(kPi, kPi * (1 - 1e-6), 0.0);
    CHECK(max_abs_diff(f.to_diag(), compose(cp_tilde(kPi), cp_tilde(kPi * (1 - 1e-6)), ket_minus())) < 1e-9);
    CHECK(std::abs(std::abs(f.chi) - kPi) < 1e-5);

    for (double phi : {0.4, 1.5, -2.0, kPi}) {
        double ts = weighted_y(Sign::Plus, phi, phi).theta;
        ClosedForm y = compose_cp_tilde(phi, phi, ts);
        CHECK(y.mbc_case == MbcCase::II);
        CHECK(std::abs(std::abs(y.coefficient) - std::abs(std::sin(phi / 2)) / std::sqrt(2.0)) < 1e-12);
        CHECK(std::abs(y.chi) < 1e-9);
        CHECK(equal_up_to_local_diag(y.to_diag(), cz(), 1e-9).has_value());
    }
    ClosedForm z = compose_cp_tilde(kPi, kPi, kPi / 2);
    CHECK(std::abs(z.r_plus) < 1e-12);
    CHECK(std::abs(z.r_minus) < 1e-12);

    CHECK_THROWS_AS(compose_cp_tilde(1.0, 0.5, 0.75), Error);
    CHECK_THROWS_AS(compose_cp_tilde(1.0, 0.5, -0.25), Error);
}

TEST_CASE("U_sign table agrees with the sign definition") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-kPi, kPi);
    int checked = 0;
    int rows_seen[8] = {};
    while (checked < 20000) {
        double p1 = u(rng), p2 = u(rng), th = u(rng);
        if (!off_singular(p1, p2, th, 1e-6)) {
            continue;
        }
        double pp = (p1 + p2) / 2, pm = (p1 - p2) / 2;
        rows_seen[4 * (pp < 0) + 2 * (pm < 0) + (std::abs(pp) < std::abs(pm))]++;
        auto a = usign_direct(p1, p2, th);
        auto b = usign_from_table(p1, p2, th);
        CHECK(a == b);
        checked++;
    }
    for (int r : rows_seen) {
        CHECK(r > 0);
    }
}

TEST_CASE("case formulas for amplitudes, coefficient and angle") {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(-kPi, kPi);
    int checked = 0;
    int cases[2] = {};
    while (checked < 5000) {
        double p1 = u(rng), p2 = u(rng), th = u(rng);
        if (!off_singular(p1, p2, th, 1e-3) || std::abs(std::abs(p1) - std::abs(p2)) < 1e-3) {
            continue;
        }
        ClosedForm f = compose_cp_tilde(p1, p2, th);
        CaseFormulas c = case_formulas(p1, p2, th, f.chi);
        double n1 = std::cosh((f.r_plus + f.r_minus) / 2);
        double n2 = std::cosh((f.r_plus - f.r_minus) / 2);
        CHECK(std::abs(c.n1 - n1) < 1e-9 * n1);
        CHECK(std::abs(c.n2 - n2) < 1e-9 * n2);
        CHECK(std::abs(c.coefficient - f.c_value) < 1e-9);
        CHECK(std::abs(c.sin2_half_theta - std::pow(std::sin(th / 2), 2)) < 1e-9);
        MixedSums s = mixed_sums(p1, p2);
        // m+ m- = |S-| cos(chi/2) in case (ii); case (i) carries an extra 1/|sin(chi/2)|.
        double mm = std::abs(s.s_minus) * std::cos(f.chi / 2);
        if (f.mbc_case == MbcCase::I) {
            mm /= std::abs(std::sin(f.chi / 2));
        }
        CHECK(std::abs(f.m_plus * f.m_minus - mm) < 1e-9);
        cases[f.mbc_case == MbcCase::I ? 0 : 1]++;
        checked++;
    }
    CHECK(cases[0] > 0);
    CHECK(cases[1] > 0);
}

TEST_CASE("associativity") {
    std::mt19937_64 rng(5);
    for (int t = 0; t < 1000; t++) {
        DiagOp2 a = random_diag(rng), b = random_diag(rng), c = random_diag(rng);
        Ket1 k1 = random_ket(rng), k2 = random_ket(rng);
        DiagOp2 left = compose(compose(a, b, k1), c, k2);
        DiagOp2 right = compose(a, compose(b, c, k2), k1);
        CHECK(max_abs_diff(left, right) < 1e-12);
    }
}

TEST_CASE("local rotations on the ancilla are absorbed by the basis") {
    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> u(-kPi, kPi);
    std::uniform_real_distribution<double> im(-1.5, 1.5);
    for (int t = 0; t < 1000; t++) {
        DiagOp2 a = random_diag(rng), b = random_diag(rng);
        cplx c1(u(rng), im(rng)), c2(u(rng), im(rng));
        double th = u(rng);
        DiagOp2 a_dressed = apply_local(a, {}, rz(c1));
        DiagOp2 b_dressed = apply_local(b, rz(c2), {});
        DiagOp2 lhs = compose(a_dressed, b_dressed, success_failure_basis(c1, c2, th).success);
        DiagOp2 rhs = compose(a, b, success_failure_basis(0.0, 0.0, th).success) *
                      (1 / std::sqrt(std::cosh((c1 + c2).imag())));
        CHECK(max_abs_diff(lhs, rhs) < 1e-10 * std::max(1.0, rhs.max_abs()));
    }
}

TEST_CASE("weighted X composition is exact for every family pair") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-kPi, kPi);
    Ket1 kp = success_failure_basis(0.0, 0.0, kPi).success;
    Ket1 km = success_failure_basis(0.0, 0.0, 0.0).success;
    for (int t = 0; t < 500; t++) {
        double p1 = u(rng), p2 = u(rng);
        for (int i = 0; i < 4; i++) {
            for (int j = 0; j < 4; j++) {
                WeightedXResult rp = weighted_x_compose(Sign::Plus, i, j, p1, p2);
                WeightedXResult rm = weighted_x_compose(Sign::Minus, i, j, p1, p2);
                CHECK(max_abs_diff(rp.to_diag(), contract(cp_family(i, p1), cp_family(j, p2), kp)) < 1e-12);
                CHECK(max_abs_diff(rm.to_diag(), contract(cp_family(i, p1), cp_family(j, p2), km)) < 1e-12);
                CHECK(rp.index == (i + j) % 4);
                CHECK(rm.index == ((i - j) % 4 + 4) % 4);
                // tan(chi_c/4) = tan1 tan2 and sin(|chi_s|/2) = |S-|/S+.
                CHECK(std::abs(std::tan(rp.weight / 4) - std::tan(p1 / 4) * std::tan(p2 / 4)) < 1e-12);
                MixedSums s = mixed_sums(p1, p2);
                CHECK(std::abs(std::sin(std::abs(rm.weight) / 2) - std::abs(s.s_minus) / s.s_plus) < 1e-9);
            }
        }
    }
}

TEST_CASE("weighted X examples") {
    WeightedXResult a = weighted_x_compose(Sign::Plus, 1, 1, kPi, kPi);
    CHECK(a.index == 2);
    CHECK(std::abs(a.weight - kPi) < 1e-12);
    CHECK(equal_up_to_local_diag(a.to_diag(), p_minus()).has_value());
    WeightedXResult b = weighted_x_compose(Sign::Minus, 1, 1, 0.8, 0.8);
    CHECK(b.index == 0);
    CHECK(std::abs(b.weight - kPi) < 1e-12);
    WeightedXResult c = weighted_x_compose(Sign::Plus, 1, 0, 0.8, 1.1);
    CHECK(c.index == 1);
    CHECK(std::abs(c.phase - I1) < 1e-15);
    WeightedXResult d = weighted_x_compose(Sign::Minus, 1, 0, 0.8, 1.1);
    CHECK(std::abs(d.phase - 1.0) < 1e-15);
    CHECK(d.z_right);
    WeightedXResult e = weighted_x_compose(Sign::Minus, 0, 1, 0.8, 1.1);
    CHECK(std::abs(e.phase - I1) < 1e-15);
    CHECK(e.index == 3);
}

TEST_CASE("chain weights against contraction of CP gates") {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(0.2, kPi);
    std::bernoulli_distribution coin(0.5);
    for (int t = 0; t < 400; t++) {
        double phi = u(rng);
        int len = 1 + t % 6;
        Sign first = coin(rng) ? Sign::Plus : Sign::Minus;
        std::vector<ChainStep> steps;
        int plus = 0, minus = 0, neg = first == Sign::Minus;
        for (int s = 0; s < len; s++) {
            ChainStep st{coin(rng) ? Sign::Plus : Sign::Minus, coin(rng) ? Sign::Plus : Sign::Minus};
            (st.measurement == Sign::Plus ? plus : minus)++;
            neg += st.weight_sign == Sign::Minus;
            steps.push_back(st);
        }

        // Bases from the canonical form of the running operator.
        DiagOp2 acc = cp(sgn(first) * phi);
        for (const auto &st : steps) {
            DiagOp2 next = cp(sgn(st.weight_sign) * phi);
            CanonicalForm fa = canonicalize(acc, 1e-9);
            CanonicalForm fb = canonicalize(next);
            double th = st.measurement == Sign::Plus ? kPi : 0.0;
            acc = compose(acc, next, success_failure_basis(fa.cB, fb.cA, th).success);
        }
        ChainWeight fold = chain_weights(first, steps, phi);
        auto w = equal_up_to_local_diag(acc, cp_family(fold.index, fold.weight), 1e-9);
        CHECK(w.has_value());
        if (w) {
            CHECK(std::abs(std::abs(w->left.d0) - 1) < 1e-9);
            CHECK(std::abs(std::abs(w->right.d0) - 1) < 1e-9);
        }

        // Bases relative to C~P_(e)(phi^(e)): the measured qubit carries the CP's
        // local rotation, plus a Z after every X_w^- step.
        DiagOp2 raw = cp(sgn(first) * phi);
        double prev = sgn(first) * phi;
        bool z_pending = false;
        for (const auto &st : steps) {
            double w2 = sgn(st.weight_sign) * phi;
            ComplexAngle c1 = prev / 2 + (z_pending ? kPi : 0.0);
            double th = st.measurement == Sign::Plus ? kPi : 0.0;
            raw = compose(raw, cp(w2), success_failure_basis(c1, w2 / 2, th).success);
            z_pending = st.measurement == Sign::Minus;
            prev = w2;
        }
        ChainWeight closed = chain_weights_closed_form(plus, minus, neg, phi);
        CHECK(equal_up_to_local_diag(raw, cp_family(closed.index, closed.weight), 1e-9).has_value());
    }
    // One X_w^- measurement on two CP(phi): projection of weight pi.
    ChainWeight one = chain_weights(Sign::Plus, {{Sign::Minus, Sign::Plus}}, 1.0);
    CHECK(one.index == 0);
    CHECK(std::abs(one.weight - kPi) < 1e-12);
    ChainWeight cf = chain_weights_closed_form(0, 1, 0, 1.0);
    CHECK(cf.index == 0);
    CHECK(std::abs(cf.weight - kPi) < 1e-12);
}

TEST_CASE("failure products along alternating chains") {
    for (double phi : {0.3, 1.2, 2.9}) {
        DiagOp2 fp = compose(cp(phi), cp(phi), apply(rz(phi), ket_plus()));
        DiagOp2 fm = compose(cp(phi), cp(-phi), ket_plus());
        DiagOp2 acc = DiagOp2::identity();
        for (int k = 1; k <= 5; k++) {
            acc = acc * fp * fm;
            DiagOp2 want = std::pow(std::cos(phi / 2), k) * DiagOp2::kron(rz(k * phi), {});
            CHECK(equal_up_to_phase(acc, want, 1e-12));
        }
    }
}

TEST_CASE("instrument branches") {
    for (double phi : {0.5, 2.0, kPi}) {
        Instrument x = instrument(cp(phi), cp(phi), success_failure_basis(phi / 2, phi / 2, 0.0, BasisLabel::XwMinus));
        CHECK(x.completeness_defect() < 1e-12);
        auto p = x.probabilities(plus_plus_state());
        CHECK(std::abs(p[0] - std::pow(std::sin(phi / 2), 2) / 2) < 1e-12);
        CHECK(std::abs(p[1] - (1 + std::pow(std::cos(phi / 2), 2)) / 2) < 1e-12);

        Instrument z = instrument(cp(phi), cp(-0.7), observable_z());
        CHECK(z.completeness_defect() < 1e-12);
        CHECK(equal_up_to_phase(z.branches[0].kraus, DiagOp2::identity() * (1 / std::sqrt(2.0))));
        CHECK(equal_up_to_phase(z.branches[1].kraus, DiagOp2::kron(rz(phi), rz(-0.7)) * (1 / std::sqrt(2.0))));
    }
    double ty = weighted_y(Sign::Plus, kPi, kPi).theta;
    Instrument y = instrument(cz(), cz(), success_failure_basis(kPi / 2, kPi / 2, ty, BasisLabel::YwPlus));
    CHECK(std::abs(y.success_probability(plus_plus_state()) - 0.5) < 1e-12);
    auto w = equal_up_to_local_diag(y.branches[0].kraus, cz());
    REQUIRE(w);
    CHECK(std::abs(std::abs(w->C) - 1 / std::sqrt(2.0)) < 1e-12);
    std::mt19937_64 rng(10);
    for (int t = 0; t < 100; t++) {
        Instrument r = instrument(cp(1.1), cp(-0.4), success_failure_basis(0.3, 0.2, 1.0 * t));
        CHECK(r.completeness_defect() < 1e-10);
    }
}
