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
#include <map>
#include <random>

#include "doctest.h"
#include "wgs/error.hpp"
#include "wgs/protocol_gadgets.hpp"

using namespace wgs;

namespace {

std::array<double, 4> effect(const Instrument &ins, bool success_only) {
    std::array<double, 4> e{};
    for (const auto &b : ins.branches) {
        if (success_only && !b.success) {
            continue;
        }
        auto a = b.kraus.abs2();
        for (int i = 0; i < 4; i++) {
            e[i] += a[i];
        }
    }
    return e;
}

const MbcBranch &unique_success(const Instrument &ins) {
    const MbcBranch *s = nullptr;
    int count = 0;
    for (const auto &b : ins.branches) {
        if (b.success) {
            s = &b;
            count++;
        }
    }
    REQUIRE(count == 1);
    return *s;
}

double mean_abs2(const DiagOp2 &k) {
    auto a = k.abs2();
    return (a[0] + a[1] + a[2] + a[3]) / 4;
}

std::array<cplx, 4> random_product(std::mt19937_64 &rng) {
    std::normal_distribution<double> g;
    auto one = [&] {
        cplx a(g(rng), g(rng)), b(g(rng), g(rng));
        double n = std::sqrt(std::norm(a) + std::norm(b));
        return std::pair<cplx, cplx>(a / n, b / n);
    };
    auto [a0, a1] = one();
    auto [b0, b1] = one();
    return {a0 * b0, a0 * b1, a1 * b0, a1 * b1};
}

const double kGrid[] = {kPi, 2.5, 1.0, 0.4, -0.7, -2.0, -kPi / 3};

}  // namespace

TEST_CASE("closed-form probabilities at phi = pi") {
    CHECK(std::abs(p_cz(kPi) - 1.0 / 8) < 1e-12);
    CHECK(std::abs(p_p(kPi) - 1.0 / 16) < 1e-12);
    CHECK(std::abs(p_cz_alt(kPi) - 1.0 / 64) < 1e-12);
    CHECK(std::abs(d_k(kPi, 1) - 1.0 / 32) < 1e-12);
    CHECK(std::abs(d_k(kPi, 16) - (1 - std::pow(31.0 / 32, 16))) < 1e-12);
    CHECK(std::abs(d_k(kPi, 16) - 0.3982897) < 1e-7);
    CHECK(std::abs(e_m(kPi, 1) - 1.0 / 8) < 1e-12);
    double edge = d_k(kPi, 16) * d_k(kPi, 16) * e_m(kPi, 16);
    CHECK(std::abs(edge - 0.1399051) < 1e-7);
}

TEST_CASE("asymptotic constants") {
    double phi = 1e-3;
    CHECK(std::abs(p_cz(phi) * 256 / std::pow(phi, 4) - 1) < 1e-4);
    CHECK(std::abs(p_p(phi) * 2048 / std::pow(phi, 6) - 1) < 1e-4);
}

TEST_CASE("alternative CZ is less efficient") {
    for (int i = 1; i <= 1000; i++) {
        double phi = kPi * i / 1000;
        CHECK(p_cz_alt(phi) < p_cz(phi));
    }
    GadgetAngles a = alt_gadget_angles(kPi);
    CHECK(std::abs(std::sin(a.theta / 2) - 1) < 1e-12);
    CHECK(std::abs(std::tan(a.eta / 2) - std::sqrt(1.0 / 3)) < 1e-12);
}

TEST_CASE("cz gadget") {
    for (double phi : kGrid) {
        for (Sign s : {Sign::Plus, Sign::Minus}) {
            Instrument ins = cz_gadget(s, phi);
            CHECK(ins.branches.size() == 8);
            CHECK(ins.completeness_defect() < 1e-10);
            const MbcBranch &ok = unique_success(ins);
            CHECK(equal_up_to_phase(ok.kraus, cz_success_kraus(phi), 1e-10));
            auto w = equal_up_to_local_diag(ok.kraus, cz(), 1e-10);
            CHECK(w.has_value());
            double total = 0;
            for (double p : ins.probabilities(plus_plus_state())) {
                total += p;
            }
            CHECK(std::abs(total - 1) < 1e-12);
            CHECK(std::abs(ins.success_probability(plus_plus_state()) - p_cz(phi)) < 1e-12);
        }
    }
    Instrument pi_ins = cz_gadget(Sign::Plus, kPi);
    DiagOp2 want = (1 / std::sqrt(8.0)) * (DiagOp2::kron(rz(kPi), rz(0.0)) * cz());
    CHECK(equal_up_to_phase(unique_success(pi_ins).kraus, want, 1e-12));
    CHECK_THROWS_AS(cz_gadget(Sign::Plus, 0.0), Error);
}

TEST_CASE("alternative cz gadget") {
    for (double phi : kGrid) {
        Instrument ins = alt_cz_gadget(phi);
        CHECK(ins.branches.size() == 16);
        CHECK(ins.completeness_defect() < 1e-10);
        CHECK(equal_up_to_phase(unique_success(ins).kraus, alt_cz_success_kraus(phi), 1e-10));
    }
}

TEST_CASE("mep gadget") {
    std::mt19937_64 rng(7);
    for (double phi : kGrid) {
        Instrument ins = mep_gadget(phi);
        CHECK(ins.branches.size() == 32);
        CHECK(ins.completeness_defect() < 1e-10);
        int found = 0;
        for (const auto &b : ins.branches) {
            int s = mep_branch_sign(b.outcomes);
            CHECK(b.success == (s != 0));
            if (s != 0) {
                found++;
                CHECK(b.outcomes[0] == -1);
                CHECK(b.outcomes[2] == (s > 0 ? -1 : +1));
                CHECK(equal_up_to_phase(b.kraus, mep_success_kraus(s > 0 ? Sign::Plus : Sign::Minus, phi), 1e-10));
            }
        }
        CHECK(found == 2);
        for (int t = 0; t < 20; t++) {
            CHECK(std::abs(ins.success_probability(random_product(rng)) - p_p(phi)) < 1e-12);
        }
        DiagOp2 prod = mep_success_kraus(Sign::Plus, phi) * mep_success_kraus(Sign::Minus, phi);
        CHECK(prod.max_abs() < 1e-15);
    }
}

TEST_CASE("detach") {
    double phi = 0.9;
    Instrument ins = detach(phi);
    REQUIRE(ins.branches.size() == 2);
    CHECK(ins.completeness_defect() < 1e-12);
    CHECK(max_abs_diff(ins.branches[0].kraus, (1 / std::sqrt(2.0)) * DiagOp2::identity()) < 1e-12);
    CHECK(equal_up_to_phase(ins.branches[1].kraus, (1 / std::sqrt(2.0)) * DiagOp2::kron(rz(phi), rz(phi)), 1e-12));
    auto p = ins.probabilities(plus_plus_state());
    CHECK(std::abs(p[0] - 0.5) < 1e-12);
    CHECK(std::abs(p[1] - 0.5) < 1e-12);
}

TEST_CASE("chain classes") {
    for (double phi : kGrid) {
        auto raw = chain_branches(phi);
        CHECK(raw.size() == 128);
        std::array<double, 4> e{};
        for (const auto &b : raw) {
            auto a = b.kraus.abs2();
            for (int i = 0; i < 4; i++) {
                e[i] += a[i];
            }
        }
        for (double x : e) {
            CHECK(std::abs(x - 1) < 1e-10);
        }
        auto cls = chain_classes(phi);
        std::array<double, 4> f{};
        for (const auto &c : cls) {
            auto a = c.abs2();
            for (int i = 0; i < 4; i++) {
                f[i] += a[i];
            }
        }
        for (double x : f) {
            CHECK(std::abs(x - 1) < 1e-10);
        }
        // Successful lines: weight d_single per sign on its projector support.
        auto sp = cls[static_cast<int>(ChainClass::SuccessPlus)].abs2();
        CHECK(std::abs(sp[0] - d_single(phi)) < 1e-12);
        CHECK(sp[1] == 0.0);
    }
}

TEST_CASE("enumerating source walks every path once") {
    EnumeratingSource src;
    int paths = 0;
    double total = 0;
    do {
        std::size_t a = src.choose({0.5, 0.0, 0.5});
        std::size_t b = src.choose({1, 3});
        CHECK(a != 1);
        (void)b;
        total += src.path_probability();
        paths++;
    } while (src.next());
    CHECK(paths == 4);
    CHECK(std::abs(total - 1) < 1e-15);
}

TEST_CASE("near-deterministic MEP by enumeration") {
    for (double phi : {kPi, 1.0, -2.0}) {
        NearDetModel model = NearDetModel::build(phi);
        for (int k = 1; k <= 3; k++) {
            EnumeratingSource src;
            std::array<double, 4> all{}, succ{};
            int bad = 0;
            do {
                SideOutcome o = near_det_mep(model, k, src);
                double pp = src.path_probability();
                if (std::abs(mean_abs2(o.kraus) - pp) > 1e-12) {
                    bad++;
                }
                auto a = o.kraus.abs2();
                for (int i = 0; i < 4; i++) {
                    all[i] += a[i];
                    if (o.reg.success) {
                        succ[i] += a[i];
                    }
                }
                if (o.reg.success && !scalar_multiple(o.kraus, near_det_mep_shape(phi, o.reg), 1e-10)) {
                    bad++;
                }
            } while (src.next());
            CHECK(bad == 0);
            for (int i = 0; i < 4; i++) {
                CHECK(std::abs(all[i] - 1) < 1e-10);
                CHECK(std::abs(succ[i] - d_k(phi, k)) < 1e-10);
            }
        }
    }
}

TEST_CASE("near-deterministic MEP against raw chain products") {
    double phi = 1.3;
    auto raw = chain_branches(phi);
    for (int k = 1; k <= 2; k++) {
        std::array<double, 4> succ{};
        std::size_t total = std::size_t(1) << (7 * k);
        int bad = 0;
        for (std::size_t idx = 0; idx < total; idx++) {
            DiagOp2 K;
            SideRegisters reg;
            for (int j = 0; j < k; j++) {
                const ChainBranch &b = raw[(idx >> (7 * j)) & 127];
                K = K * b.kraus;
                bool ok = b.outcomes[1] < 0 && b.outcomes[2] < 0 && b.outcomes[4] < 0 && b.outcomes[5] < 0;
                if (ok) {
                    reg.n++;
                    if (b.outcomes[0] == b.outcomes[6]) {
                        reg.sign = b.outcomes[3] < 0 ? +1 : -1;
                        reg.ns++;
                        reg.success = true;
                    }
                } else {
                    reg.nz_l += b.outcomes[0] < 0;
                    reg.nz_r += b.outcomes[6] < 0;
                }
            }
            if (!reg.success || K.max_abs() < 1e-13) {
                continue;
            }
            auto a = K.abs2();
            for (int i = 0; i < 4; i++) {
                succ[i] += a[i];
            }
            if (!scalar_multiple(K, near_det_mep_shape(phi, reg), 1e-9)) {
                bad++;
            }
        }
        CHECK(bad == 0);
        for (double x : succ) {
            CHECK(std::abs(x - d_k(phi, k)) < 1e-10);
        }
    }
}

TEST_CASE("near-deterministic MEP success is input independent") {
    std::mt19937_64 rng(3);
    double phi = 0.8;
    NearDetModel model = NearDetModel::build(phi);
    std::vector<DiagOp2> success;
    EnumeratingSource src;
    do {
        SideOutcome o = near_det_mep(model, 2, src);
        if (o.reg.success) {
            success.push_back(o.kraus);
        }
    } while (src.next());
    double lo = 1, hi = 0;
    for (int t = 0; t < 100; t++) {
        auto psi = random_product(rng);
        double p = 0;
        for (const auto &K : success) {
            for (int i = 0; i < 4; i++) {
                p += std::norm(K[i] * psi[i]);
            }
        }
        lo = std::min(lo, p);
        hi = std::max(hi, p);
    }
    CHECK(hi - lo < 1e-10);
    CHECK(std::abs(hi - d_k(phi, 2)) < 1e-10);
}

TEST_CASE("near-deterministic CZ by enumeration") {
    for (double phi : {kPi, 1.0, -2.0}) {
        NearDetModel model = NearDetModel::build(phi);
        for (int k = 1; k <= 2; k++) {
            for (int m = 1; m <= 2; m++) {
                EnumeratingSource src;
                std::array<double, 4> all{};
                double succ = 0;
                int bad = 0;
                do {
                    NearDetCzOutcome o = near_det_cz(model, k, m, src);
                    if (std::abs(mean_abs2(o.kraus) - src.path_probability()) > 1e-12) {
                        bad++;
                    }
                    auto a = o.kraus.abs2();
                    for (int i = 0; i < 4; i++) {
                        all[i] += a[i];
                    }
                    if (o.success) {
                        succ += mean_abs2(o.kraus);
                        if (!scalar_multiple(o.kraus, o.frame.op() * cz(), 1e-10)) {
                            bad++;
                        }
                        if (o.x_left != o.left.nz_r + (o.left.n + 1) / 2.0) {
                            bad++;
                        }
                    }
                } while (src.next());
                CHECK(bad == 0);
                for (double x : all) {
                    CHECK(std::abs(x - 1) < 1e-10);
                }
                double want = d_k(phi, k) * d_k(phi, k) * e_m(phi, m);
                CHECK(std::abs(succ - want) < 1e-10);
            }
        }
    }
}

TEST_CASE("merged CZ enumeration matches raw replay") {
    for (double phi : {kPi, 1.0}) {
        NearDetModel model = NearDetModel::build(phi);
        for (int k = 1; k <= 2; k++) {
            for (int m = 1; m <= 2; m++) {
                std::map<std::map<std::string, int>, double> raw, merged;
                EnumeratingSource src;
                do {
                    NearDetCzOutcome o = near_det_cz(model, k, m, src);
                    raw[o.registers()] += src.path_probability();
                } while (src.next());
                enumerate_near_det_cz(model, k, m, [&](const NearDetCzOutcome &o, double p) {
                    merged[o.registers()] += p;
                });
                CHECK(raw.size() == merged.size());
                double worst = 0;
                for (const auto &[key, p] : raw) {
                    worst = std::max(worst, std::abs(p - merged[key]));
                }
                CHECK(worst < 1e-12);
            }
        }
    }
}

TEST_CASE("merged CZ enumeration at k = m = 3") {
    double phi = 0.9;
    NearDetModel model = NearDetModel::build(phi);
    std::array<double, 4> all{};
    double succ = 0;
    int bad = 0;
    enumerate_near_det_cz(model, 3, 3, [&](const NearDetCzOutcome &o, double p) {
        auto a = o.kraus.abs2();
        for (int i = 0; i < 4; i++) {
            all[i] += a[i];
        }
        if (std::abs(mean_abs2(o.kraus) - p) > 1e-14) {
            bad++;
        }
        if (o.success) {
            succ += p;
            if (!scalar_multiple(o.kraus, o.frame.op() * cz(), 1e-10)) {
                bad++;
            }
        }
    });
    CHECK(bad == 0);
    for (double x : all) {
        CHECK(std::abs(x - 1) < 1e-10);
    }
    CHECK(std::abs(succ - d_k(phi, 3) * d_k(phi, 3) * e_m(phi, 3)) < 1e-10);
}

TEST_CASE("success-only sampling") {
    NearDetModel model = NearDetModel::build(kPi);
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u;
    SampledSource src([&] { return u(rng); });
    int hits = 0, trials = 20000;
    for (int t = 0; t < trials; t++) {
        hits += near_det_cz(model, 4, 4, src, {false}).success;
    }
    double p = d_k(kPi, 4) * d_k(kPi, 4) * e_m(kPi, 4);
    double z = (hits / double(trials) - p) / std::sqrt(p * (1 - p) / trials);
    CHECK(std::abs(z) < 5);
}

TEST_CASE("analytic values") {
    AnalyticValues a = analytic(kPi, 3, 3, 3, 0.1);
    CHECK(a.N == 1692);
    CHECK(std::abs(a.P - std::pow(a.D_k * a.D_k * a.E_m, 12)) < 1e-15);
    AnalyticValues b = analytic(kPi, 2, 1, 1, 0.1);
    CHECK(b.k_min == static_cast<std::int64_t>(std::ceil(64 * std::pow(kPi, 8) * std::pow(kPi, -8) * std::log(160.0))));
    CHECK(b.P_at_min >= 0.9);
    CHECK_THROWS_AS(analytic(kPi, 1, 1, 1, 0.1), Error);
    CHECK_THROWS_AS(analytic(kPi, 2, 1, 1, 0), Error);
}
