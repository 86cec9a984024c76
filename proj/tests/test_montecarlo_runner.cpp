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
#include <sstream>

#include "doctest.h"
#include "wgs/error.hpp"
#include "wgs/montecarlo_runner.hpp"
#include "wgs/philox.hpp"

using namespace wgs;

TEST_CASE("philox known answers") {
    using C = Philox4x32::Counter;
    CHECK(Philox4x32::block({0, 0, 0, 0}, {0, 0}) == C{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
    CHECK(Philox4x32::block({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}) ==
          C{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
    CHECK(Philox4x32::block({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}) ==
          C{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("philox stream golden outputs") {
    PhiloxStream s(20260611, 0, 0);
    CHECK(s.next_u32() == 0xbbefe078u);
    CHECK(s.next_u32() == 0x83e78401u);
    CHECK(s.next_u32() == 0x7ff100c9u);
    CHECK(s.next_u32() == 0xd287c0b2u);
    // The stream is block 0 of counter (0, trial, edge, 0).
    auto b = Philox4x32::block({0, 0, 0, 0}, {20260611u, 0});
    CHECK(b[0] == 0xbbefe078u);
    PhiloxStream u(20260611, 7, 3);
    CHECK(u.uniform() == 0.78175994187952602);
    CHECK(u.uniform() == 0.44480570878044923);
    for (int i = 0; i < 1000; i++) {
        double x = u.uniform();
        CHECK((x >= 0 && x < 1));
    }
}

TEST_CASE("estimate_protocol golden and determinism") {
    McReport a = estimate_protocol(kPi, 2, 16, 16, 20000, 20260611, 1);
    CHECK(a.successes == 12);
    McReport b = estimate_protocol(kPi, 2, 16, 16, 20000, 20260611, 3);
    CHECK(a.successes == b.successes);
    McReport c = estimate_protocol(kPi, 2, 16, 16, 20000, 20260612, 1);
    CHECK(c.trials == 20000);
    CHECK(a.analytic_value == overall_probability(kPi, 2, 16, 16));
}

TEST_CASE("invalid arguments") {
    CHECK_THROWS_AS(estimate_edge(kPi, 1, 1, 0, 1), Error);
    CHECK_THROWS_AS(estimate_protocol(kPi, 1, 1, 1, 10, 1), Error);
    CHECK_THROWS_AS(estimate_edge(kPi, 0, 1, 10, 1), Error);
}

TEST_CASE("single edge estimate at pi") {
    McReport r = estimate_edge(kPi, 1, 1, 200000, 5, 2);
    double want = d_k(kPi, 1) * d_k(kPi, 1) * e_m(kPi, 1);
    CHECK(r.analytic_value == doctest::Approx(want).epsilon(1e-15));
    CHECK(std::abs(r.z_score) < 4);
    CHECK(std::abs(r.estimate - want) < 5 * std::sqrt(want / r.trials));
}

TEST_CASE("sweep") {
    auto rows = sweep({kPi, kPi / 2}, {1, 4}, {2}, 2, 1000, 3);
    CHECK(rows.size() == 4);
    std::string csv = sweep_csv(rows);
    std::istringstream in(csv);
    std::string header;
    std::getline(in, header);
    CHECK(header == "phi,n,k,m,N,Dk,Em,P,estimate,stderr,z");
    for (const auto &r : rows) {
        CHECK(r.N == 2.0 * r.n * (r.n - 1) * (5 * r.m + 14.0 * r.k * r.m));
    }
    CHECK(rows[1].k == 4);
    CHECK(rows[1].N == 4 * (10 + 14 * 4 * 2));
    CHECK(csv == sweep_csv(sweep({kPi, kPi / 2}, {1, 4}, {2}, 2, 1000, 3)));

    auto one = sweep({kPi}, {16}, {16}, 2, 20000, 20260611);
    REQUIRE(one.size() == 1);
    CHECK(one[0].report.successes == estimate_protocol(kPi, 2, 16, 16, 20000, 20260611).successes);
}

TEST_CASE("register distribution sums to one") {
    for (double phi : {kPi, 1.0}) {
        auto dist = register_distribution(NearDetModel::build(phi), 2, 2);
        double total = 0;
        for (const auto &[key, p] : dist) {
            total += p;
        }
        CHECK(std::abs(total - 1) < 1e-12);
    }
}

TEST_CASE("sampled registers fit the enumeration") {
    ChiSquare c = register_goodness_of_fit(1.0, 1, 2, 200000, 11);
    CHECK(c.dof > 5);
    CHECK(c.p_value > 0.001);
    ChiSquare d = register_goodness_of_fit(kPi, 2, 1, 200000, 12);
    CHECK(d.p_value > 0.001);
}
