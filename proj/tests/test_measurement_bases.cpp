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
#include "wgs/measurement_bases.hpp"

using namespace wgs;

namespace {

bool close(cplx a, cplx b, double tol = 1e-12) {
    return std::abs(a - b) <= tol;
}

}  // namespace

TEST_CASE("ket_vw examples") {
    Ket1 m = ket_vw(0, 0);
    CHECK(close(m.a0, 1 / std::sqrt(2.0)));
    CHECK(close(m.a1, -1 / std::sqrt(2.0)));
    CHECK(equal_up_to_phase(ket_vw(kPi, 0), ket_plus()));
    double phi = 0.77;
    Ket1 r = apply(rz(phi), ket_minus());
    Ket1 k = ket_vw(0, phi);
    CHECK(close(k.a0, r.a0));
    CHECK(close(k.a1, r.a1));
    for (double v : {-3.0, -1.0, 0.5, 2.5}) {
        CHECK(std::abs(ket_vw(v, 1.3).norm2() - 1) < 1e-12);
    }
}

TEST_CASE("success/failure basis examples") {
    double phi = 1.3;
    WeightedBasis b = success_failure_basis(phi / 2, phi / 2, 0);
    Ket1 want = apply(rz(phi), ket_minus());
    CHECK(close(b.success.a0, want.a0));
    CHECK(close(b.success.a1, want.a1));

    WeightedBasis c = success_failure_basis(0.0, 0.0, kPi);
    CHECK(equal_up_to_phase(c.success, ket_plus()));
    CHECK(equal_up_to_phase(c.failure, ket_minus()));

    // Unnormalized success amplitudes of rz(conj c)|-> have squared norm cosh(Im c).
    cplx shift(0, 2 * std::log(2.0));
    double n = std::cosh(shift.imag());
    CHECK(std::abs(n - 17.0 / 8) < 1e-12);
    WeightedBasis d = success_failure_basis(shift / 2.0, shift / 2.0, 0);
    CHECK(std::abs(d.success.norm2() - 1) < 1e-12);
    CHECK(std::abs(std::norm(d.success.a0) - 0.125 / n) < 1e-12);
    CHECK(std::abs(std::norm(d.success.a1) - 2.0 / n) < 1e-12);
}

TEST_CASE("success/failure pairs are orthonormal") {
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> u(-kPi, kPi);
    std::uniform_real_distribution<double> im(-2, 2);
    for (int t = 0; t < 10000; t++) {
        cplx c1(u(rng), im(rng));
        cplx c2(u(rng), im(rng));
        WeightedBasis b = success_failure_basis(c1, c2, u(rng));
        CHECK(std::abs(b.success.norm2() - 1) < 1e-12);
        CHECK(std::abs(b.failure.norm2() - 1) < 1e-12);
        CHECK(std::abs(inner(b.success, b.failure)) < 1e-12);
    }
}

TEST_CASE("real-angle flip") {
    std::mt19937_64 rng(22);
    std::uniform_real_distribution<double> u(-kPi, kPi);
    for (int t = 0; t < 1000; t++) {
        double c1 = u(rng), c2 = u(rng), th = u(rng);
        WeightedBasis a = success_failure_basis(c1, c2, th);
        WeightedBasis b = success_failure_basis(c1, c2, th + kPi);
        CHECK(equal_up_to_phase(a.failure, b.success));
    }
}

TEST_CASE("weighted Y angle") {
    CHECK(std::abs(weighted_y(Sign::Plus, kPi, kPi).magnitude - kPi / 2) < 1e-12);
    CHECK(std::abs(weighted_y(Sign::Minus, kPi, kPi).theta + kPi / 2) < 1e-12);
    for (double phi : {0.2, 1.0, -2.0, 3.0}) {
        double t = weighted_y(Sign::Plus, phi, phi).magnitude;
        CHECK(std::abs(std::sqrt(2.0) * std::sin(t / 2) - std::abs(std::sin(phi / 2))) < 1e-12);
    }
    CHECK(std::abs(weighted_y(Sign::Plus, kPi, kPi / 2).magnitude - kPi / 2) < 1e-12);
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(-kPi, kPi);
    for (int t = 0; t < 1000; t++) {
        double p1 = u(rng), p2 = u(rng);
        double a = weighted_y(Sign::Plus, p1, p2).magnitude;
        double sp = (std::pow(std::sin((p1 + p2) / 4), 2) + std::pow(std::sin((p1 - p2) / 4), 2)) / 2;
        CHECK(std::abs(std::sin(a / 2) - std::sqrt(sp)) < 1e-12);
        CHECK(a > 0);
        CHECK(a < kPi);
    }
}

TEST_CASE("weighted X2 angles") {
    for (double phi : {0.3, 1.0, -1.7, kPi}) {
        double s = std::abs(std::sin(phi / 2));
        double t = weighted_x2(Sign::Plus, Sign::Plus, phi, phi).magnitude;
        CHECK(std::abs(std::sin(t / 2) - std::sqrt(s * (1 + s) / 2)) < 1e-12);
    }
    CHECK(std::abs(weighted_x2(Sign::Plus, Sign::Plus, kPi, kPi).magnitude - kPi) < 1e-7);
    CHECK(std::abs(weighted_x2(Sign::Minus, Sign::Plus, kPi, kPi).magnitude) < 1e-7);
    CHECK(weighted_x2(Sign::Plus, Sign::Minus, 1.0, 0.5).theta < 0);
}

TEST_CASE("X2 radicands lie in [0,1] on a grid") {
    int bad = 0;
    for (int a = 0; a < 32; a++) {
        for (int b = 0; b < 32; b++) {
            double p1 = -kPi + 2 * kPi * (a + 0.5) / 32;
            double p2 = -kPi + 2 * kPi * (b + 0.5) / 32;
            X2Radicands r = weighted_x2_radicands(p1, p2);
            if (r.upper < -1e-12 || r.upper > 1 + 1e-12 || r.lower < -1e-12 || r.lower > 1 + 1e-12) {
                bad++;
            }
        }
    }
    CHECK(bad == 0);
}

TEST_CASE("step observables") {
    Observable x0 = observable_x(0, 1.2);
    CHECK(equal_up_to_phase(x0.plus, ket_plus()));
    CHECK(equal_up_to_phase(x0.minus, ket_minus()));
    Observable yp = observable_y(Sign::Plus, kPi);
    CHECK(equal_up_to_phase(yp.minus, apply(rz(kPi + kPi / 2), ket_minus())));
    CHECK(equal_up_to_phase(yp.plus, apply(rz(kPi + kPi / 2), ket_plus())));
    CHECK(std::abs(gadget_angles(kPi).eta) < 1e-12);
    Observable xmp = observable_xpm(Sign::Minus, Sign::Plus, kPi);
    CHECK(equal_up_to_phase(xmp.plus, ket_vw(kPi, 3 * kPi / 2)));
    CHECK(equal_up_to_phase(xmp.minus, ket_vw(0, 3 * kPi / 2)));
    for (double phi : {0.4, -1.0, 2.2}) {
        for (Sign s1 : {Sign::Plus, Sign::Minus}) {
            for (Sign s2 : {Sign::Plus, Sign::Minus}) {
                Observable o = observable_xpm(s1, s2, phi);
                CHECK(std::abs(inner(o.plus, o.minus)) < 1e-12);
            }
        }
    }
    GadgetAngles alt = alt_gadget_angles(kPi);
    CHECK(std::abs(alt.theta - kPi) < 1e-7);
    CHECK(std::abs(std::tan(alt.eta / 2) - std::sqrt(1.0 / 3)) < 1e-12);
}
