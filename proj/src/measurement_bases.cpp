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

#include "wgs/measurement_bases.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "wgs/error.hpp"

namespace wgs {

cplx inner(const Ket1 &bra, const Ket1 &ket) {
    return std::conj(bra.a0) * ket.a0 + std::conj(bra.a1) * ket.a1;
}

Ket1 ket_plus() {
    return {1 / std::sqrt(2.0), 1 / std::sqrt(2.0)};
}

Ket1 ket_minus() {
    return {1 / std::sqrt(2.0), -1 / std::sqrt(2.0)};
}

Ket1 apply(const SingleQubitDiag &d, const Ket1 &k) {
    return {d.d0 * k.a0, d.d1 * k.a1};
}

bool equal_up_to_phase(const Ket1 &a, const Ket1 &b, double tol) {
    return std::abs(std::abs(inner(a, b)) - std::sqrt(a.norm2() * b.norm2())) <= tol;
}

const char *basis_label_name(BasisLabel label) {
    switch (label) {
        case BasisLabel::XwPlus:
            return "Xw+";
        case BasisLabel::XwMinus:
            return "Xw-";
        case BasisLabel::YwPlus:
            return "Yw+";
        case BasisLabel::YwMinus:
            return "Yw-";
        case BasisLabel::Xwpp:
            return "Xw++";
        case BasisLabel::Xwpm:
            return "Xw+-";
        case BasisLabel::Xwmp:
            return "Xw-+";
        case BasisLabel::Xwmm:
            return "Xw--";
        case BasisLabel::PauliZ:
            return "Z";
        case BasisLabel::Custom:
            return "custom";
    }
    return "?";
}

Ket1 ket_vw(double v, double w) {
    double a = v / 2 - kPi / 4;
    return {std::polar(std::cos(a), -w / 2), std::polar(std::sin(a), w / 2)};
}

WeightedBasis success_failure_basis(ComplexAngle c1B, ComplexAngle c2B, double theta, BasisLabel label) {
    ComplexAngle c = c1B + c2B;
    double scale = 1 / std::sqrt(std::cosh(c.imag()));
    ComplexAngle s_angle(std::conj(c.value()) + theta);
    ComplexAngle f_angle(c.value() + theta);
    WeightedBasis b;
    b.success = apply(rz(s_angle), ket_minus());
    b.success.a0 *= scale;
    b.success.a1 *= scale;
    b.failure = apply(rz(f_angle), ket_plus());
    b.failure.a0 *= scale;
    b.failure.a1 *= scale;
    b.label = label;
    b.theta = theta;
    return b;
}

WeightedBasis pauli_z_basis() {
    WeightedBasis b;
    b.success = {1.0, 0.0};
    b.failure = {0.0, 1.0};
    b.label = BasisLabel::PauliZ;
    return b;
}

MixedSums mixed_sums(double phi1, double phi2) {
    double pp = (phi1 + phi2) / 2;
    double pm = (phi1 - phi2) / 2;
    double sp = std::pow(std::sin(pp / 2), 2);
    double sm = std::pow(std::sin(pm / 2), 2);
    double cpl = std::pow(std::cos(pp / 2), 2);
    double cmi = std::pow(std::cos(pm / 2), 2);
    MixedSums r;
    r.s_plus = (sp + sm) / 2;
    r.s_minus = (sp - sm) / 2;
    r.c_plus = (cpl + cmi) / 2;
    r.c_minus = (cpl - cmi) / 2;
    r.phi_u = std::max(std::abs(pp), std::abs(pm));
    r.phi_l = std::min(std::abs(pp), std::abs(pm));
    return r;
}

namespace {

void require_nonzero(double phi1, double phi2) {
    if (phi1 == 0 || phi2 == 0) {
        throw Error(ErrorCode::ZeroWeight, "weighted bases need nonzero weights");
    }
}

double half_angle(double radicand) {
    return 2 * std::asin(std::sqrt(std::clamp(radicand, 0.0, 1.0)));
}

}  // namespace

WeightedAngle weighted_y(Sign sign, double phi1, double phi2) {
    require_nonzero(phi1, phi2);
    double t = half_angle(mixed_sums(phi1, phi2).s_plus);
    return {t, sgn(sign) * t};
}

X2Radicands weighted_x2_radicands(double phi1, double phi2) {
    MixedSums s = mixed_sums(phi1, phi2);
    return {s.s_plus + std::abs(s.s_minus) / std::sin(s.phi_u / 2),
            s.s_plus - std::abs(s.s_minus) / std::cos(s.phi_l / 2)};
}

WeightedAngle weighted_x2(Sign upper, Sign lower, double phi1, double phi2) {
    require_nonzero(phi1, phi2);
    X2Radicands r = weighted_x2_radicands(phi1, phi2);
    double t = half_angle(upper == Sign::Plus ? r.upper : r.lower);
    return {t, sgn(lower) * t};
}

double step_h(double x) {
    return x > 0 ? 0.0 : 1.0;
}

GadgetAngles gadget_angles(double phi) {
    if (phi == 0) {
        throw Error(ErrorCode::ZeroWeight, "gadget angles need phi != 0");
    }
    double c = std::cos(phi / 2);
    double sign = phi > 0 ? 1.0 : -1.0;
    return {2 * std::asin(std::abs(std::sin(phi / 2)) / std::sqrt(2.0)),
            2 * std::atan(sign * c / (std::sqrt(1 + c * c) + 1))};
}

GadgetAngles alt_gadget_angles(double phi) {
    if (phi == 0) {
        throw Error(ErrorCode::ZeroWeight, "gadget angles need phi != 0");
    }
    double s = std::abs(std::sin(phi / 2));
    double sign = phi > 0 ? 1.0 : -1.0;
    return {2 * std::asin(std::sqrt(s * (1 + s) / 2)), 2 * std::atan(sign * std::sqrt(s / (2 + s)))};
}

Observable observable_x(double n, double phi) {
    std::ostringstream name;
    name << "X_" << n;
    return {ket_vw(kPi, n * phi), ket_vw(0, n * phi), name.str()};
}

Observable observable_xpm(Sign s1, Sign s2, double phi) {
    double eta = gadget_angles(phi).eta;
    double w = phi + sgn(s2) * kPi / 2 + kPi * step_h(phi);
    std::string name = std::string("X_") + (s1 == Sign::Plus ? "+" : "-") + (s2 == Sign::Plus ? "+" : "-");
    return {ket_vw(kPi + sgn(s1) * eta, w), ket_vw(sgn(s1) * eta, w), name};
}

Observable observable_y(Sign s, double phi) {
    double theta = gadget_angles(phi).theta;
    double w = phi + sgn(s) * theta;
    return {ket_vw(kPi, w), ket_vw(0, w), s == Sign::Plus ? "Y_+" : "Y_-"};
}

Observable observable_z() {
    return {{1.0, 0.0}, {0.0, 1.0}, "Z"};
}

}  // namespace wgs
