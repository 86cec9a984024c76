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

#include "wgs/operator_core.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "wgs/error.hpp"

namespace wgs {

const char *error_code_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::NotRepresentable:
            return "NotRepresentable";
        case ErrorCode::SingularAngle:
            return "SingularAngle";
        case ErrorCode::ZeroWeight:
            return "ZeroWeight";
        case ErrorCode::InvalidParams:
            return "InvalidParams";
        case ErrorCode::InvalidK:
            return "InvalidK";
        case ErrorCode::TooManyQubits:
            return "TooManyQubits";
        case ErrorCode::BranchExplosion:
            return "BranchExplosion";
        case ErrorCode::QubitAbsent:
            return "QubitAbsent";
        case ErrorCode::NonTargetResidue:
            return "NonTargetResidue";
        case ErrorCode::UnscheduledGraph:
            return "UnscheduledGraph";
        case ErrorCode::IoError:
            return "IoError";
    }
    return "Unknown";
}

ComplexAngle ComplexAngle::reduced(int *turns) const {
    double re = value_.real();
    int k = 0;
    if (std::isfinite(re)) {
        double shifted = std::ceil((re - kPi) / (2 * kPi));
        k = static_cast<int>(shifted);
        re -= 2 * kPi * k;
        if (re <= -kPi) {
            re += 2 * kPi;
            k -= 1;
        }
    }
    if (turns != nullptr) {
        *turns = k;
    }
    return {cplx(re, value_.imag())};
}

DiagOp2 DiagOp2::operator*(const DiagOp2 &o) const {
    return {d[0] * o.d[0], d[1] * o.d[1], d[2] * o.d[2], d[3] * o.d[3]};
}

DiagOp2 DiagOp2::operator*(cplx s) const {
    return {d[0] * s, d[1] * s, d[2] * s, d[3] * s};
}

DiagOp2 DiagOp2::operator+(const DiagOp2 &o) const {
    return {d[0] + o.d[0], d[1] + o.d[1], d[2] + o.d[2], d[3] + o.d[3]};
}

DiagOp2 DiagOp2::operator-(const DiagOp2 &o) const {
    return {d[0] - o.d[0], d[1] - o.d[1], d[2] - o.d[2], d[3] - o.d[3]};
}

DiagOp2 DiagOp2::adjoint() const {
    return {std::conj(d[0]), std::conj(d[1]), std::conj(d[2]), std::conj(d[3])};
}

double DiagOp2::max_abs() const {
    double m = 0;
    for (auto v : d) {
        m = std::max(m, std::abs(v));
    }
    return m;
}

std::array<double, 4> DiagOp2::abs2() const {
    return {std::norm(d[0]), std::norm(d[1]), std::norm(d[2]), std::norm(d[3])};
}

bool DiagOp2::approx_equal(const DiagOp2 &o, double tol) const {
    return max_abs_diff(*this, o) <= tol;
}

std::string DiagOp2::str() const {
    std::ostringstream out;
    out.precision(12);
    out << "diag(";
    for (int k = 0; k < 4; k++) {
        if (k) {
            out << ", ";
        }
        out << d[k].real() << (d[k].imag() < 0 ? "-" : "+") << std::abs(d[k].imag()) << "i";
    }
    out << ")";
    return out.str();
}

double max_abs_diff(const DiagOp2 &a, const DiagOp2 &b) {
    return (a - b).max_abs();
}

SingleQubitDiag rz(ComplexAngle c) {
    cplx h = cplx(0, 1) * c.value() / 2.0;
    return {std::exp(-h), std::exp(h)};
}

DiagOp2 cp(double phi) {
    return {1.0, 1.0, 1.0, std::polar(1.0, phi)};
}

DiagOp2 cz() {
    return {1.0, 1.0, 1.0, -1.0};
}

DiagOp2 p_plus() {
    return {1.0, 0.0, 0.0, 1.0};
}

DiagOp2 p_minus() {
    return {0.0, 1.0, 1.0, 0.0};
}

DiagOp2 cp_family(int index, double phi) {
    if (index < 0 || index > 3) {
        throw Error(ErrorCode::InvalidParams, "cp_family index must be in {0,1,2,3}");
    }
    static const cplx powers[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    cplx a = std::cos(phi / 4);
    cplx b = powers[index] * std::sin(phi / 4);
    return {a + b, a - b, a - b, a + b};
}

DiagOp2 from_canonical(const CanonicalForm &f) {
    cplx a = std::cos(f.phi / 4);
    cplx b = std::polar(1.0, f.theta) * std::sin(f.phi / 4);
    DiagOp2 core(a + b, a - b, a - b, a + b);
    return f.C * (DiagOp2::kron(rz(f.cA), rz(f.cB)) * core);
}

namespace {

const cplx I1(0, 1);

// Solves e^{-i x/2} = w for x, principal branch.
cplx half_angle_from(cplx w) {
    return 2.0 * I1 * std::log(w);
}

CanonicalForm finish(cplx C, cplx s, cplx t, double phi, double theta) {
    CanonicalForm f;
    int ka = 0;
    int kb = 0;
    f.cA = ComplexAngle((s + t) / 2.0).reduced(&ka);
    f.cB = ComplexAngle((s - t) / 2.0).reduced(&kb);
    f.C = ((ka + kb) % 2 == 0) ? C : -C;
    f.phi = phi;
    f.theta = theta;
    return f;
}

}  // namespace

CanonicalForm canonicalize(const DiagOp2 &op, double tol) {
    double scale = std::max(1.0, op.max_abs());
    auto zero = [&](int k) { return std::abs(op[k]) <= tol * scale; };
    bool z00 = zero(0), z01 = zero(1), z10 = zero(2), z11 = zero(3);

    CanonicalForm f;
    if (!z00 && !z11 && z01 && z10) {
        cplx c_amp = std::sqrt(op[0] * op[3]);
        f = finish(c_amp / std::sqrt(2.0), half_angle_from(op[0] / c_amp), 0.0, kPi, 0.0);
    } else if (z00 && z11 && !z01 && !z10) {
        cplx c_amp = std::sqrt(op[1] * op[2]);
        f = finish(c_amp / std::sqrt(2.0), 0.0, half_angle_from(op[1] / c_amp), -kPi, 0.0);
    } else if (z00 || z01 || z10 || z11) {
        throw Error(ErrorCode::NotRepresentable, "entry pattern " + op.str() + " has no Schmidt form");
    } else {
        cplx P = std::sqrt(op[0] * op[3]);
        cplx rho = std::sqrt(op[1] * op[2]) / P;
        if (rho.real() < -1e-15 * std::abs(rho) ||
            (std::abs(rho.real()) <= 1e-15 * std::abs(rho) && rho.imag() > 0)) {
            rho = -rho;
        }
        cplx z = (1.0 - rho) / (1.0 + rho);
        double phi = 0;
        double theta = 0;
        if (std::abs(z) > 1e-15) {
            theta = std::arg(z);
            phi = 4 * std::atan(std::abs(z));
            // Snap the CP-type boundary so that CP(-phi) lands on theta = pi/2.
            if (std::abs(std::abs(theta) - kPi / 2) < 1e-12) {
                theta = theta > 0 ? kPi / 2 : -kPi / 2;
            }
            if (theta > kPi / 2) {
                theta -= kPi;
                phi = -phi;
            } else if (theta <= -kPi / 2) {
                theta += kPi;
                phi = -phi;
            }
        }
        cplx a = std::cos(phi / 4);
        cplx b = std::polar(1.0, theta) * std::sin(phi / 4);
        cplx C = P / (a + b);
        cplx s = half_angle_from(op[0] / P);
        cplx t = half_angle_from(op[1] / (rho * P));
        f = finish(C, s, t, phi, theta);
    }
    if (max_abs_diff(from_canonical(f), op) > tol * scale * 10) {
        throw Error(ErrorCode::NotRepresentable, "reconstruction of " + op.str() + " failed");
    }
    return f;
}

double schmidt_weight(const DiagOp2 &op) {
    return canonicalize(op).phi;
}

DiagOp2 apply_local(const DiagOp2 &op, const SingleQubitDiag &left, const SingleQubitDiag &right) {
    return DiagOp2::kron(left, right) * op;
}

std::optional<LocalWitness> equal_up_to_local_diag(const DiagOp2 &a, const DiagOp2 &b, double tol) {
    bool on[4];
    cplx r[4];
    bool any = false;
    for (int k = 0; k < 4; k++) {
        on[k] = std::abs(b[k]) > tol;
        bool a_on = std::abs(a[k]) > tol;
        if (on[k] != a_on) {
            return std::nullopt;
        }
        if (on[k]) {
            r[k] = a[k] / b[k];
            any = true;
        }
    }
    if (!any) {
        return LocalWitness{0.0, {}, {}};
    }
    auto sup = [&](int x, int y) { return on[2 * x + y]; };
    auto ratio = [&](int x, int y) { return r[2 * x + y]; };

    // l0^2 = l0/l1 and r0^2 = r0/r1 wherever a row or column pair fixes them.
    std::optional<cplx> l0, r0;
    for (int y = 0; y < 2 && !l0; y++) {
        if (sup(0, y) && sup(1, y)) {
            l0 = std::sqrt(ratio(0, y) / ratio(1, y));
        }
    }
    for (int x = 0; x < 2 && !r0; x++) {
        if (sup(x, 0) && sup(x, 1)) {
            r0 = std::sqrt(ratio(x, 0) / ratio(x, 1));
        }
    }
    if (!l0 && !r0) {
        r0 = 1.0;
        if (sup(0, 0) && sup(1, 1)) {
            l0 = std::sqrt(ratio(0, 0) / ratio(1, 1));
        } else if (sup(0, 1) && sup(1, 0)) {
            l0 = std::sqrt(ratio(0, 1) / ratio(1, 0));
        }
    }
    SingleQubitDiag L{l0.value_or(1.0), 1.0 / l0.value_or(1.0)};
    SingleQubitDiag R{r0.value_or(1.0), 1.0 / r0.value_or(1.0)};
    cplx C = 0;
    for (int k = 0; k < 4; k++) {
        if (on[k]) {
            C = r[k] / (L[k >> 1] * R[k & 1]);
            break;
        }
    }
    DiagOp2 rebuilt = C * apply_local(b, L, R);
    if (max_abs_diff(rebuilt, a) > tol) {
        return std::nullopt;
    }
    return LocalWitness{C, L, R};
}

bool equal_up_to_phase(const DiagOp2 &a, const DiagOp2 &b, double tol) {
    int pivot = -1;
    for (int k = 0; k < 4; k++) {
        if (std::abs(b[k]) > std::abs(pivot < 0 ? 0.0 : b[pivot])) {
            pivot = k;
        }
    }
    if (pivot < 0 || std::abs(b[pivot]) <= tol) {
        return a.max_abs() <= tol;
    }
    cplx ph = a[pivot] / b[pivot];
    if (std::abs(std::abs(ph) - 1.0) > tol) {
        return false;
    }
    ph /= std::abs(ph);
    return max_abs_diff(a, ph * b) <= tol;
}

std::optional<cplx> scalar_multiple(const DiagOp2 &a, const DiagOp2 &b, double tol) {
    double bb = 0;
    cplx ab = 0;
    for (int k = 0; k < 4; k++) {
        bb += std::norm(b[k]);
        ab += std::conj(b[k]) * a[k];
    }
    if (bb == 0) {
        return a.max_abs() <= tol ? std::optional<cplx>(0.0) : std::nullopt;
    }
    cplx lambda = ab / bb;
    if (max_abs_diff(a, lambda * b) > tol * std::max(1.0, a.max_abs())) {
        return std::nullopt;
    }
    return lambda;
}

bool equals_rz_up_to_sign(const SingleQubitDiag &s, ComplexAngle c, double tol) {
    SingleQubitDiag e = rz(c);
    bool same = std::abs(s.d0 - e.d0) <= tol && std::abs(s.d1 - e.d1) <= tol;
    bool flip = std::abs(s.d0 + e.d0) <= tol && std::abs(s.d1 + e.d1) <= tol;
    return same || flip;
}

}  // namespace wgs
