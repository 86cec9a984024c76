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

#ifndef WGS_OPERATOR_CORE_HPP
#define WGS_OPERATOR_CORE_HPP

#include <array>
#include <complex>
#include <optional>
#include <string>

namespace wgs {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTol = 1e-10;

/// Angle of a generalized Z rotation. The imaginary part scales amplitudes.
class ComplexAngle {
   public:
    ComplexAngle() = default;
    ComplexAngle(double re) : value_(re, 0.0) {
    }
    ComplexAngle(cplx value) : value_(value) {
    }
    cplx value() const {
        return value_;
    }
    double real() const {
        return value_.real();
    }
    double imag() const {
        return value_.imag();
    }
    /// Real part reduced to (-pi, pi]. `turns` receives the number of 2pi
    /// shifts removed; each one flips the sign of rz.
    ComplexAngle reduced(int *turns = nullptr) const;

    friend ComplexAngle operator+(ComplexAngle a, ComplexAngle b) {
        return {a.value_ + b.value_};
    }
    friend ComplexAngle operator-(ComplexAngle a) {
        return {-a.value_};
    }
    friend ComplexAngle operator-(ComplexAngle a, ComplexAngle b) {
        return {a.value_ - b.value_};
    }

   private:
    cplx value_{0.0, 0.0};
};

struct SingleQubitDiag {
    cplx d0{1.0};
    cplx d1{1.0};

    static SingleQubitDiag identity() {
        return {};
    }
    static SingleQubitDiag pauli_z() {
        return {1.0, -1.0};
    }
    SingleQubitDiag operator*(const SingleQubitDiag &o) const {
        return {d0 * o.d0, d1 * o.d1};
    }
    SingleQubitDiag inverse() const {
        return {1.0 / d0, 1.0 / d1};
    }
    cplx operator[](int bit) const {
        return bit ? d1 : d0;
    }
};

/// Two-qubit diagonal operator, entries in the order 00, 01, 10, 11 (first
/// qubit is the high bit).
struct DiagOp2 {
    std::array<cplx, 4> d{1.0, 1.0, 1.0, 1.0};

    DiagOp2() = default;
    DiagOp2(cplx d00, cplx d01, cplx d10, cplx d11) : d{d00, d01, d10, d11} {
    }

    static DiagOp2 identity() {
        return {};
    }
    static DiagOp2 kron(const SingleQubitDiag &a, const SingleQubitDiag &b) {
        return {a.d0 * b.d0, a.d0 * b.d1, a.d1 * b.d0, a.d1 * b.d1};
    }

    cplx &operator[](int k) {
        return d[k];
    }
    cplx operator[](int k) const {
        return d[k];
    }
    cplx at(int a, int b) const {
        return d[2 * a + b];
    }
    DiagOp2 operator*(const DiagOp2 &o) const;
    DiagOp2 operator*(cplx s) const;
    friend DiagOp2 operator*(cplx s, const DiagOp2 &o) {
        return o * s;
    }
    DiagOp2 operator+(const DiagOp2 &o) const;
    DiagOp2 operator-(const DiagOp2 &o) const;
    DiagOp2 adjoint() const;
    /// Largest entry magnitude.
    double max_abs() const;
    /// Entrywise |d|^2, i.e. the diagonal of K^dagger K.
    std::array<double, 4> abs2() const;
    bool approx_equal(const DiagOp2 &o, double tol = kTol) const;
    std::string str() const;
};

double max_abs_diff(const DiagOp2 &a, const DiagOp2 &b);

SingleQubitDiag rz(ComplexAngle c);

DiagOp2 cp(double phi);
DiagOp2 cz();
DiagOp2 p_plus();
DiagOp2 p_minus();
/// cos(phi/4) II + i^index sin(phi/4) ZZ.
DiagOp2 cp_family(int index, double phi);
inline DiagOp2 cp_tilde(double phi) {
    return cp_family(1, phi);
}
inline DiagOp2 ep_tilde(double phi) {
    return cp_family(0, phi);
}

/// O = C (rz(cA) x rz(cB)) (cos(phi/4) II + e^{i theta} sin(phi/4) ZZ).
struct CanonicalForm {
    cplx C{1.0};
    ComplexAngle cA;
    ComplexAngle cB;
    double phi = 0.0;
    double theta = 0.0;
};

DiagOp2 from_canonical(const CanonicalForm &f);
CanonicalForm canonicalize(const DiagOp2 &op, double tol = kTol);
double schmidt_weight(const DiagOp2 &op);
DiagOp2 apply_local(const DiagOp2 &op, const SingleQubitDiag &left, const SingleQubitDiag &right);

struct LocalWitness {
    cplx C;
    SingleQubitDiag left;
    SingleQubitDiag right;
};

/// Finds (C, L, R) with A = C (L x R) B within tol. L and R are returned with
/// unit determinant, so each is rz of some complex angle; the witness is
/// unique up to simultaneous sign flips.
std::optional<LocalWitness> equal_up_to_local_diag(const DiagOp2 &a, const DiagOp2 &b, double tol = kTol);

/// Returns true when a = e^{i chi} b for some chi.
bool equal_up_to_phase(const DiagOp2 &a, const DiagOp2 &b, double tol = kTol);

/// True when s = +/- rz(c) for the given angle.
/// lambda with a = lambda * b (least squares), if the residual is within tol
/// relative to max(1, |a|_max).
std::optional<cplx> scalar_multiple(const DiagOp2 &a, const DiagOp2 &b, double tol = kTol);

bool equals_rz_up_to_sign(const SingleQubitDiag &s, ComplexAngle c, double tol = kTol);

}  // namespace wgs

#endif
