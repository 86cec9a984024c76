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

#ifndef WGS_MEASUREMENT_BASES_HPP
#define WGS_MEASUREMENT_BASES_HPP

#include <string>

#include "wgs/operator_core.hpp"

namespace wgs {

struct Ket1 {
    cplx a0{1.0};
    cplx a1{0.0};

    cplx operator[](int bit) const {
        return bit ? a1 : a0;
    }
    double norm2() const {
        return std::norm(a0) + std::norm(a1);
    }
};

cplx inner(const Ket1 &bra, const Ket1 &ket);
Ket1 ket_plus();
Ket1 ket_minus();
Ket1 apply(const SingleQubitDiag &d, const Ket1 &k);
bool equal_up_to_phase(const Ket1 &a, const Ket1 &b, double tol = kTol);

enum class BasisLabel { XwPlus, XwMinus, YwPlus, YwMinus, Xwpp, Xwpm, Xwmp, Xwmm, PauliZ, Custom };

const char *basis_label_name(BasisLabel label);

struct WeightedBasis {
    Ket1 success;
    Ket1 failure;
    BasisLabel label = BasisLabel::Custom;
    double theta = 0.0;
};

enum class Sign { Plus = +1, Minus = -1 };

inline double sgn(Sign s) {
    return s == Sign::Plus ? 1.0 : -1.0;
}

/// R_z(w) R_y(v) |->, written out.
Ket1 ket_vw(double v, double w);

WeightedBasis success_failure_basis(ComplexAngle c1B, ComplexAngle c2B, double theta,
                                    BasisLabel label = BasisLabel::Custom);

/// Pauli-Z basis; "success" is |0>.
WeightedBasis pauli_z_basis();

/// S_+ = (sin^2(phi+/2) + sin^2(phi-/2))/2, S_- = (sin^2(phi+/2) - sin^2(phi-/2))/2
/// with phi+- = (phi1 +- phi2)/2; C_+- likewise with cosines.
struct MixedSums {
    double s_plus, s_minus, c_plus, c_minus;
    double phi_u, phi_l;
};
MixedSums mixed_sums(double phi1, double phi2);

struct WeightedAngle {
    double magnitude;  // in [0, pi]
    double theta;      // signed
};

WeightedAngle weighted_y(Sign sign, double phi1, double phi2);
/// `upper` picks the theta_+ / theta_- family, `lower` the sign of theta.
WeightedAngle weighted_x2(Sign upper, Sign lower, double phi1, double phi2);

/// Radicands of the two weighted X2 angles before clamping.
struct X2Radicands {
    double upper;
    double lower;
};
X2Radicands weighted_x2_radicands(double phi1, double phi2);

/// Two-outcome single-qubit observable: `plus` is the +1 eigenket.
struct Observable {
    Ket1 plus;
    Ket1 minus;
    std::string name;

    const Ket1 &ket(int outcome) const {
        return outcome > 0 ? plus : minus;
    }
};

struct GadgetAngles {
    double theta;
    double eta;
};
/// sin(theta/2) = |sin(phi/2)|/sqrt2, tan(eta/2) = sgn(phi) cos(phi/2)/(sqrt(1+cos^2(phi/2))+1).
GadgetAngles gadget_angles(double phi);
/// The primed angles of the alternative CZ method.
GadgetAngles alt_gadget_angles(double phi);

double step_h(double x);

Observable observable_x(double n, double phi);
Observable observable_xpm(Sign s1, Sign s2, double phi);
Observable observable_y(Sign s, double phi);
Observable observable_z();

}  // namespace wgs

#endif
