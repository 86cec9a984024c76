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

#ifndef WGS_MBC_ENGINE_HPP
#define WGS_MBC_ENGINE_HPP

#include <array>
#include <vector>

#include "wgs/measurement_bases.hpp"
#include "wgs/operator_core.hpp"

namespace wgs {

/// <meas|_B O1_{AB} O2_{BC} |+>_B.
DiagOp2 compose(const DiagOp2 &o1, const DiagOp2 &o2, const Ket1 &meas);

enum class MbcCase { I, II };

/// coefficient (rz(left) x rz(right)) EP~(chi) diag(usign).
struct ClosedForm {
    cplx coefficient;
    ComplexAngle left;
    ComplexAngle right;
    double chi = 0;
    std::array<int, 4> usign{1, 1, 1, 1};
    MbcCase mbc_case = MbcCase::I;
    // Intermediate quantities of the pair-of-CP~ formula.
    double c_value = 0;
    double m_plus = 0;
    double m_minus = 0;
    double r_plus = 0;
    double r_minus = 0;

    DiagOp2 to_diag() const;
};

/// CP~(phi1) composed with CP~(phi2) through the success ket of angle theta.
ClosedForm compose_cp_tilde(double phi1, double phi2, double theta);

/// Same, for CP-type canonical forms (theta = pi/2) with arbitrary complex
/// locals; the measurement is success_failure_basis(o1.cB, o2.cA, theta).success.
ClosedForm compose_closed_form(const CanonicalForm &o1, const CanonicalForm &o2, double theta);

std::array<int, 4> usign_direct(double phi1, double phi2, double theta);
/// U_sign assembled from the permutation table and the five theta regions.
std::array<int, 4> usign_from_table(double phi1, double phi2, double theta);

/// The case-split closed forms for the amplitudes N1 = cosh((r+ + r-)/2),
/// N2 = cosh((r+ - r-)/2), the coefficient C and sin^2(theta/2).
struct CaseFormulas {
    double n1;
    double n2;
    double coefficient;
    double sin2_half_theta;
};
CaseFormulas case_formulas(double phi1, double phi2, double theta, double chi);

/// Exact result of a weighted Pauli-X composition of C~P_(i)(phi1) and
/// C~P_(j)(phi2): phase * coefficient * (Z^zl x Z^zr) C~P_(index)(weight).
struct WeightedXResult {
    int index = 0;
    double weight = 0;
    double coefficient = 0;
    cplx phase{1.0};
    bool z_left = false;
    bool z_right = false;

    DiagOp2 to_diag() const;
};

/// X_w^+ uses the success ket of angle pi, X_w^- the one of angle 0.
WeightedXResult weighted_x_compose(Sign sign, int i, int j, double phi1, double phi2);

struct ChainStep {
    Sign measurement;  // X_w^+ or X_w^-
    Sign weight_sign;  // the next CP has weight weight_sign * phi
};
struct ChainWeight {
    int index;
    double weight;
};
/// Left fold of weighted_x_compose starting from CP~(first_sign * phi). Each
/// measurement label is relative to the canonical form of the running
/// operator (|weight| <= pi, local Z factors absorbed into the basis).
ChainWeight chain_weights(Sign first_sign, const std::vector<ChainStep> &steps, double phi);
/// tan(phi^(e)/4) = tan^e(phi/4) with e = plus - minus + 1, folded back into
/// [-pi, pi] with index e mod 4. Here labels are relative to the running
/// operator written as C~P_(e)(phi^(e)) with unrestricted weight, so this
/// differs from chain_weights whenever an intermediate |tan| exceeds 1.
ChainWeight chain_weights_closed_form(int plus_count, int minus_count, int negative_count, double phi);
/// Whether C~P_(i1)(w1) and C~P_(i2)(w2) are the same operator up to local Z
/// and a global phase.
bool same_cp_family_member(ChainWeight a, ChainWeight b, double tol = 1e-9);

struct MbcBranch {
    DiagOp2 kraus;
    bool success = false;
    std::vector<int> outcomes;  // +1 / -1 per measured qubit, in measurement order
};

struct Instrument {
    std::vector<MbcBranch> branches;

    /// max over the four diagonal entries of |sum_k |K_k|^2 - 1|.
    double completeness_defect() const;
    /// Branch probabilities on a two-qubit input (amplitudes in 00,01,10,11 order).
    std::vector<double> probabilities(const std::array<cplx, 4> &state) const;
    double success_probability(const std::array<cplx, 4> &state) const;
};

/// Two branches: success (outcome -1) and failure (outcome +1).
Instrument instrument(const DiagOp2 &o1, const DiagOp2 &o2, const WeightedBasis &basis);
/// Two branches keyed by the observable's eigenvalues; the -1 branch is flagged success.
Instrument instrument(const DiagOp2 &o1, const DiagOp2 &o2, const Observable &obs);

std::array<cplx, 4> plus_plus_state();

}  // namespace wgs

#endif
