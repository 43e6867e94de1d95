#pragma once

#include "sgn/grid.hpp"
#include "sgn/kinematics.hpp"

namespace sgn
{

/// Cut-off (zeta + 1/eps)^2 for zeta <= -1/eps, zero above. Returns zero for
/// eps <= 0.
double chi(double zeta, double epsilon);

Field chi_field(FieldView zeta, double epsilon);

/// True when some P or Q sample lies at or below -1/eps.
bool cutoff_active(FieldView P, FieldView Q, double epsilon);

/// Source and auxiliary fields of the regularized system at one instant.
struct RegFields
{
    Field A;
    Field A_x;
    Field B;
    Field V1;
    Field V2;
    Field chiP;
    Field chiQ;
};

struct ScalarPair
{
    Field A;
    Field A_x;
};

/// A = (g - gamma d^2/dx^2)^{-1} [ sqrt(3 gamma) / (48 h^{1/2}) (chi(P) - chi(Q)) ].
ScalarPair compute_A(const FlowState& s, FieldView chiP, FieldView chiQ, const Params& p,
                     const Grid& g);

/// V2 = 3 g / sqrt(3 gamma) h^{-1/2} A.
Field compute_V2(const FlowState& s, FieldView A, const Params& p);

/// V2 through its convolution form (g/16) h^{-1/2} K[h^{-1/2}(chi(P) - chi(Q))],
/// K the Helmholtz inverse. Kept for cross-checking compute_V2.
Field compute_V2_direct(const FlowState& s, FieldView chiP, FieldView chiQ, const Params& p,
                        const Grid& g);

/// V1 = (1/2) h d/dx L_h^{-1} { -u A_x + h int_{-inf}^x [3 u_x A_x / h - (chi(P)+chi(Q))/(8 h^2)] }.
/// Needs line mode.
Field compute_V1(const FlowState& s, FieldView A_x, FieldView chiP, FieldView chiQ,
                 const Params& p, const Grid& g);

/// B = L_h^{-1} { -(1/2) u A_x + d/dx [ (1/2) h^2 u_x A_x - h (chi(P)+chi(Q)) / 48 ] }.
Field compute_B(const FlowState& s, FieldView A_x, FieldView chiP, FieldView chiQ,
                const Params& p, const Grid& g);

struct MNFields
{
    Field M;
    Field N;
};

/// M = -3 h^{-2} R + V1 - V2, N = -3 h^{-2} R + V1 + V2.
MNFields compute_MN(const FlowState& s, const RegFields& reg, FieldView script_r);

/// Source fields for the dynamics (A, A_x, B, chi terms). V1 and V2 are
/// only filled when with_aux is set, since the stepper does not need them.
/// With epsilon == 0 or no active cut-off every field is identically zero.
RegFields compute_reg(const FlowState& s, FieldView P, FieldView Q, const Params& p,
                      const Grid& g, bool with_aux);

/// Pointwise energy production (1/48)(P chi(P) + Q chi(Q)); never positive.
Field dissipation_density(FieldView P, FieldView Q, double epsilon);

} // namespace sgn
