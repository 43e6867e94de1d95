#pragma once

#include "sgn/grid.hpp"
#include "sgn/kinematics.hpp"

namespace sgn
{

/// Symmetric tridiagonal operator, optionally cyclic.
///
/// Row i reads sub[i] x[i-1] + diag[i] x[i] + sup[i] x[i+1]. In periodic
/// mode the wrap-around couplings live in corner_lower (row 0, column n-1)
/// and corner_upper (row n-1, column 0); sub[0] and sup[n-1] are unused and
/// zero in both modes.
struct TridiagonalSystem
{
    Field sub;
    Field diag;
    Field sup;
    double corner_lower = 0.0;
    double corner_upper = 0.0;
    Mode mode = Mode::periodic;

    int size() const { return static_cast<int>(diag.size()); }
};

/// Flux-form discretization of L_h = h - (1/3) d/dx h^3 d/dx with face
/// values ((h_i + h_{i+1}) / 2)^3. Line mode closes with zero flux through
/// the end faces.
TridiagonalSystem assemble_L(FieldView h, const Grid& g);

/// g - gamma d^2/dx^2 with the standard three-point second difference.
TridiagonalSystem assemble_helmholtz(const Params& p, const Grid& g);

Field matvec(const TridiagonalSystem& sys, FieldView x);
inline Field apply_L(const TridiagonalSystem& sys, FieldView x) { return matvec(sys, x); }

/// Thomas elimination (line) or Sherman-Morrison corrected cyclic solve
/// (periodic). Throws solver error if the relative residual exceeds 1e-10.
Field solve(const TridiagonalSystem& sys, FieldView rhs);
inline Field solve_L(const TridiagonalSystem& sys, FieldView psi) { return solve(sys, psi); }

/// h u - (1/3) D(h^3 D u) with D the 4th-order first derivative.
Field apply_L_fourth(FieldView h, FieldView u, const Grid& g);

/// L_h^{-1} psi refined by one defect-correction sweep against
/// apply_L_fourth, lifting the tridiagonal inverse to 4th-order accuracy.
/// sys must come from assemble_L(h, g).
Field solve_L_refined(const TridiagonalSystem& sys, FieldView h, FieldView psi, const Grid& g);

/// (g - gamma d^2/dx^2)^{-1} rhs
Field solve_helmholtz(FieldView rhs, const Params& p, const Grid& g);

/// L_h^{-1} d/dx psi, using the refined inverse.
Field inv_L_dx(FieldView h, FieldView psi, const Grid& g);

/// script_r = C + (1/3) h^3 d/dx L_h^{-1} d/dx (C + F(h)).
Field script_r(const FlowState& s, const Params& p, const Grid& g);

/// Max-norm mismatch between the two sides of
///   d/dx L^{-1} d/dx Psi = -3 h^{-3} Psi + 3 d/dx L^{-1} (h int_{-inf}^x h^{-3} Psi),
/// each side evaluated independently. Line mode only.
double psi_identity_residual(FieldView h, FieldView psi, const Grid& g);

} // namespace sgn
