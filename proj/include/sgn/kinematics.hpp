#pragma once

#include <utility>

#include "sgn/grid.hpp"

namespace sgn
{

/// Physical and regularization constants. epsilon == 0 selects the
/// unregularized system.
struct Params
{
    double g = 9.81;
    double gamma = 9.81;
    double hbar = 1.0;
    double epsilon = 0.0;

    /// Throws config error if any invariant fails.
    void validate() const;

    /// Energy threshold sqrt(g gamma) hbar^2 below which depth and velocity
    /// bounds hold for all time.
    double energy_threshold() const;

    /// sqrt(3 gamma), the recurring surface-tension speed scale.
    double st_speed() const;
};

struct FlowState
{
    Field h;
    Field u;
    double t = 0.0;
};

/// Requires matching sizes and h > 0 everywhere.
void require_valid(const FlowState& s, const Grid& g);

struct Bounds
{
    double h_min = 0.0;
    double h_max = 0.0;
    double u_min = 0.0;
    double u_max = 0.0;
    double E0 = 0.0;
};

struct FieldPair
{
    Field first;
    Field second;
};

/// R = u + 2 sqrt(3 gamma) h^{-1/2}, S = u - 2 sqrt(3 gamma) h^{-1/2}.
FieldPair riemann_invariants(const FlowState& s, const Params& p);

/// lambda = u - sqrt(3 gamma) h^{-1/2}, eta = u + sqrt(3 gamma) h^{-1/2}.
FieldPair char_speeds(const FlowState& s, const Params& p);

/// P = h R_x and Q = h S_x from gridded derivatives.
FieldPair pq_fields(const FlowState& s, const Params& p, const Grid& g);

/// Inverse of the P,Q map: returns (u_x, h_x).
FieldPair gradients_from_pq(FieldView h, FieldView P, FieldView Q, const Params& p);

/// (2/3) h^3 u_x^2 - (3/2) gamma h_x^2
Field curly_c(const FlowState& s, const Params& p, const Grid& g);

/// (1/2) g h^2 - (1/2) g hbar^2 - 3 gamma ln(h / hbar)
Field f_of_h(const FlowState& s, const Params& p);

/// Pointwise energy density; its integral is the conserved (or, with
/// epsilon > 0, dissipated) energy.
Field energy_density(const FlowState& s, const Params& p, const Grid& g);

/// Same density written through P and Q.
Field energy_density_pq(const FlowState& s, const Params& p, const Grid& g);

double total_energy(const FlowState& s, const Params& p, const Grid& g);
double total_mass(const FlowState& s, const Grid& g);

/// Energy flux u E + u (script_r + g h^2/2 - g hbar^2/2) + gamma h h_x u_x.
Field energy_flux(const FlowState& s, const Params& p, const Grid& g, FieldView script_r);

/// Closed-form depth and velocity bounds for an energy E0 below the
/// threshold; throws threshold error otherwise.
Bounds a_priori_bounds(double E0, const Params& p);

} // namespace sgn
