#include "sgn/regularization.hpp"

#include <cmath>

#include "sgn/elliptic.hpp"
#include "sgn/error.hpp"

namespace sgn
{

double chi(double zeta, double epsilon)
{
    if (!(epsilon > 0.0))
        return 0.0;
    const double shifted = zeta + 1.0 / epsilon;
    return shifted <= 0.0 ? shifted * shifted : 0.0;
}

Field chi_field(FieldView zeta, double epsilon)
{
    Field out(zeta.size());
    for (std::size_t i = 0; i < zeta.size(); ++i)
        out[i] = chi(zeta[i], epsilon);
    return out;
}

bool cutoff_active(FieldView P, FieldView Q, double epsilon)
{
    if (!(epsilon > 0.0))
        return false;
    const double level = -1.0 / epsilon;
    for (std::size_t i = 0; i < P.size(); ++i)
        if (P[i] <= level || Q[i] <= level)
            return true;
    return false;
}

ScalarPair compute_A(const FlowState& s, FieldView chiP, FieldView chiQ, const Params& p,
                     const Grid& g)
{
    require_size(chiP, g);
    require_size(chiQ, g);
    const double c = p.st_speed() / 48.0;
    Field rhs(chiP.size());
    for (std::size_t i = 0; i < rhs.size(); ++i)
        rhs[i] = c / std::sqrt(s.h[i]) * (chiP[i] - chiQ[i]);

    ScalarPair out;
    out.A = solve_helmholtz(rhs, p, g);
    out.A_x = derivative(out.A, g);
    return out;
}

Field compute_V2(const FlowState& s, FieldView A, const Params& p)
{
    const double c = 3.0 * p.g / p.st_speed();
    Field v(A.size());
    for (std::size_t i = 0; i < v.size(); ++i)
        v[i] = c * A[i] / std::sqrt(s.h[i]);
    return v;
}

Field compute_V2_direct(const FlowState& s, FieldView chiP, FieldView chiQ, const Params& p,
                        const Grid& g)
{
    Field rhs(chiP.size());
    for (std::size_t i = 0; i < rhs.size(); ++i)
        rhs[i] = (chiP[i] - chiQ[i]) / std::sqrt(s.h[i]);
    Field k = solve_helmholtz(rhs, p, g);
    for (std::size_t i = 0; i < k.size(); ++i)
        k[i] *= p.g / 16.0 / std::sqrt(s.h[i]);
    return k;
}

Field compute_V1(const FlowState& s, FieldView A_x, FieldView chiP, FieldView chiQ,
                 const Params& p, const Grid& g)
{
    (void)p;
    require_size(A_x, g);
    const Field ux = derivative(s.u, g);
    const std::size_t n = ux.size();

    Field integrand(n);
    bool nonzero = false;
    for (std::size_t i = 0; i < n; ++i)
    {
        const double h = s.h[i];
        integrand[i] = 3.0 * ux[i] * A_x[i] / h - (chiP[i] + chiQ[i]) / (8.0 * h * h);
        nonzero = nonzero || integrand[i] != 0.0;
    }
    bool any_ax = false;
    for (double v : A_x)
        any_ax = any_ax || v != 0.0;
    if (!nonzero && !any_ax)
        return Field(n, 0.0);
    if (g.mode != Mode::line && nonzero)
        throw Error(ErrorKind::mode, "V1 needs an integral from -infinity (line mode)");

    Field bracket(n);
    if (nonzero)
    {
        const Field prim = cumulative_integral(integrand, g);
        for (std::size_t i = 0; i < n; ++i)
            bracket[i] = -s.u[i] * A_x[i] + s.h[i] * prim[i];
    }
    else
    {
        for (std::size_t i = 0; i < n; ++i)
            bracket[i] = -s.u[i] * A_x[i];
    }

    Field v = derivative(solve_L_refined(assemble_L(s.h, g), s.h, bracket, g), g);
    for (std::size_t i = 0; i < n; ++i)
        v[i] *= 0.5 * s.h[i];
    return v;
}

Field compute_B(const FlowState& s, FieldView A_x, FieldView chiP, FieldView chiQ,
                const Params& p, const Grid& g)
{
    (void)p;
    const Field ux = derivative(s.u, g);
    const std::size_t n = ux.size();
    Field flux(n);
    for (std::size_t i = 0; i < n; ++i)
    {
        const double h = s.h[i];
        flux[i] = 0.5 * h * h * ux[i] * A_x[i] - h * (chiP[i] + chiQ[i]) / 48.0;
    }
    Field rhs = derivative(flux, g);
    for (std::size_t i = 0; i < n; ++i)
        rhs[i] -= 0.5 * s.u[i] * A_x[i];
    return solve_L_refined(assemble_L(s.h, g), s.h, rhs, g);
}

MNFields compute_MN(const FlowState& s, const RegFields& reg, FieldView script_r)
{
    const std::size_t n = s.h.size();
    MNFields mn{Field(n), Field(n)};
    for (std::size_t i = 0; i < n; ++i)
    {
        const double base = -3.0 * script_r[i] / (s.h[i] * s.h[i]);
        const double v1 = reg.V1.empty() ? 0.0 : reg.V1[i];
        const double v2 = reg.V2.empty() ? 0.0 : reg.V2[i];
        mn.M[i] = base + v1 - v2;
        mn.N[i] = base + v1 + v2;
    }
    return mn;
}

RegFields compute_reg(const FlowState& s, FieldView P, FieldView Q, const Params& p,
                      const Grid& g, bool with_aux)
{
    const std::size_t n = s.h.size();
    RegFields reg;
    if (!cutoff_active(P, Q, p.epsilon))
    {
        reg.A.assign(n, 0.0);
        reg.A_x.assign(n, 0.0);
        reg.B.assign(n, 0.0);
        reg.chiP.assign(n, 0.0);
        reg.chiQ.assign(n, 0.0);
        if (with_aux)
        {
            reg.V1.assign(n, 0.0);
            reg.V2.assign(n, 0.0);
        }
        return reg;
    }

    reg.chiP = chi_field(P, p.epsilon);
    reg.chiQ = chi_field(Q, p.epsilon);
    auto [A, A_x] = compute_A(s, reg.chiP, reg.chiQ, p, g);
    reg.A = std::move(A);
    reg.A_x = std::move(A_x);
    reg.B = compute_B(s, reg.A_x, reg.chiP, reg.chiQ, p, g);
    if (with_aux)
    {
        reg.V1 = compute_V1(s, reg.A_x, reg.chiP, reg.chiQ, p, g);
        reg.V2 = compute_V2(s, reg.A, p);
    }
    return reg;
}

Field dissipation_density(FieldView P, FieldView Q, double epsilon)
{
    Field d(P.size());
    for (std::size_t i = 0; i < d.size(); ++i)
        d[i] = (P[i] * chi(P[i], epsilon) + Q[i] * chi(Q[i], epsilon)) / 48.0;
    return d;
}

} // namespace sgn
