#include "sgn/kinematics.hpp"

#include <cmath>
#include <sstream>

#include "sgn/error.hpp"

namespace sgn
{

void Params::validate() const
{
    std::ostringstream bad;
    if (!(g > 0.0))
        bad << " g=" << g;
    if (!(gamma > 0.0))
        bad << " gamma=" << gamma;
    if (!(hbar > 0.0))
        bad << " hbar=" << hbar;
    if (!(epsilon >= 0.0))
        bad << " epsilon=" << epsilon;
    if (!bad.str().empty())
        throw Error(ErrorKind::config, "invalid parameters:" + bad.str());
}

double Params::energy_threshold() const { return std::sqrt(g * gamma) * hbar * hbar; }

double Params::st_speed() const { return std::sqrt(3.0 * gamma); }

void require_valid(const FlowState& s, const Grid& g)
{
    require_size(s.h, g);
    require_size(s.u, g);
    for (int i = 0; i < g.n; ++i)
    {
        if (!(s.h[i] > 0.0))
        {
            std::ostringstream msg;
            msg << "h[" << i << "] = " << s.h[i] << " at t = " << s.t;
            throw Error(ErrorKind::positivity, msg.str());
        }
    }
}

namespace
{
void require_positive(FieldView h)
{
    for (std::size_t i = 0; i < h.size(); ++i)
        if (!(h[i] > 0.0))
            throw Error(ErrorKind::positivity, "h[" + std::to_string(i) + "] is not positive");
}
} // namespace

FieldPair riemann_invariants(const FlowState& s, const Params& p)
{
    require_positive(s.h);
    const double c = 2.0 * p.st_speed();
    FieldPair rs{Field(s.h.size()), Field(s.h.size())};
    for (std::size_t i = 0; i < s.h.size(); ++i)
    {
        const double w = c / std::sqrt(s.h[i]);
        rs.first[i] = s.u[i] + w;
        rs.second[i] = s.u[i] - w;
    }
    return rs;
}

FieldPair char_speeds(const FlowState& s, const Params& p)
{
    require_positive(s.h);
    const double c = p.st_speed();
    FieldPair le{Field(s.h.size()), Field(s.h.size())};
    for (std::size_t i = 0; i < s.h.size(); ++i)
    {
        const double w = c / std::sqrt(s.h[i]);
        le.first[i] = s.u[i] - w;
        le.second[i] = s.u[i] + w;
    }
    return le;
}

FieldPair pq_fields(const FlowState& s, const Params& p, const Grid& g)
{
    require_valid(s, g);
    const Field ux = derivative(s.u, g);
    const Field hx = derivative(s.h, g);
    const double c = p.st_speed();
    FieldPair pq{Field(ux.size()), Field(ux.size())};
    for (std::size_t i = 0; i < ux.size(); ++i)
    {
        const double a = s.h[i] * ux[i];
        const double b = c * hx[i] / std::sqrt(s.h[i]);
        pq.first[i] = a - b;
        pq.second[i] = a + b;
    }
    return pq;
}

FieldPair gradients_from_pq(FieldView h, FieldView P, FieldView Q, const Params& p)
{
    const double c = p.st_speed();
    FieldPair out{Field(h.size()), Field(h.size())};
    for (std::size_t i = 0; i < h.size(); ++i)
    {
        out.first[i] = (P[i] + Q[i]) / (2.0 * h[i]);
        out.second[i] = std::sqrt(h[i]) * (Q[i] - P[i]) / (2.0 * c);
    }
    return out;
}

Field curly_c(const FlowState& s, const Params& p, const Grid& g)
{
    require_size(s.h, g);
    const Field ux = derivative(s.u, g);
    const Field hx = derivative(s.h, g);
    Field c(ux.size());
    for (std::size_t i = 0; i < c.size(); ++i)
    {
        const double h3 = s.h[i] * s.h[i] * s.h[i];
        c[i] = (2.0 / 3.0) * h3 * ux[i] * ux[i] - 1.5 * p.gamma * hx[i] * hx[i];
    }
    return c;
}

Field f_of_h(const FlowState& s, const Params& p)
{
    require_positive(s.h);
    Field f(s.h.size());
    const double base = 0.5 * p.g * p.hbar * p.hbar;
    for (std::size_t i = 0; i < f.size(); ++i)
    {
        const double h = s.h[i];
        f[i] = 0.5 * p.g * h * h - base - 3.0 * p.gamma * std::log(h / p.hbar);
    }
    return f;
}

Field energy_density(const FlowState& s, const Params& p, const Grid& g)
{
    require_size(s.h, g);
    require_size(s.u, g);
    const Field ux = derivative(s.u, g);
    const Field hx = derivative(s.h, g);
    Field e(ux.size());
    for (std::size_t i = 0; i < e.size(); ++i)
    {
        const double h = s.h[i];
        const double u = s.u[i];
        const double dh = h - p.hbar;
        e[i] = 0.5 * h * u * u + 0.5 * p.g * dh * dh + h * h * h * ux[i] * ux[i] / 6.0
               + 0.5 * p.gamma * hx[i] * hx[i];
    }
    return e;
}

Field energy_density_pq(const FlowState& s, const Params& p, const Grid& g)
{
    const auto [P, Q] = pq_fields(s, p, g);
    Field e(P.size());
    for (std::size_t i = 0; i < e.size(); ++i)
    {
        const double h = s.h[i];
        const double u = s.u[i];
        const double dh = h - p.hbar;
        e[i] = 0.5 * h * u * u + 0.5 * p.g * dh * dh + h * (P[i] * P[i] + Q[i] * Q[i]) / 12.0;
    }
    return e;
}

double total_energy(const FlowState& s, const Params& p, const Grid& g)
{
    return integrate(energy_density(s, p, g), g);
}

double total_mass(const FlowState& s, const Grid& g) { return integrate(s.h, g); }

Field energy_flux(const FlowState& s, const Params& p, const Grid& g, FieldView script_r)
{
    require_size(script_r, g);
    const Field e = energy_density(s, p, g);
    const Field ux = derivative(s.u, g);
    const Field hx = derivative(s.h, g);
    Field d(e.size());
    const double base = 0.5 * p.g * p.hbar * p.hbar;
    for (std::size_t i = 0; i < d.size(); ++i)
    {
        const double h = s.h[i];
        const double u = s.u[i];
        d[i] = u * e[i] + u * (script_r[i] + 0.5 * p.g * h * h - base)
               + p.gamma * h * hx[i] * ux[i];
    }
    return d;
}

Bounds a_priori_bounds(double E0, const Params& p)
{
    const double Emax = p.energy_threshold();
    if (!(E0 < Emax))
    {
        std::ostringstream msg;
        msg << "E0 = " << E0 << " is not below sqrt(g gamma) hbar^2 = " << Emax;
        throw Error(ErrorKind::threshold, msg.str());
    }
    if (E0 < 0.0)
        throw Error(ErrorKind::contract, "energy must be nonnegative");

    Bounds b;
    b.E0 = E0;
    const double spread = std::pow(p.g * p.gamma, -0.25) * std::sqrt(E0);
    b.h_min = p.hbar - spread;
    b.h_max = p.hbar + spread;
    b.u_max = std::pow(3.0, 0.25) * std::sqrt(E0) / b.h_min;
    b.u_min = -b.u_max;
    return b;
}

} // namespace sgn
