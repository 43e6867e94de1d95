#include "sgn/characteristics.hpp"

#include <algorithm>
#include <cmath>

#include "sgn/elliptic.hpp"
#include "sgn/error.hpp"
#include "sgn/regularization.hpp"

namespace sgn
{

std::string to_string(Branch b) { return b == Branch::plus ? "plus" : "minus"; }

double RiccatiResidual::max_abs() const
{
    double m = 0.0;
    for (double r : residual)
        m = std::max(m, std::abs(r));
    return m;
}

CharFields char_fields(const SimHistory& hist, bool with_riccati_terms)
{
    const Grid& g = hist.grid;
    const Params& p = hist.params;
    CharFields cf;
    for (const FlowState& s : hist.snapshots)
    {
        auto [lam, eta] = char_speeds(s, p);
        auto [P, Q] = pq_fields(s, p, g);
        cf.t.push_back(s.t);
        cf.lambda.push_back(std::move(lam));
        cf.eta.push_back(std::move(eta));
        cf.h.push_back(s.h);

        if (with_riccati_terms)
        {
            const std::size_t n = s.h.size();
            const Field r = script_r(s, p, g);
            const RegFields reg = compute_reg(s, P, Q, p, g, true);
            const bool active = cutoff_active(P, Q, p.epsilon);
            const MNFields mn = compute_MN(s, reg, r);
            Field rp(n), rq(n);
            for (std::size_t i = 0; i < n; ++i)
            {
                const double h = s.h[i];
                const double pp = P[i] * P[i] / (8.0 * h);
                const double qq = Q[i] * Q[i] / (8.0 * h);
                rp[i] = -pp + qq + mn.M[i];
                rq[i] = -qq + pp + mn.N[i];
                if (active)
                {
                    rp[i] += reg.chiP[i] / (8.0 * h) - reg.A_x[i] * P[i] / (2.0 * h);
                    rq[i] += reg.chiQ[i] / (8.0 * h) - reg.A_x[i] * Q[i] / (2.0 * h);
                }
            }
            cf.rhs_P.push_back(std::move(rp));
            cf.rhs_Q.push_back(std::move(rq));
        }
        cf.P.push_back(std::move(P));
        cf.Q.push_back(std::move(Q));
    }
    return cf;
}

double interpolate_cubic(FieldView f, const Grid& g, double x)
{
    require_size(f, g);
    const int n = g.n;
    const double s = (x - g.x_left) / g.dx - 0.5;
    int i0 = static_cast<int>(std::floor(s)) - 1;
    if (g.mode == Mode::line)
        i0 = std::clamp(i0, 0, n - 4);
    const double r = s - i0;  // position relative to stencil start, in cells

    double w[4];
    for (int j = 0; j < 4; ++j)
    {
        double l = 1.0;
        for (int k = 0; k < 4; ++k)
            if (k != j)
                l *= (r - k) / (j - k);
        w[j] = l;
    }
    double v = 0.0;
    for (int j = 0; j < 4; ++j)
    {
        const int i = g.mode == Mode::periodic ? ((i0 + j) % n + n) % n : i0 + j;
        v += w[j] * f[i];
    }
    return v;
}

namespace
{

const std::vector<Field>& speed_of(const CharFields& cf, Branch b)
{
    return b == Branch::plus ? cf.eta : cf.lambda;
}

const std::vector<Field>& value_of(const CharFields& cf, Branch b)
{
    return b == Branch::plus ? cf.Q : cf.P;
}

bool inside(const Grid& g, double x)
{
    return g.mode == Mode::periodic || (x >= g.x_left && x <= g.x_right());
}

} // namespace

CharPath trace(const SimHistory& hist, double x0, Branch branch)
{
    return trace(hist, char_fields(hist, false), x0, branch);
}

CharPath trace(const SimHistory& hist, const CharFields& cf, double x0, Branch branch)
{
    const Grid& g = hist.grid;
    if (cf.t.size() < 2)
        throw Error(ErrorKind::contract, "tracing needs at least two snapshots");
    if (!(x0 > g.x_left && x0 < g.x_right()))
        throw Error(ErrorKind::range, "launch point " + std::to_string(x0) + " is outside the domain");

    const auto& speed = speed_of(cf, branch);
    const auto& value = value_of(cf, branch);

    CharPath path;
    path.branch = branch;
    path.x0 = x0;
    double x = x0;
    for (std::size_t k = 0;; ++k)
    {
        path.samples.push_back(
            {cf.t[k], x, interpolate_cubic(value[k], g, x), interpolate_cubic(speed[k], g, x)});
        if (k + 1 == cf.t.size())
            break;

        const double dt = cf.t[k + 1] - cf.t[k];
        const double v0 = path.samples.back().speed;
        const double xm = x + 0.5 * dt * v0;
        if (!inside(g, xm))
        {
            path.exited = true;
            break;
        }
        const double vm = 0.5 * (interpolate_cubic(speed[k], g, xm) + interpolate_cubic(speed[k + 1], g, xm));
        const double xn = x + dt * vm;
        if (!inside(g, xn))
        {
            path.exited = true;
            break;
        }
        x = xn;
    }
    return path;
}

RiccatiResidual riccati_residual(const SimHistory& hist, const CharPath& path)
{
    return riccati_residual(hist, char_fields(hist, true), path);
}

RiccatiResidual riccati_residual(const SimHistory& hist, const CharFields& cf, const CharPath& path)
{
    if (cf.rhs_P.size() != cf.t.size())
        throw Error(ErrorKind::contract, "char fields were built without the transport terms");
    const auto& rhs = path.branch == Branch::plus ? cf.rhs_Q : cf.rhs_P;

    RiccatiResidual out;
    std::vector<double> vals;
    for (const PathSample& s : path.samples)
    {
        out.t.push_back(s.t);
        vals.push_back(s.value);
    }
    if (out.t.size() < 5)
        out.warning = "undersampled: " + std::to_string(out.t.size()) + " samples along the path";

    const std::vector<double> dvdt = sample_derivative(out.t, vals);
    for (std::size_t k = 0; k < out.t.size(); ++k)
        out.residual.push_back(dvdt[k] - interpolate_cubic(rhs[k], hist.grid, path.samples[k].x));
    return out;
}

PQSquare pq_square_integral(const SimHistory& hist, const CharPath& path_p, const CharPath& path_q)
{
    return pq_square_integral(hist, char_fields(hist, false), path_p, path_q);
}

PQSquare pq_square_integral(const SimHistory& hist, const CharFields& cf, const CharPath& path_p,
                            const CharPath& path_q)
{
    const Grid& g = hist.grid;
    const std::size_t m = std::min(path_p.samples.size(), path_q.samples.size());
    PQSquare out;
    if (m == 0)
    {
        out.paths_never_meet = true;
        return out;
    }
    out.t_begin = path_p.samples.front().t;
    out.t_end = path_p.samples[m - 1].t;

    double prev = 0.0;
    bool crossed = false;
    const double d0 = path_p.samples[0].x - path_q.samples[0].x;
    for (std::size_t k = 0; k < m; ++k)
    {
        const double xp = path_p.samples[k].x;
        const double xq = path_q.samples[k].x;
        const double pv = interpolate_cubic(cf.P[k], g, xp);
        const double qv = interpolate_cubic(cf.Q[k], g, xq);
        const double f = pv * pv + qv * qv;
        if (k > 0)
            out.value += 0.5 * (prev + f) * (path_p.samples[k].t - path_p.samples[k - 1].t);
        prev = f;
        const double d = xp - xq;
        crossed = crossed || d == 0.0 || (d > 0.0) != (d0 > 0.0);
    }
    out.paths_never_meet = !crossed;
    return out;
}

} // namespace sgn
