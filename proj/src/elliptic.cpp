#include "sgn/elliptic.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "sgn/error.hpp"

namespace sgn
{

namespace
{

// Assemble -d/dx k d/dx (+ diagonal shift) from face coefficients.
// face[i] couples cells i and i+1 (index n-1 wraps to 0 in periodic mode).
TridiagonalSystem from_faces(FieldView shift, FieldView face, Mode mode)
{
    const int n = static_cast<int>(shift.size());
    TridiagonalSystem sys;
    sys.mode = mode;
    sys.sub.assign(n, 0.0);
    sys.diag.assign(shift.begin(), shift.end());
    sys.sup.assign(n, 0.0);

    for (int i = 0; i + 1 < n; ++i)
    {
        sys.diag[i] += face[i];
        sys.diag[i + 1] += face[i];
        sys.sup[i] = -face[i];
        sys.sub[i + 1] = -face[i];
    }
    if (mode == Mode::periodic)
    {
        const double k = face[n - 1];
        sys.diag[n - 1] += k;
        sys.diag[0] += k;
        sys.corner_lower = -k;
        sys.corner_upper = -k;
    }
    return sys;
}

void thomas(const Field& a, const Field& b, const Field& c, Field& x)
{
    // a: sub, b: diag, c: sup; x holds the rhs on entry.
    const std::size_t n = b.size();
    Field cp(n);
    double denom = b[0];
    cp[0] = c[0] / denom;
    x[0] /= denom;
    for (std::size_t i = 1; i < n; ++i)
    {
        denom = b[i] - a[i] * cp[i - 1];
        cp[i] = c[i] / denom;
        x[i] = (x[i] - a[i] * x[i - 1]) / denom;
    }
    for (std::size_t i = n - 1; i-- > 0;)
        x[i] -= cp[i] * x[i + 1];
}

double norm_inf(const TridiagonalSystem& sys)
{
    double m = 0.0;
    for (int i = 0; i < sys.size(); ++i)
        m = std::max(m, std::abs(sys.sub[i]) + std::abs(sys.diag[i]) + std::abs(sys.sup[i]));
    return m + std::max(std::abs(sys.corner_lower), std::abs(sys.corner_upper));
}

} // namespace

TridiagonalSystem assemble_L(FieldView h, const Grid& g)
{
    require_size(h, g);
    for (int i = 0; i < g.n; ++i)
        if (!(h[i] > 0.0))
            throw Error(ErrorKind::positivity, "cannot assemble L_h with h[" + std::to_string(i)
                                                   + "] = " + std::to_string(h[i]));

    const int n = g.n;
    const double s = 1.0 / (3.0 * g.dx * g.dx);
    Field face(n, 0.0);
    for (int i = 0; i < n; ++i)
    {
        if (g.mode == Mode::line && i == n - 1)
            break;
        const double hf = 0.5 * (h[i] + h[(i + 1) % n]);
        face[i] = s * hf * hf * hf;
    }
    return from_faces(h, face, g.mode);
}

TridiagonalSystem assemble_helmholtz(const Params& p, const Grid& g)
{
    const int n = g.n;
    Field shift(n, p.g);
    Field face(n, p.gamma / (g.dx * g.dx));
    if (g.mode == Mode::line)
        face[n - 1] = 0.0;
    return from_faces(shift, face, g.mode);
}

Field matvec(const TridiagonalSystem& sys, FieldView x)
{
    const int n = sys.size();
    if (static_cast<int>(x.size()) != n)
        throw Error(ErrorKind::contract, "operator/field size mismatch");

    Field y(n);
    for (int i = 0; i < n; ++i)
    {
        double v = sys.diag[i] * x[i];
        if (i > 0)
            v += sys.sub[i] * x[i - 1];
        if (i + 1 < n)
            v += sys.sup[i] * x[i + 1];
        y[i] = v;
    }
    if (sys.mode == Mode::periodic)
    {
        y[0] += sys.corner_lower * x[n - 1];
        y[n - 1] += sys.corner_upper * x[0];
    }
    return y;
}

Field solve(const TridiagonalSystem& sys, FieldView rhs)
{
    const int n = sys.size();
    if (static_cast<int>(rhs.size()) != n)
        throw Error(ErrorKind::contract, "operator/rhs size mismatch");

    Field x(rhs.begin(), rhs.end());
    if (sys.mode == Mode::line || (sys.corner_lower == 0.0 && sys.corner_upper == 0.0))
    {
        thomas(sys.sub, sys.diag, sys.sup, x);
    }
    else
    {
        // Sherman-Morrison: A = B + w v^T with w = (gamma, 0..0, alpha),
        // v = (1, 0..0, beta/gamma).
        const double alpha = sys.corner_upper;
        const double beta = sys.corner_lower;
        const double gam = -sys.diag[0];
        Field bb = sys.diag;
        bb[0] -= gam;
        bb[n - 1] -= alpha * beta / gam;

        thomas(sys.sub, bb, sys.sup, x);
        Field z(n, 0.0);
        z[0] = gam;
        z[n - 1] = alpha;
        thomas(sys.sub, bb, sys.sup, z);

        const double fact = (x[0] + beta * x[n - 1] / gam) / (1.0 + z[0] + beta * z[n - 1] / gam);
        for (int i = 0; i < n; ++i)
            x[i] -= fact * z[i];
    }

    const Field ax = matvec(sys, x);
    double r = 0.0;
    for (int i = 0; i < n; ++i)
        r = std::max(r, std::abs(ax[i] - rhs[i]));
    const double scale = norm_inf(sys) * max_abs(x) + max_abs(rhs);
    if (!std::isfinite(r) || (scale > 0.0 && r > 1e-10 * scale))
    {
        std::ostringstream msg;
        msg << "tridiagonal residual " << r << " relative to scale " << scale;
        throw Error(ErrorKind::solver, msg.str());
    }
    return x;
}

Field apply_L_fourth(FieldView h, FieldView u, const Grid& g)
{
    require_size(h, g);
    Field flux = derivative(u, g);
    for (std::size_t i = 0; i < flux.size(); ++i)
        flux[i] *= h[i] * h[i] * h[i];
    Field out = derivative(flux, g);
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = h[i] * u[i] - out[i] / 3.0;
    return out;
}

Field solve_L_refined(const TridiagonalSystem& sys, FieldView h, FieldView psi, const Grid& g)
{
    Field x = solve(sys, psi);
    const Field lx = apply_L_fourth(h, x, g);
    Field defect(psi.size());
    for (std::size_t i = 0; i < defect.size(); ++i)
        defect[i] = psi[i] - lx[i];
    const Field dx = solve(sys, defect);
    for (std::size_t i = 0; i < x.size(); ++i)
        x[i] += dx[i];
    return x;
}

Field solve_helmholtz(FieldView rhs, const Params& p, const Grid& g)
{
    require_size(rhs, g);
    return solve(assemble_helmholtz(p, g), rhs);
}

Field inv_L_dx(FieldView h, FieldView psi, const Grid& g)
{
    return solve_L_refined(assemble_L(h, g), h, derivative(psi, g), g);
}

Field script_r(const FlowState& s, const Params& p, const Grid& g)
{
    require_valid(s, g);
    const Field c = curly_c(s, p, g);
    const Field f = f_of_h(s, p);
    Field psi(c.size());
    for (std::size_t i = 0; i < psi.size(); ++i)
        psi[i] = c[i] + f[i];

    const Field w = derivative(inv_L_dx(s.h, psi, g), g);
    Field r(c.size());
    for (std::size_t i = 0; i < r.size(); ++i)
    {
        const double h3 = s.h[i] * s.h[i] * s.h[i];
        r[i] = c[i] + h3 * w[i] / 3.0;
    }
    return r;
}

double psi_identity_residual(FieldView h, FieldView psi, const Grid& g)
{
    require_size(h, g);
    require_size(psi, g);
    if (g.mode != Mode::line)
        throw Error(ErrorKind::mode, "the Psi identity needs an integral from -infinity (line mode)");

    const TridiagonalSystem L = assemble_L(h, g);
    const Field lhs = derivative(solve_L_refined(L, h, derivative(psi, g), g), g);

    Field weighted(psi.size());
    for (std::size_t i = 0; i < psi.size(); ++i)
        weighted[i] = psi[i] / (h[i] * h[i] * h[i]);
    Field prim = cumulative_integral(weighted, g);
    for (std::size_t i = 0; i < prim.size(); ++i)
        prim[i] *= h[i];
    const Field tail = derivative(solve_L_refined(L, h, prim, g), g);

    double r = 0.0;
    for (std::size_t i = 0; i < psi.size(); ++i)
        r = std::max(r, std::abs(lhs[i] - (-3.0 * weighted[i] + 3.0 * tail[i])));
    return r;
}

} // namespace sgn
