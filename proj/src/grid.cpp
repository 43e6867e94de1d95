#include "sgn/grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sgn/error.hpp"

namespace sgn
{

Grid Grid::make(int n, double x_left, double x_right, Mode mode)
{
    if (n < 8)
        throw Error(ErrorKind::contract, "grid needs at least 8 cells, got " + std::to_string(n));
    if (!(x_right > x_left))
        throw Error(ErrorKind::contract, "grid extent must be positive");
    return Grid{n, (x_right - x_left) / n, x_left, mode, x_right};
}

Field Grid::coordinates() const
{
    Field xs(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        xs[i] = x(i);
    return xs;
}

void require_size(FieldView f, const Grid& g)
{
    if (f.size() != static_cast<std::size_t>(g.n))
        throw Error(ErrorKind::contract, "field has " + std::to_string(f.size())
                                             + " samples, grid has " + std::to_string(g.n));
}

Field derivative(FieldView f, const Grid& g)
{
    require_size(f, g);
    const int n = g.n;
    const double s = 1.0 / (12.0 * g.dx);
    Field d(f.size());

    if (g.mode == Mode::periodic)
    {
        auto at = [&](int i) { return f[(i % n + n) % n]; };
        for (int i = 0; i < n; ++i)
            d[i] = (at(i - 2) - 8.0 * at(i - 1) + 8.0 * at(i + 1) - at(i + 2)) * s;
        return d;
    }

    // Line mode: the state is at rest beyond the ends, so the outermost
    // samples are extended as constant ghosts. One-sided closures are not
    // used here because they make the RK4 method-of-lines system unstable.
    auto at = [&](int i) { return f[std::clamp(i, 0, n - 1)]; };
    for (int i = 0; i < n; ++i)
        d[i] = (at(i - 2) - 8.0 * at(i - 1) + 8.0 * at(i + 1) - at(i + 2)) * s;
    return d;
}

Field second_derivative(FieldView f, const Grid& g)
{
    require_size(f, g);
    const int n = g.n;
    const double s = 1.0 / (g.dx * g.dx);
    Field d(f.size());

    if (g.mode == Mode::periodic)
    {
        for (int i = 0; i < n; ++i)
            d[i] = (f[(i + n - 1) % n] - 2.0 * f[i] + f[(i + 1) % n]) * s;
        return d;
    }

    for (int i = 1; i < n - 1; ++i)
        d[i] = (f[i - 1] - 2.0 * f[i] + f[i + 1]) * s;
    d[0] = (2.0 * f[0] - 5.0 * f[1] + 4.0 * f[2] - f[3]) * s;
    d[n - 1] = (2.0 * f[n - 1] - 5.0 * f[n - 2] + 4.0 * f[n - 3] - f[n - 4]) * s;
    return d;
}

double integrate(FieldView f, const Grid& g)
{
    require_size(f, g);
    double sum = 0.0;
    for (double v : f)
        sum += v;
    return sum * g.dx;
}

Field cumulative_integral(FieldView f, const Grid& g)
{
    require_size(f, g);
    if (g.mode != Mode::line)
        throw Error(ErrorKind::mode, "cumulative integral is only defined in line mode");

    Field F(f.size());
    const double half = 0.5 * g.dx;
    F[0] = f[0] * half;
    for (std::size_t i = 1; i < f.size(); ++i)
        F[i] = F[i - 1] + (f[i - 1] + f[i]) * half;
    return F;
}

TimeStencil time_stencil(std::span<const double> t, std::size_t k)
{
    const std::size_t m = t.size();
    if (m < 3 || k >= m)
        throw Error(ErrorKind::contract, "time stencil needs three samples and k in range");
    TimeStencil st;
    if (k == 0)
    {
        const double a = t[1] - t[0];
        const double b = t[2] - t[1];
        st.first = 0;
        st.w[0] = -(2.0 * a + b) / (a * (a + b));
        st.w[1] = (a + b) / (a * b);
        st.w[2] = -a / (b * (a + b));
    }
    else if (k == m - 1)
    {
        const double a = t[k] - t[k - 1];
        const double b = t[k - 1] - t[k - 2];
        st.first = k - 2;
        st.w[0] = a / (b * (a + b));
        st.w[1] = -(a + b) / (a * b);
        st.w[2] = (2.0 * a + b) / (a * (a + b));
    }
    else
    {
        const double a = t[k] - t[k - 1];
        const double b = t[k + 1] - t[k];
        st.first = k - 1;
        st.w[0] = -b / (a * (a + b));
        st.w[1] = (b - a) / (a * b);
        st.w[2] = a / (b * (a + b));
    }
    return st;
}

std::vector<double> sample_derivative(std::span<const double> t, std::span<const double> f)
{
    const std::size_t m = t.size();
    std::vector<double> d(m, 0.0);
    if (m == 2)
        d[0] = d[1] = (f[1] - f[0]) / (t[1] - t[0]);
    if (m < 3)
        return d;
    for (std::size_t k = 0; k < m; ++k)
    {
        const TimeStencil st = time_stencil(t, k);
        for (int j = 0; j < 3; ++j)
            d[k] += st.w[j] * f[st.first + j];
    }
    return d;
}

double max_abs(FieldView f)
{
    double m = 0.0;
    for (double v : f)
        m = std::max(m, std::abs(v));
    return m;
}

bool all_finite(FieldView f)
{
    return std::all_of(f.begin(), f.end(), [](double v) { return std::isfinite(v); });
}

} // namespace sgn
