#pragma once

#include <cmath>
#include <functional>
#include <random>

#include "sgn/grid.hpp"
#include "sgn/kinematics.hpp"

namespace test
{

inline constexpr double pi = 3.14159265358979323846;

inline sgn::Field sample(const sgn::Grid& g, const std::function<double(double)>& f)
{
    sgn::Field out(g.n);
    for (int i = 0; i < g.n; ++i)
        out[i] = f(g.x(i));
    return out;
}

inline double max_diff(sgn::FieldView a, sgn::FieldView b)
{
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

inline double max_diff(sgn::FieldView a, sgn::FieldView b, int lo, int hi)
{
    double m = 0.0;
    for (int i = lo; i < hi; ++i)
        m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

inline double order(double coarse, double fine, double ratio = 2.0)
{
    return std::log(coarse / fine) / std::log(ratio);
}

inline sgn::FlowState state(const sgn::Grid& g, const std::function<double(double)>& h,
                            const std::function<double(double)>& u)
{
    return {sample(g, h), sample(g, u), 0.0};
}

inline sgn::FlowState flat(const sgn::Grid& g, double hbar = 1.0)
{
    return {sgn::Field(g.n, hbar), sgn::Field(g.n, 0.0), 0.0};
}

inline sgn::Params params(double g = 9.81, double gamma = 9.81, double eps = 0.0)
{
    sgn::Params p;
    p.g = g;
    p.gamma = gamma;
    p.epsilon = eps;
    return p;
}

/// Smooth periodic random field: a few random Fourier modes.
inline sgn::Field random_smooth(const sgn::Grid& g, std::mt19937& rng, double mean, double amp)
{
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    sgn::Field f(g.n, mean);
    for (int m = 1; m <= 4; ++m)
    {
        const double a = amp * U(rng) / m, ph = pi * U(rng);
        for (int i = 0; i < g.n; ++i)
            f[i] += a * std::sin(2 * pi * m * (g.x(i) - g.x_left) / g.length() + ph);
    }
    return f;
}

} // namespace test
