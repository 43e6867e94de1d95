#pragma once

#include <span>
#include <vector>

namespace sgn
{

using Field = std::vector<double>;
using FieldView = std::span<const double>;

enum class Mode
{
    periodic,
    line
};

/// Uniform cell-centred mesh. Sample i sits at x_left + (i + 1/2) dx.
struct Grid
{
    int n = 0;
    double dx = 0.0;
    double x_left = 0.0;
    Mode mode = Mode::periodic;
    double x_hi = 0.0;  // right end as given to make()

    /// Throws contract error unless n >= 8 and dx > 0.
    static Grid make(int n, double x_left, double x_right, Mode mode);

    double x(int i) const { return x_left + (i + 0.5) * dx; }
    double length() const { return x_hi - x_left; }
    double x_right() const { return x_hi; }
    Field coordinates() const;
};

void require_size(FieldView f, const Grid& g);

/// 4th-order central difference. Periodic mode wraps; line mode extends the
/// end samples as constant ghosts, so the two outermost cells on each side
/// are only exact for fields that are flat there.
Field derivative(FieldView f, const Grid& g);

/// 2nd-order second difference (periodic wrap, or one-sided 2nd-order at the
/// line-mode ends). Used by manufactured-solution checks.
Field second_derivative(FieldView f, const Grid& g);

/// Midpoint rule.
double integrate(FieldView f, const Grid& g);

/// Running trapezoid from the left boundary: F_0 = f_0 dx/2,
/// F_i = F_{i-1} + (f_{i-1} + f_i) dx/2. Line mode only.
Field cumulative_integral(FieldView f, const Grid& g);

/// Three-point differentiation weights in time at sample k of a possibly
/// non-uniform sequence t (size >= 3): central inside, one-sided
/// second-order at the two ends. d/dt f(t_k) ~ sum_j w[j] f(t_{first + j}).
struct TimeStencil
{
    std::size_t first = 0;
    double w[3] = {0.0, 0.0, 0.0};
};
TimeStencil time_stencil(std::span<const double> t, std::size_t k);

/// d/dt of sampled values via time_stencil (two-point slope if only two samples).
std::vector<double> sample_derivative(std::span<const double> t, std::span<const double> f);

double max_abs(FieldView f);
bool all_finite(FieldView f);

} // namespace sgn
