#pragma once

#include <string>
#include <vector>

#include "sgn/dynamics.hpp"

namespace sgn
{

/// plus rides eta and carries Q; minus rides lambda and carries P.
enum class Branch
{
    plus,
    minus
};

std::string to_string(Branch b);

struct PathSample
{
    double t = 0.0;
    double x = 0.0;
    double value = 0.0;  // P on the minus branch, Q on the plus branch
    double speed = 0.0;
};

struct CharPath
{
    Branch branch = Branch::plus;
    double x0 = 0.0;
    std::vector<PathSample> samples;
    /// Set when a line-mode path left the domain; samples stop at the last
    /// snapshot inside it.
    bool exited = false;
};

/// Per-snapshot fields the path tools need. Building this once and passing
/// it to several trace/riccati_residual calls avoids repeating the
/// elliptic solves.
struct CharFields
{
    std::vector<double> t;
    std::vector<Field> lambda, eta, P, Q, h;
    /// Right-hand sides of the P and Q transport equations, evaluated from
    /// the snapshot fields (empty until riccati terms are requested).
    std::vector<Field> rhs_P, rhs_Q;
};

CharFields char_fields(const SimHistory& hist, bool with_riccati_terms);

/// Four-point Lagrange interpolation on the cell-centred grid (wraps in
/// periodic mode, clamps to the end stencils in line mode).
double interpolate_cubic(FieldView f, const Grid& g, double x);

CharPath trace(const SimHistory& hist, double x0, Branch branch);
CharPath trace(const SimHistory& hist, const CharFields& cf, double x0, Branch branch);

struct RiccatiResidual
{
    std::vector<double> t;
    std::vector<double> residual;
    /// Non-empty when the snapshot density is too low for a meaningful
    /// material derivative.
    std::string warning;

    double max_abs() const;
};

/// Material derivative of P (minus) or Q (plus) along the path, by
/// three-point differences in time, minus the transport equation's right
/// side interpolated at the path points.
RiccatiResidual riccati_residual(const SimHistory& hist, const CharPath& path);
RiccatiResidual riccati_residual(const SimHistory& hist, const CharFields& cf,
                                 const CharPath& path);

struct PQSquare
{
    double value = 0.0;
    double t_begin = 0.0;
    double t_end = 0.0;
    /// True when the two paths do not cross inside the common window.
    bool paths_never_meet = false;
};

/// Trapezoid-in-time integral of P^2 sampled along path_p plus Q^2 sampled
/// along path_q, over their common time window. Either path may belong to
/// either branch; the usual geometry integrates P along a plus path
/// launched at x1 and Q along a minus path launched at x2 > x1.
PQSquare pq_square_integral(const SimHistory& hist, const CharPath& path_p,
                            const CharPath& path_q);
PQSquare pq_square_integral(const SimHistory& hist, const CharFields& cf,
                            const CharPath& path_p, const CharPath& path_q);

} // namespace sgn
