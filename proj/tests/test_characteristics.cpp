#include "doctest.h"
#include "support.hpp"
#include "sgn/characteristics.hpp"
#include "sgn/error.hpp"

using namespace sgn;

namespace
{

SimHistory run(const FlowState& s0, const Params& p, const Grid& g, double T, double dt, int every)
{
    StepControl c;
    c.cfl = 1.0;
    c.dt_max = dt;
    c.t_end = T;
    c.output_every = every;
    return simulate(s0, p, g, c);
}

FlowState bump(const Grid& g, double a = 0.05)
{
    return test::state(g, [&](double x) { return 1.0 + a * std::exp(-x * x); }, [](double) { return 0.0; });
}

double riccati_max(int n, double dt)
{
    const Params p = test::params();
    const Grid g = Grid::make(n, -20.0, 20.0, Mode::periodic);
    const SimHistory h = run(bump(g, 0.1), p, g, 0.6, dt, 4);
    const CharFields cf = char_fields(h, true);
    double m = 0.0;
    for (double x0 : {-1.5, -0.5, 0.5, 1.5})
        for (Branch b : {Branch::plus, Branch::minus})
            m = std::max(m, riccati_residual(h, cf, trace(h, cf, x0, b)).max_abs());
    return m;
}

} // namespace

TEST_CASE("paths on a fluid at rest move at the surface-tension speed")
{
    const Params p = test::params(9.81, 3.0);
    const Grid g = Grid::make(128, -20.0, 20.0, Mode::periodic);
    const SimHistory h = run(test::flat(g), p, g, 2.0, 0.01, 10);
    for (double x0 : {-19.0, 0.3, 18.0})
    {
        const CharPath plus = trace(h, x0, Branch::plus), minus = trace(h, x0, Branch::minus);
        REQUIRE(plus.samples.size() == h.snapshots.size());
        for (std::size_t k = 0; k < plus.samples.size(); ++k)
        {
            const double t = plus.samples[k].t;
            CHECK(plus.samples[k].x == doctest::Approx(x0 + 3 * t).epsilon(1e-12));
            CHECK(minus.samples[k].x == doctest::Approx(x0 - 3 * t).epsilon(1e-12));
            CHECK(plus.samples[k].value == 0.0);
        }
        CHECK(riccati_residual(h, plus).max_abs() == 0.0);
        CHECK(riccati_residual(h, minus).max_abs() == 0.0);
        const PQSquare sq = pq_square_integral(h, plus, minus);
        CHECK(sq.value == 0.0);
    }
}

TEST_CASE("line-mode paths that leave the domain are truncated")
{
    const Params p = test::params(9.81, 3.0);
    const Grid g = Grid::make(64, -5.0, 5.0, Mode::line);
    const SimHistory h = run(test::flat(g), p, g, 3.0, 0.02, 5);
    const CharPath path = trace(h, 0.0, Branch::plus);
    CHECK(path.exited);
    CHECK(path.samples.size() < h.snapshots.size());
    CHECK(path.samples.back().x <= 5.0);
    CHECK_THROWS_AS(trace(h, 7.0, Branch::plus), Error);
}

TEST_CASE("branch ordering and path-speed consistency")
{
    const Params p = test::params();
    const Grid g = Grid::make(512, -20.0, 20.0, Mode::periodic);
    const SimHistory h = run(bump(g, 0.1), p, g, 1.0, 0.005, 1);
    const CharFields cf = char_fields(h, false);
    for (double x0 : {-1.0, 0.0, 0.7})
    {
        const CharPath plus = trace(h, cf, x0, Branch::plus), minus = trace(h, cf, x0, Branch::minus);
        for (std::size_t k = 1; k < plus.samples.size(); ++k)
            CHECK(plus.samples[k].x > minus.samples[k].x);
        for (const CharPath* path : {&plus, &minus})
        {
            std::vector<double> t, x;
            double smax = 0.0;
            for (const PathSample& s : path->samples)
            {
                t.push_back(s.t);
                x.push_back(s.x);
                smax = std::max(smax, std::abs(s.speed));
            }
            const std::vector<double> slope = sample_derivative(t, x);
            for (std::size_t k = 0; k < t.size(); ++k)
                CHECK(std::abs(slope[k] - path->samples[k].speed) <= 1e-4 * smax);
        }
    }
}

TEST_CASE("cubic interpolation")
{
    const Grid g = Grid::make(64, 0.0, 2 * test::pi, Mode::periodic);
    const Field f = test::sample(g, [](double x) { return std::sin(x); });
    for (double x : {0.01, 1.234, 6.2, 7.5, -0.3})
        CHECK(interpolate_cubic(f, g, x) == doctest::Approx(std::sin(x)).epsilon(1e-5));
    const Grid gl = Grid::make(32, -1.0, 1.0, Mode::line);
    const Field cube = test::sample(gl, [](double x) { return x * x * x - x; });
    for (double x : {-0.99, -0.5, 0.013, 0.98})
        CHECK(interpolate_cubic(cube, gl, x) == doctest::Approx(x * x * x - x).epsilon(1e-12));
}

TEST_CASE("riccati residual shrinks under combined refinement")
{
    const double coarse = riccati_max(256, 0.02), fine = riccati_max(512, 0.01);
    CHECK(fine < coarse);
    CHECK(test::order(coarse, fine) >= 1.0);
}

TEST_CASE("regularized residual equals the unregularized one without cut-off")
{
    const Grid g = Grid::make(512, -25.0, 25.0, Mode::line);
    const SimHistory h0 = run(bump(g), test::params(), g, 0.5, 0.01, 2);
    const SimHistory h1 = run(bump(g), test::params(9.81, 9.81, 0.1), g, 0.5, 0.01, 2);
    for (Branch b : {Branch::plus, Branch::minus})
    {
        const RiccatiResidual r0 = riccati_residual(h0, trace(h0, 0.2, b));
        const RiccatiResidual r1 = riccati_residual(h1, trace(h1, 0.2, b));
        CHECK(r0.residual == r1.residual);
        CHECK(r0.warning.empty());
    }
}

TEST_CASE("sparse histories are flagged")
{
    const Grid g = Grid::make(128, -20.0, 20.0, Mode::periodic);
    const SimHistory h = run(bump(g), test::params(), g, 0.3, 0.01, 15);
    REQUIRE(h.snapshots.size() < 5);
    CHECK_FALSE(riccati_residual(h, trace(h, 0.0, Branch::plus)).warning.empty());

    StepControl c;
    c.t_end = 0.0;
    const SimHistory single = simulate(bump(g), test::params(), g, c);
    CHECK_THROWS_AS(trace(single, 0.0, Branch::plus), Error);
}

TEST_CASE("square integral along characteristics")
{
    const Params p = test::params();
    const Grid g = Grid::make(512, -20.0, 20.0, Mode::periodic);
    const SimHistory h = run(bump(g, 0.1), p, g, 1.0, 0.01, 2);
    const CharFields cf = char_fields(h, false);
    // plus path from x1 and minus path from x2 > x1 cross mid-run
    const CharPath from_left = trace(h, cf, -2.0, Branch::plus);
    const CharPath from_right = trace(h, cf, 2.0, Branch::minus);
    const PQSquare sq = pq_square_integral(h, cf, from_left, from_right);
    CHECK(sq.value > 0.0);
    CHECK_FALSE(sq.paths_never_meet);
    CHECK(sq.t_end == doctest::Approx(1.0));

    const CharPath apart = trace(h, cf, 8.0, Branch::plus);
    const PQSquare far = pq_square_integral(h, cf, apart, from_right);
    CHECK(far.value >= 0.0);
    CHECK(far.paths_never_meet);
}
