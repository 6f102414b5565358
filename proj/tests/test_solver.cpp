#include <doctest.h>

#include <cmath>

#include "bregman/bregman.hpp"
#include "bregman/errors.hpp"
#include "bregman/solver.hpp"
#include "oracles.hpp"

using namespace bregman;

namespace {

const auto e1 = LegendreFunction::euclidean(1);

HybridSolver make_solver(Variant v, SolverConfig cfg = {})
{
    cfg.variant = v;
    return HybridSolver(e1, make_problem("paper-example-gmep"), FixedPointMap{}, Schedule{}, cfg);
}

}  // namespace

TEST_CASE("schedule")
{
    const Schedule s;
    CHECK(s.alpha(0) == doctest::Approx(1.0 / 3.0));
    CHECK(s.beta(0) == doctest::Approx(0.49));
    CHECK_NOTHROW(s.validate(10'000'000));
    CHECK(s.asymptotics_ok());

    Schedule bad;
    bad.beta = Rule::shifted_harmonic(0.99, 1.0);  // beta_0 = -0.01
    CHECK_THROWS_AS(bad.validate(10), DomainError);
    Schedule flat;
    flat.alpha = Rule::constant(0.5);
    CHECK_FALSE(flat.asymptotics_ok());
}

TEST_CASE("fixed-point map")
{
    const FixedPointMap t;
    CHECK(t(make_vector({-0.9}))[0] == doctest::Approx(-0.6));
    CHECK(t.maps_into(BaseSet::interval(-1.5, 0.0), 1000));
    CHECK(t.quasi_nonexpansive_worst(e1, BaseSet::interval(-1.5, 0.0), 1000) <= 1e-12);
    CHECK_THROWS_AS(FixedPointMap::linear_contraction(1.0), DomainError);
}

TEST_CASE("hand-rolled first iteration, ep variant")
{
    const auto solver = make_solver(Variant::ep);
    const Vector x0 = make_vector({-1.0});
    IterationState s = solver.initial_state(x0);
    CHECK(s.z[0] == doctest::Approx(-0.8366667).epsilon(1e-6));
    CHECK(s.y[0] == doctest::Approx(-0.8911111).epsilon(1e-6));
    CHECK(s.u[0] == doctest::Approx(-0.4455556).epsilon(1e-6));
    CHECK(s.region_c.lo() == doctest::Approx(-0.7227778).epsilon(1e-6));
    CHECK(s.region_c.hi() == 0.0);
    CHECK(s.region_q.lo() == -1.5);

    solver.advance(s, x0);
    CHECK(s.n == 1);
    // oracle: grid argmin of D_f(., x0) over the cut region
    const double grid = oracle::grid_argmin(
        [&](double z) {
            const Vector zv = make_vector({z});
            return s.region_c.contains(zv) && s.region_q.contains(zv) ? bregman_distance(e1, zv, x0) : 1e300;
        },
        -1.5, 0.0);
    CHECK(s.x[0] == doctest::Approx(-0.7227778).epsilon(1e-6));
    CHECK(s.x[0] == doctest::Approx(grid).epsilon(1e-5));
}

TEST_CASE("first iteration, gmep variant")
{
    const auto solver = make_solver(Variant::gmep);
    const IterationState s = solver.initial_state(make_vector({-1.0}));
    CHECK(s.y[0] == doctest::Approx(-0.8911111).epsilon(1e-6));
    CHECK(s.u[0] == doctest::Approx((s.y[0] - std::sin(s.y[0])) / 4.0).epsilon(1e-12));
    CHECK(s.u[0] == doctest::Approx(-0.0283351).epsilon(1e-6));
}

TEST_CASE("starting at the solution")
{
    const auto solver = make_solver(Variant::gmep);
    IterationState s = solver.initial_state(make_vector({0.0}));
    CHECK(s.z[0] == 0.0);
    CHECK(s.y[0] == 0.0);
    CHECK(s.u[0] == 0.0);
    solver.advance(s, make_vector({0.0}));
    CHECK(s.x[0] == 0.0);

    const RunResult r = solver.run(make_vector({0.0}));
    CHECK(r.status == RunStatus::converged);
    CHECK(r.iterations == 1);
    CHECK(r.result[0] == 0.0);
}

TEST_CASE("short run keeps its invariants")
{
    SolverConfig cfg;
    cfg.max_iter = 5000;
    cfg.trace_every = 100;
    cfg.check_invariants_every = 1;
    for (Variant v : {Variant::gmep, Variant::ep}) {
        const auto solver = make_solver(v, cfg);
        const Vector x0 = make_vector({-1.5});
        const RunResult r = solver.run(x0);
        CHECK(r.status == RunStatus::max_iter);
        CHECK(r.iterations == 5000);
        CHECK(r.invariant_checks == 5001);
        CHECK(r.trace.front().n == 0);
        CHECK(r.trace.back().n == 5000);
        CHECK(r.trace.size() == 51);
        CHECK(check_monotone_df(r.trace, bregman_distance(e1, make_vector({0.0}), x0)));
        CHECK(cauchy_worst(e1, r.trace, x0) <= 1e-10);
        for (const auto& t : r.trace) {
            CHECK(t.fp_residual == doctest::Approx(std::abs(t.x[0]) / 3.0));
            REQUIRE(t.d_sol.has_value());
            CHECK(*t.d_sol == doctest::Approx(0.5 * t.x[0] * t.x[0]));
        }
    }
}

TEST_CASE("incremental fold agrees with a rebuild from the recorded cuts")
{
    SolverConfig cfg;
    cfg.region.record_cuts = true;
    const auto solver = make_solver(Variant::gmep, cfg);
    const Vector x0 = make_vector({-1.0});
    IterationState s = solver.initial_state(x0);
    for (int k = 0; k < 200; ++k) {
        solver.advance(s, x0);
        Region rebuilt(solver.problem().base);
        for (const auto& h : s.region_c.cuts()) rebuilt.add_cut(h);
        for (const auto& h : s.region_q.cuts()) rebuilt.add_cut(h);
        CHECK(std::abs(bregman_project(e1, rebuilt, x0)[0] - s.x[0]) <= 1e-12);
    }
}

TEST_CASE("check_monotone_df")
{
    TraceRecord a;
    a.d_x0 = 0.3;
    const std::vector<TraceRecord> one = {a};
    CHECK(check_monotone_df(one));
    TraceRecord b = a;
    b.d_x0 = 0.1;
    const std::vector<TraceRecord> down = {a, b};
    CHECK_FALSE(check_monotone_df(down));
    const std::vector<TraceRecord> up = {b, a};
    CHECK(check_monotone_df(up));
    CHECK_FALSE(check_monotone_df(up, 0.2));
}

TEST_CASE("solver rejects bad input")
{
    const auto solver = make_solver(Variant::gmep);
    CHECK_THROWS_AS(solver.run(make_vector({0.5})), DomainError);
    CHECK_THROWS_AS(HybridSolver(LegendreFunction::euclidean(2), make_problem("paper-example-gmep"), FixedPointMap{},
                                 Schedule{}, SolverConfig{}),
                    DomainError);
    Schedule bad;
    bad.beta = Rule::shifted_harmonic(0.99, 1.0);
    const HybridSolver s2(e1, make_problem("paper-example-gmep"), FixedPointMap{}, bad, SolverConfig{});
    CHECK_THROWS_AS(s2.run(make_vector({-1.0})), DomainError);
    CHECK(parse_variant("ep") == Variant::ep);
    CHECK_THROWS_AS(parse_variant("mep"), ConfigError);
}

TEST_CASE("non-euclidean and 2-D runs stay consistent")
{
    SolverConfig cfg;
    cfg.max_iter = 2000;
    cfg.check_invariants_every = 1;
    const HybridSolver q(LegendreFunction::scalar_quartic(), make_problem("paper-example-gmep"), FixedPointMap{},
                         Schedule{}, cfg);
    const RunResult rq = q.run(make_vector({-1.2}));
    CHECK(std::abs(rq.result[0]) < 1.2);
    CHECK(check_monotone_df(rq.trace));

    cfg.max_iter = 30;
    const HybridSolver d2(LegendreFunction::euclidean(2), make_problem("affine-quadratic(1,1,sin,2)"), FixedPointMap{},
                          Schedule{}, cfg);
    const RunResult r2 = d2.run(make_vector({-1.0, -0.4}));
    CHECK(norm(r2.result) < norm(make_vector({-1.0, -0.4})));
}
