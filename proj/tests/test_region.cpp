#include <doctest.h>

#include <cmath>

#include "bregman/bregman.hpp"
#include "bregman/errors.hpp"
#include "bregman/region.hpp"
#include "oracles.hpp"

using namespace bregman;

namespace {

const auto e1 = LegendreFunction::euclidean(1);
const auto quartic = LegendreFunction::scalar_quartic();

double d1(const LegendreFunction& f, double x, double y) { return bregman_distance(f, make_vector({x}), make_vector({y})); }

}  // namespace

TEST_CASE("distance-test cut, hand-rolled first iteration")
{
    const double u = -0.4455556, alpha = 1.0 / 3.0;
    const Halfspace h = cut_from_distance_test(e1, make_vector({u}), make_vector({-1.0}), make_vector({-1.0}), alpha);
    CHECK(h.a[0] == doctest::Approx(-0.5544444).epsilon(1e-6));
    CHECK(h.b == doctest::Approx(0.4007398).epsilon(1e-6));

    // oracle: sign test of the defining inequality on a grid
    const auto [lo, hi] = oracle::grid_feasible_range(
        [&](double z) { return d1(e1, z, u) <= alpha * d1(e1, z, -1.0) + (1 - alpha) * d1(e1, z, -1.0); }, -1.5, 0.0,
        150001);
    CHECK(lo == doctest::Approx(-0.7227778).epsilon(1e-5));
    CHECK(hi == 0.0);
    CHECK(-h.b / -h.a[0] == doctest::Approx(lo).epsilon(1e-5));
}

TEST_CASE("distance-test cut, degenerate and 2-D")
{
    const Vector p = make_vector({-0.3});
    const Halfspace full = cut_from_distance_test(quartic, p, p, p, 0.4);
    CHECK(full.is_full_space());
    CHECK(full.b == 0.0);

    const auto e2 = LegendreFunction::euclidean(2);
    const Halfspace h =
        cut_from_distance_test(e2, make_vector({0.0, 0.0}), make_vector({1.0, 0.0}), make_vector({0.0, 1.0}), 0.5);
    CHECK(h.a[0] == doctest::Approx(0.5));
    CHECK(h.a[1] == doctest::Approx(0.5));
    CHECK(h.b == doctest::Approx(0.5));

    CHECK_THROWS_AS(cut_from_distance_test(e1, p, p, p, 1.5), DomainError);
    CHECK_THROWS_AS(cut_from_distance_test(e1, p, p, p, 0.0), DomainError);
}

TEST_CASE("distance-test cut matches the inequality for non-euclidean f")
{
    const double u = -0.2, x0 = -1.1, xn = -0.6, alpha = 0.3;
    const Halfspace h = cut_from_distance_test(quartic, make_vector({u}), make_vector({x0}), make_vector({xn}), alpha);
    for (int k = 0; k <= 300; ++k) {
        const double z = -1.5 + 3.0 * k / 300;
        const double slack = alpha * d1(quartic, z, x0) + (1 - alpha) * d1(quartic, z, xn) - d1(quartic, z, u);
        CHECK(h.violation(make_vector({z})) == doctest::Approx(-slack).epsilon(1e-9).scale(1.0));
    }
}

TEST_CASE("Bregman VI cut")
{
    const Halfspace h = cut_from_bregman_vi(e1, make_vector({-1.0}), make_vector({-0.9}));
    CHECK(h.a[0] == doctest::Approx(-0.1));
    CHECK(h.b == doctest::Approx(0.09));
    const auto [lo, hi] = oracle::grid_feasible_range([&](double z) { return h.satisfied(make_vector({z})); }, -1.5,
                                                      0.0, 15001);
    CHECK(lo == doctest::Approx(-0.9));
    CHECK(hi == 0.0);

    CHECK(cut_from_bregman_vi(quartic, make_vector({-0.4}), make_vector({-0.4})).is_full_space());

    const Halfspace q = cut_from_bregman_vi(quartic, make_vector({-1.0}), make_vector({-0.5}));
    CHECK(q.a[0] == doctest::Approx(-0.875));
    CHECK(q.b == doctest::Approx(0.4375));
}

TEST_CASE("region membership")
{
    Region r(BaseSet::interval(-1.5, 0.0));
    r.add_cut(Halfspace(make_vector({-1.0}), 0.9));
    CHECK(r.contains(make_vector({-0.5})));
    CHECK_FALSE(r.contains(make_vector({-1.2})));
    CHECK(r.contains(make_vector({-0.9}), 0.0));
    CHECK_FALSE(r.contains(make_vector({0.1})));
}

TEST_CASE("empty region is reported with its bounds")
{
    Region r(BaseSet::interval(-1.5, 0.0));
    r.add_cut(Halfspace(make_vector({1.0}), -1.0));  // z <= -1
    try {
        r.add_cut(Halfspace(make_vector({-1.0}), 0.5));  // z >= -0.5
        FAIL("expected InfeasibleRegionError");
    } catch (const InfeasibleRegionError& e) {
        CHECK(e.lo() == doctest::Approx(-0.5));
        CHECK(e.hi() == doctest::Approx(-1.0));
    }
    CHECK_THROWS_AS(Halfspace(make_vector({0.0}), -1.0), InfeasibleRegionError);
}

TEST_CASE("1-D projection is a clamp, checked against grid argmin")
{
    for (const auto& f : {e1, quartic, LegendreFunction::scalar_power(1.5)}) {
        const Region c(BaseSet::interval(-1.5, 0.0));
        CHECK(bregman_project(f, c, make_vector({-2.0}))[0] == -1.5);
    }
    Region r(BaseSet::interval(-1.5, 0.0));
    r.add_cut(Halfspace(make_vector({-1.0}), 0.7227778));
    const double z = bregman_project(e1, r, make_vector({-1.0}))[0];
    CHECK(z == doctest::Approx(-0.7227778));
    const double grid = oracle::grid_argmin([&](double y) { return d1(e1, y, -1.0); }, r.lo(), r.hi());
    CHECK(z == doctest::Approx(grid).epsilon(1e-5));

    const double zq = bregman_project(quartic, r, make_vector({-1.2}))[0];
    const double gq = oracle::grid_argmin([&](double y) { return d1(quartic, y, -1.2); }, r.lo(), r.hi());
    CHECK(zq == doctest::Approx(gq).epsilon(1e-5));
}

TEST_CASE("2-D projection onto a halfspace")
{
    const auto e2 = LegendreFunction::euclidean(2);
    Region r(BaseSet::whole_space(2));
    r.add_cut(Halfspace(make_vector({1.0, 0.0}), 0.0));
    const Vector z = bregman_project(e2, r, make_vector({1.0, 1.0}));
    CHECK(z[0] == doctest::Approx(0.0).scale(1.0));
    CHECK(z[1] == doctest::Approx(1.0));
    CHECK(project_halfspace_euclidean(r.cuts()[0], make_vector({1.0, 1.0})) == make_vector({0.0, 1.0}));

    // grid argmin over the feasible half-plane
    double best = 1e300, bx = 0, by = 0;
    for (int i = 0; i <= 400; ++i)
        for (int j = 0; j <= 400; ++j) {
            const double x = -2.0 + 2.0 * i / 400, y = -1.0 + 4.0 * j / 400;
            const double d = bregman_distance(e2, make_vector({x, y}), make_vector({1.0, 1.0}));
            if (d < best) best = d, bx = x, by = y;
        }
    CHECK(distance(z, make_vector({bx, by})) < 1e-2);
}

TEST_CASE("2-D box with cuts: Dykstra and Bregman cyclic projection are feasible and optimal")
{
    Region r(BaseSet::box(make_vector({0.1, 0.1}), make_vector({3.0, 3.0})));
    r.add_cut(Halfspace(make_vector({1.0, 1.0}), 2.0));
    r.add_cut(Halfspace(make_vector({1.0, -2.0}), 0.0));
    for (const auto& f : {LegendreFunction::euclidean(2), LegendreFunction::neg_entropy(2)}) {
        const Vector x = make_vector({2.5, 0.3});
        const Vector z = bregman_project(f, r, x);
        CHECK(r.contains(z, 1e-9));
        const double dz = bregman_distance(f, z, x);
        for (int i = 0; i <= 200; ++i)
            for (int j = 0; j <= 200; ++j) {
                const Vector y = make_vector({0.1 + 2.9 * i / 200, 0.1 + 2.9 * j / 200});
                if (r.contains(y)) CHECK(dz <= bregman_distance(f, y, x) + 1e-9);
            }
    }
}

TEST_CASE("intersect requires a common base")
{
    const Region a(BaseSet::interval(-1.5, 0.0));
    const Region b(BaseSet::interval(-1.0, 0.0));
    CHECK_THROWS_AS(Region::intersect(a, b), DomainError);
    Region c = a.with_cut(Halfspace(make_vector({1.0}), -0.2));
    Region d = a.with_cut(Halfspace(make_vector({-1.0}), 1.0));
    const Region both = Region::intersect(c, d);
    CHECK(both.lo() == doctest::Approx(-1.0));
    CHECK(both.hi() == doctest::Approx(-0.2));
}
