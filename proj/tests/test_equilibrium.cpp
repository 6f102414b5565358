#include <doctest.h>

#include <cmath>
#include <vector>

#include "bregman/bregman.hpp"
#include "bregman/equilibrium.hpp"
#include "bregman/errors.hpp"
#include "oracles.hpp"

using namespace bregman;

namespace {

const auto e1 = LegendreFunction::euclidean(1);
const GmepProblem gmep = make_problem("paper-example-gmep");
const GmepProblem ep = make_problem("paper-example-ep");

std::vector<Vector> grid() { return probe_grid(gmep.base, 1000); }

// Resolvent oracle: the z on a fine grid of C minimizing the VI score
// max_y [phi(z) - Theta(z,y) - phi(y) - Psi(x)(y - z) - (z - x)(y - z)],
// evaluated with the problem's own pointwise functions.
double resolvent_by_grid(const GmepProblem& p, double x)
{
    const auto probes = probe_grid(p.base, 301);
    auto score = [&](double z) {
        double worst = -1e300;
        const Vector zv = make_vector({z});
        const double psi = p.psi(make_vector({x}))[0];
        for (const auto& y : probes) {
            const double v = p.phi(zv) - p.theta(zv, y) - p.phi(y) - psi * (y[0] - z) - (z - x) * (y[0] - z);
            worst = std::max(worst, v);
        }
        return worst;
    };
    return oracle::grid_argmin(score, -1.5, 0.0, 15001);
}

}  // namespace

TEST_CASE("registry and structure")
{
    CHECK(gmep.base == BaseSet::interval(-1.5, 0.0));
    CHECK(gmep.known_solution == make_vector({0.0}));
    CHECK(ep.phi.is_zero());
    CHECK(ep.psi.is_zero());
    CHECK(gmep.as_ep() == GmepProblem{gmep.as_ep().name, gmep.base, gmep.theta, ConvexTerm::zero(),
                                      MonotoneOperator::zero(), gmep.known_solution});
    for (const char* s : {"paper-example-gmep", "paper-example-ep", "affine-quadratic(0.5,0.25,linear:2,3)"}) {
        const auto p = make_problem(s);
        CHECK(make_problem(problem_spec(p)) == p);
        CHECK(check_structure(p, 500).ok());
    }
    CHECK_THROWS_AS(make_problem("nope"), ConfigError);
    CHECK_THROWS_AS(make_problem("affine-quadratic(-1,0,zero,1)"), ConfigError);
    CHECK_THROWS_AS(make_problem("affine-quadratic(1,0,cos,1)"), ConfigError);
}

TEST_CASE("gmep_violation")
{
    CHECK(gmep_violation(gmep, make_vector({0.0}), grid()) <= 0.0);
    const std::vector<Vector> at0 = {make_vector({0.0})};
    // phi(-1) - Theta(-1,0) - sin(-1)(0 + 1) - phi(0) = 1 + 1 + 0.841471
    const double direct = 1.0 - (-1.0) * (0.0 + 1.0) - std::sin(-1.0) * 1.0;
    CHECK(gmep_violation(gmep, make_vector({-1.0}), at0) == doctest::Approx(direct).epsilon(1e-14));
    CHECK(direct == doctest::Approx(2.841471).epsilon(1e-6));
    const GmepProblem zero{"zero", gmep.base, {}, {}, {}, std::nullopt};
    CHECK(gmep_violation(zero, make_vector({-0.7}), grid()) == 0.0);
    CHECK_THROWS_AS(gmep_violation(gmep, make_vector({0.5}), grid()), DomainError);
}

TEST_CASE("resolvent examples")
{
    const double x = -1.0;
    const double z = resolvent(e1, gmep, make_vector({x}))[0];
    CHECK(z == doctest::Approx((x - std::sin(x)) / 4.0).epsilon(1e-14));
    CHECK(z == doctest::Approx(-0.0396322538).epsilon(1e-9));
    CHECK(z == doctest::Approx(resolvent_by_grid(gmep, x)).epsilon(2e-4).scale(1.0));
    CHECK(resolvent(e1, ep, make_vector({-1.0}))[0] == doctest::Approx(-0.5));
    CHECK(resolvent(e1, ep, make_vector({-1.0}))[0] == doctest::Approx(resolvent_by_grid(ep, -1.0)).epsilon(2e-4));
    CHECK(resolvent(e1, gmep, make_vector({0.0}))[0] == 0.0);
}

TEST_CASE("resolvent methods agree")
{
    const auto quartic = LegendreFunction::scalar_quartic();
    ResolventConfig closed, bisect, sampled;
    closed.method = ResolventMethod::closed_form_affine_quadratic;
    bisect.method = ResolventMethod::scalar_kkt_bisection;
    sampled.method = ResolventMethod::sampled_vi_check_only;
    for (double x : {-1.5, -1.1, -0.4, 0.0}) {
        const Vector xv = make_vector({x});
        CHECK(std::abs(resolvent(e1, gmep, xv, closed)[0] - resolvent(e1, gmep, xv, bisect)[0]) <= 1e-12);
        CHECK(std::abs(resolvent(e1, gmep, xv, sampled)[0] - resolvent(e1, gmep, xv)[0]) <= 1.5 / 999);
        // the bisection must satisfy the VI for non-euclidean f too
        const Vector zq = resolvent(quartic, gmep, xv);
        CHECK(verify_resolvent(quartic, gmep, xv, zq, grid()) <= 1e-8);
    }
    CHECK_THROWS_AS(resolvent(quartic, gmep, make_vector({-1.0}), closed), DomainError);
    CHECK(parse_resolvent_method(to_string(ResolventMethod::scalar_kkt_bisection)) ==
          ResolventMethod::scalar_kkt_bisection);
    CHECK_THROWS_AS(parse_resolvent_method("newton"), ConfigError);
}

TEST_CASE("verify_resolvent")
{
    CHECK(verify_resolvent(e1, gmep, make_vector({-1.0}), make_vector({-0.0396322538}), grid()) <= 1e-8);
    CHECK(verify_resolvent(e1, gmep, make_vector({0.0}), make_vector({0.0}), grid()) <= 0.0);
    CHECK(verify_resolvent(e1, gmep, make_vector({-1.0}), make_vector({-0.9}), grid()) > 0.1);
}

TEST_CASE("firm nonexpansiveness and the Pythagoras gap")
{
    const ResolventConfig cfg;
    CHECK(bfne_gap(e1, gmep, cfg, make_vector({-0.8}), make_vector({-0.8})) == doctest::Approx(0.0).scale(1.0));
    CHECK(bfne_gap(e1, gmep, cfg, make_vector({-1.0}), make_vector({-0.5})) <= 1e-10);
    for (int i = 0; i <= 20; ++i)
        for (int j = 0; j <= 20; ++j)
            CHECK(bfne_gap(e1, ep, cfg, make_vector({-1.5 * i / 20}), make_vector({-1.5 * j / 20})) <= 1e-10);
    const Vector p = make_vector({0.0});
    CHECK(resolvent_pythagoras_gap(e1, gmep, cfg, p, make_vector({-1.0})) <= 1e-10);
    CHECK(resolvent_pythagoras_gap(e1, gmep, cfg, p, p) == 0.0);
    CHECK(resolvent_pythagoras_gap(e1, ep, cfg, p, make_vector({-1.5})) <= 1e-10);
}

TEST_CASE("fault injection breaks the checks")
{
    ResolventConfig bad;
    bad.fault_gain = 1.0;
    const Vector x = make_vector({-1.0});
    CHECK(verify_resolvent(e1, ep, x, resolvent(e1, ep, x, bad), grid()) > 1e-3);
    CHECK(bfne_gap(e1, ep, bad, make_vector({-1.0}), make_vector({-0.2})) > 1e-3);
}

TEST_CASE("probe grid")
{
    const auto g = probe_grid(gmep.base, 1000);
    REQUIRE(g.size() == 1000);
    CHECK(g.front()[0] == -1.5);
    CHECK(g.back()[0] == 0.0);
    const auto box = make_problem("affine-quadratic(1,1,sin,2)").base;
    for (const auto& y : probe_grid(box, 300)) CHECK(box.contains(y));
}
