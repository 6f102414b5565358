#include "bregman/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <random>
#include <utility>

#include "bregman/bregman.hpp"
#include "bregman/equilibrium.hpp"
#include "bregman/errors.hpp"
#include "bregman/region.hpp"
#include "bregman/solver.hpp"

namespace bregman {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

struct Instance {
    LegendreFunction f;
    double lo, hi;  // sampling box per axis, inside int dom f
};

std::vector<Instance> instances()
{
    return {
        {LegendreFunction::euclidean(1), -2.0, 2.0},
        {LegendreFunction::euclidean(3), -2.0, 2.0},
        {LegendreFunction::scalar_power(3.0), -2.0, 2.0},
        {LegendreFunction::scalar_power(1.5), -2.0, 2.0},
        {LegendreFunction::scalar_quartic(), -2.0, 2.0},
        {LegendreFunction::neg_entropy(2), 0.05, 3.0},
    };
}

Vector draw(std::mt19937_64& rng, std::size_t d, double lo, double hi)
{
    std::uniform_real_distribution<double> u(lo, hi);
    Vector v(d);
    for (auto& c : v) c = u(rng);
    return v;
}

double tol_for(double scale) { return kIdentityTol + kIdentityTol * scale; }

// Accumulates the worst value of a quantity that must stay <= threshold.
struct Tracker {
    std::string name;
    double threshold;
    int samples = 0;
    double worst = kNegInf;
    bool failed = false;
    std::string detail;

    Tracker(std::string n, double thr) : name(std::move(n)), threshold(thr) {}

    void observe(double value, double limit)
    {
        ++samples;
        worst = std::max(worst, value);
        if (!(value <= limit)) failed = true;
    }
    void observe(double value) { observe(value, threshold); }
    PropertyResult result() const { return {name, samples, samples ? worst : 0.0, threshold, !failed, detail}; }
};

using Results = std::vector<PropertyResult>;

// ---------------------------------------------------------------- geometry

Results nonnegativity(const VerifyOptions& o)
{
    Results out;
    std::mt19937_64 rng(o.seed);
    for (const auto& in : instances()) {
        Tracker t{"bregman.nonnegativity[" + in.f.tag() + "/d" + std::to_string(in.f.dim()) + "]", 1e-12};
        for (int s = 0; s < o.samples; ++s) {
            const Vector x = draw(rng, in.f.dim(), in.lo, in.hi), y = draw(rng, in.f.dim(), in.lo, in.hi);
            const double d = bregman_distance(in.f, x, y);
            t.observe(-d);
            // zero iff coincident: D(x,x) = 0, and well-separated pairs are strictly positive
            t.observe(bregman_distance(in.f, x, x));
            if (distance(x, y) >= 1e-2 && !(d > 1e-12)) {
                t.failed = true;
                t.detail = "D_f vanished on a separated pair";
            }
        }
        out.push_back(t.result());
    }
    return out;
}

Results gradient_roundtrip(const VerifyOptions& o)
{
    Results out;
    std::mt19937_64 rng(o.seed + 1);
    for (const auto& in : instances()) {
        Tracker t{"bregman.gradient_roundtrip[" + in.f.tag() + "/d" + std::to_string(in.f.dim()) + "]", 0.0};
        for (int s = 0; s < o.samples; ++s) {
            const Vector x = draw(rng, in.f.dim(), in.lo, in.hi);
            const double lim = 1e-9 * (1.0 + norm(x));
            t.observe(distance(in.f.grad_conj(in.f.grad(x)), x) - lim, 0.0);
            const Vector u = in.f.grad(x);
            t.observe(distance(in.f.grad_conj_by_bisection(u), in.f.grad_conj(u)) - lim, 0.0);
        }
        out.push_back(t.result());
    }
    return out;
}

Results fenchel_equality(const VerifyOptions& o)
{
    Results out;
    std::mt19937_64 rng(o.seed + 2);
    for (const auto& in : instances()) {
        Tracker t{"bregman.fenchel_equality[" + in.f.tag() + "/d" + std::to_string(in.f.dim()) + "]", 0.0};
        for (int s = 0; s < o.samples; ++s) {
            const Vector x = draw(rng, in.f.dim(), in.lo, in.hi);
            const Vector g = in.f.grad(x);
            const double a = in.f.value(x), b = in.f.conj_value(g), c = dot(g, x);
            t.observe(std::abs(a + b - c) - tol_for(std::abs(a) + std::abs(b) + std::abs(c)), 0.0);
        }
        out.push_back(t.result());
    }
    return out;
}

Results three_four_point(const VerifyOptions& o)
{
    Results out;
    std::mt19937_64 rng(o.seed + 3);
    for (const auto& in : instances()) {
        const auto d = in.f.dim();
        Tracker t3{"bregman.three_point[" + in.f.tag() + "/d" + std::to_string(d) + "]", 0.0};
        Tracker t4{"bregman.four_point[" + in.f.tag() + "/d" + std::to_string(d) + "]", 0.0};
        for (int s = 0; s < o.samples; ++s) {
            const Vector x = draw(rng, d, in.lo, in.hi), y = draw(rng, d, in.lo, in.hi), z = draw(rng, d, in.lo, in.hi),
                         w = draw(rng, d, in.lo, in.hi);
            const double s3 = bregman_distance(in.f, x, y) + bregman_distance(in.f, y, z) + bregman_distance(in.f, x, z);
            t3.observe(three_point_residual(in.f, x, y, z) - tol_for(s3), 0.0);
            const double s4 = bregman_distance(in.f, y, x) + bregman_distance(in.f, y, z) + bregman_distance(in.f, w, x) +
                              bregman_distance(in.f, w, z);
            t4.observe(four_point_residual(in.f, y, w, x, z) - tol_for(s4), 0.0);
        }
        out.push_back(t3.result());
        out.push_back(t4.result());
    }
    return out;
}

Results v_identity_and_subdifferential(const VerifyOptions& o)
{
    Results out;
    std::mt19937_64 rng(o.seed + 4);
    for (const auto& in : instances()) {
        const auto d = in.f.dim();
        Tracker tv{"bregman.v_identity[" + in.f.tag() + "/d" + std::to_string(d) + "]", 0.0};
        Tracker ts{"bregman.subdifferential[" + in.f.tag() + "/d" + std::to_string(d) + "]", 0.0};
        for (int s = 0; s < o.samples; ++s) {
            const Vector x = draw(rng, d, in.lo, in.hi);
            const Vector xs = in.f.grad(draw(rng, d, in.lo, in.hi));
            const Vector target = in.f.grad(draw(rng, d, in.lo, in.hi));
            const Vector ys = target - xs;
            const double v = v_fn(in.f, x, xs);
            tv.observe(std::abs(v - bregman_distance(in.f, x, in.f.grad_conj(xs))) - tol_for(std::abs(v)), 0.0);
            ts.observe(-subdifferential_slack(in.f, x, xs, ys) - tol_for(std::abs(v)), 0.0);
        }
        out.push_back(tv.result());
        out.push_back(ts.result());
    }
    return out;
}

Results convex_combination(const VerifyOptions& o)
{
    Results out;
    std::mt19937_64 rng(o.seed + 5);
    std::uniform_real_distribution<double> w(0.05, 1.0);
    for (const auto& in : instances()) {
        const auto d = in.f.dim();
        Tracker t{"bregman.convex_combination[" + in.f.tag() + "/d" + std::to_string(d) + "]", 0.0};
        for (int s = 0; s < o.samples; ++s) {
            std::vector<double> ts = {w(rng), w(rng), w(rng)};
            const double sum = ts[0] + ts[1] + ts[2];
            for (auto& c : ts) c /= sum;
            ts[2] = 1.0 - ts[0] - ts[1];
            const std::vector<Vector> xs = {draw(rng, d, in.lo, in.hi), draw(rng, d, in.lo, in.hi),
                                            draw(rng, d, in.lo, in.hi)};
            const Vector zbar = combine_dual(in.f, ts, xs);
            const Vector z = draw(rng, d, in.lo, in.hi);
            double rhs = 0.0;
            for (int k = 0; k < 3; ++k) rhs += ts[k] * bregman_distance(in.f, z, xs[k]);
            t.observe(bregman_distance(in.f, z, zbar) - rhs - tol_for(rhs), 0.0);
        }
        out.push_back(t.result());
    }
    return out;
}

// D_f(y, x) <= delta(eps) must force ||y - x|| <= eps on a bounded box, with
// delta calibrated from the sampled modulus of total convexity.
Results sequential_consistency(const VerifyOptions& o)
{
    Results out;
    std::mt19937_64 rng(o.seed + 6);
    for (const auto& in : instances()) {
        const auto d = in.f.dim();
        Tracker t{"bregman.sequential_consistency[" + in.f.tag() + "/d" + std::to_string(d) + "]", 0.0};
        for (double eps : {0.5, 0.1, 0.02}) {
            double delta = std::numeric_limits<double>::infinity();
            for (int s = 0; s < 200; ++s) {
                const Vector x = draw(rng, d, in.lo, in.hi);
                const double nu = total_convexity_modulus(in.f, x, eps, 64, o.seed + s);
                if (!(nu > 0.0)) {
                    t.failed = true;
                    t.detail = "modulus of total convexity vanished";
                }
                delta = std::min(delta, nu);
            }
            delta *= 0.5;  // sampled infimum is an upper estimate
            for (int s = 0; s < o.samples; ++s) {
                const Vector x = draw(rng, d, in.lo, in.hi);
                // shrinking perturbations y_k = x + r_k dir, r_k = 2^-k
                Vector dir = draw(rng, d, -1.0, 1.0);
                const double nd = norm(dir);
                if (nd == 0.0) continue;
                for (int k = 0; k < 12; ++k) {
                    const Vector y = x + (std::ldexp(1.0, -k) / nd) * dir;
                    if (!in.f.in_interior(y)) continue;
                    if (bregman_distance(in.f, y, x) <= delta) t.observe(distance(y, x) - eps, 0.0);
                }
            }
        }
        out.push_back(t.result());
    }
    return out;
}

// ---------------------------------------------------------------- regions

Region random_region_1d(std::mt19937_64& rng, const Instance& in, int cuts, bool record)
{
    RegionOptions ro;
    ro.record_cuts = record;
    Region r(BaseSet::interval(in.lo, in.hi), ro);
    const double anchor = std::uniform_real_distribution<double>(in.lo, in.hi)(rng);
    std::uniform_real_distribution<double> sgn(-1.0, 1.0), off(0.0, 1.0);
    for (int k = 0; k < cuts; ++k) {
        const double a = sgn(rng);
        if (a == 0.0) continue;
        r.add_cut(Halfspace(make_vector({a}), a * anchor + off(rng) * std::abs(a)));
    }
    return r;
}

Results fold_exactness(const VerifyOptions& o)
{
    std::mt19937_64 rng(o.seed + 7);
    Tracker t{"region.fold_exactness", 0.0};
    const Instance in{LegendreFunction::euclidean(1), -2.0, 2.0};
    for (int trial = 0; trial < 100; ++trial) {
        const Region r = random_region_1d(rng, in, 1 + trial % 30, true);
        for (int k = 0; k <= 1000; ++k) {
            const double z = -2.0 + 4.0 * k / 1000.0;
            if (std::abs(z - r.lo()) < 1e-12 || std::abs(z - r.hi()) < 1e-12) continue;
            const Vector zv = make_vector({z});
            const bool by_fold = r.base().contains(zv) && z >= r.lo() && z <= r.hi();
            const bool by_cuts = r.base().contains(zv) && r.satisfies_cuts(zv);
            t.observe(by_fold == by_cuts ? 0.0 : 1.0);
        }
    }
    return {t.result()};
}

Results projection_1d(const VerifyOptions& o)
{
    Results out;
    std::mt19937_64 rng(o.seed + 8);
    for (const auto& in : instances()) {
        if (in.f.dim() != 1) continue;
        const std::string tag = in.f.tag();
        Tracker topt{"region.projection_optimality[" + tag + "]", 1e-9};
        Tracker tvi{"region.variational[" + tag + "]", 1e-8};
        Tracker tpy{"region.pythagoras[" + tag + "]", 1e-8};
        Tracker tid{"region.idempotence[" + tag + "]", 1e-12};
        for (int trial = 0; trial < 50; ++trial) {
            const Region r = random_region_1d(rng, in, 1 + trial % 5, false);
            const Vector x = draw(rng, 1, in.lo - 1.0, in.hi + 1.0);
            if (!in.f.in_interior(x)) continue;
            const Vector z = bregman_project(in.f, r, x);
            const double dzx = bregman_distance(in.f, z, x);
            const double gx = in.f.grad1(x[0]), gz = in.f.grad1(z[0]);
            for (int k = 0; k < o.samples; ++k) {
                const Vector y = make_vector({r.lo() + (r.hi() - r.lo()) * k / (o.samples - 1.0)});
                topt.observe(dzx - bregman_distance(in.f, y, x));
                tvi.observe(-(gx - gz) * (z[0] - y[0]));
                tpy.observe(bregman_distance(in.f, y, z) + dzx - bregman_distance(in.f, y, x));
            }
            const Vector inside = make_vector({0.5 * (r.lo() + r.hi())});
            tid.observe(distance(bregman_project(in.f, r, inside), inside));
        }
        for (auto* t : {&topt, &tvi, &tpy, &tid}) out.push_back(t->result());
    }
    return out;
}

Results projection_multidim(const VerifyOptions& o)
{
    Results out;
    std::mt19937_64 rng(o.seed + 9);
    {
        Tracker t{"region.dykstra_closed_form[euclidean/d2]", 1e-9};
        const auto f = LegendreFunction::euclidean(2);
        for (int trial = 0; trial < 200; ++trial) {
            const Vector a = draw(rng, 2, -1.0, 1.0);
            if (norm(a) < 1e-3) continue;
            const Halfspace h(a, std::uniform_real_distribution<double>(-1.0, 1.0)(rng));
            Region r(BaseSet::whole_space(2));
            r.add_cut(h);
            const Vector x = draw(rng, 2, -3.0, 3.0);
            t.observe(distance(bregman_project(f, r, x), project_halfspace_euclidean(h, x)));
        }
        out.push_back(t.result());
    }
    // Dykstra and the Bregman cyclic method on boxes with several cuts, checked
    // against the variational and Pythagoras characterizations on Halton points.
    for (const auto& f : {LegendreFunction::euclidean(2), LegendreFunction::neg_entropy(2)}) {
        const bool entropy = f.kind() == LegendreKind::neg_entropy;
        const double lo = entropy ? 0.1 : -2.0, hi = entropy ? 3.0 : 2.0;
        Tracker tvi{"region.variational[" + f.tag() + "/d2]", 1e-8};
        Tracker tpy{"region.pythagoras[" + f.tag() + "/d2]", 1e-8};
        for (int trial = 0; trial < 20; ++trial) {
            Region r(BaseSet::box(Vector(2, lo), Vector(2, hi)));
            const Vector anchor = draw(rng, 2, lo, hi);
            for (int k = 0; k < 3; ++k) {
                const Vector a = draw(rng, 2, -1.0, 1.0);
                r.add_cut(Halfspace(a, dot(a, anchor) + 0.2 * norm(a)));
            }
            const Vector x = draw(rng, 2, lo, hi + 1.0);
            const Vector z = bregman_project(f, r, x);
            const Vector dg = f.grad(x) - f.grad(z);
            const double dzx = bregman_distance(f, z, x);
            for (const auto& y : probe_grid(r.base(), o.samples)) {
                if (!r.contains(y)) continue;
                tvi.observe(-dot(dg, z - y));
                tpy.observe(bregman_distance(f, y, z) + dzx - bregman_distance(f, y, x));
            }
        }
        out.push_back(tvi.result());
        out.push_back(tpy.result());
    }
    return out;
}

// ---------------------------------------------------------------- equilibrium

struct ResolventCase {
    std::string problem;
    LegendreFunction f;
    bool bfne;  // BFNE holds for this pairing (see Psi convention)
};

std::vector<ResolventCase> resolvent_cases()
{
    return {
        {"paper-example-gmep", LegendreFunction::euclidean(1), true},
        {"paper-example-ep", LegendreFunction::euclidean(1), true},
        {"affine-quadratic(0.5,0.25,linear:0.5,1)", LegendreFunction::euclidean(1), true},
        {"affine-quadratic(1,1,sin,2)", LegendreFunction::euclidean(2), true},
        {"paper-example-ep", LegendreFunction::scalar_quartic(), true},
        {"paper-example-ep", LegendreFunction::scalar_power(3.0), true},
        {"affine-quadratic(2,0.5,zero,1)", LegendreFunction::scalar_power(1.5), true},
        {"paper-example-gmep", LegendreFunction::scalar_quartic(), false},
    };
}

std::string case_tag(const ResolventCase& c) { return c.problem + "/" + c.f.tag(); }

Vector draw_in(std::mt19937_64& rng, const BaseSet& b)
{
    Vector v(b.dim());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = std::uniform_real_distribution<double>(b.lo()[i], b.hi()[i])(rng);
    return v;
}

Results structure(const VerifyOptions& o)
{
    Results out;
    for (const char* name : {"paper-example-gmep", "paper-example-ep", "affine-quadratic(0.5,0.25,linear:0.5,1)",
                             "affine-quadratic(1,1,sin,2)", "affine-quadratic(2,0.5,zero,1)"}) {
        const auto p = make_problem(name);
        const auto rep = check_structure(p, o.samples, o.seed);
        Tracker t{std::string("equilibrium.structure[") + name + "]", 1e-12};
        t.observe(rep.a1_worst);
        t.observe(rep.a2_worst);
        t.observe(rep.psi_worst);
        t.observe(rep.phi_worst);
        t.samples = rep.samples;
        out.push_back(t.result());
    }
    return out;
}

Results resolvent_suite(const VerifyOptions& o)
{
    Results out;
    std::mt19937_64 rng(o.seed + 10);
    ResolventConfig cfg;
    cfg.fault_gain = o.resolvent_fault;
    for (const auto& c : resolvent_cases()) {
        const auto p = make_problem(c.problem);
        const auto probes = probe_grid(p.base, 1000);
        Tracker tvi{"equilibrium.resolvent_vi[" + case_tag(c) + "]", 1e-8};
        Tracker tbf{"equilibrium.bfne[" + case_tag(c) + "]", 1e-10};
        Tracker tb5{"equilibrium.bfne_four_term[" + case_tag(c) + "]", 1e-9};
        Tracker tpy{"equilibrium.pythagoras[" + case_tag(c) + "]", 1e-10};
        Tracker tfx{"equilibrium.fixed_point[" + case_tag(c) + "]", 1e-10};
        const Vector q = *p.known_solution;
        for (int s = 0; s < 100; ++s) {
            const Vector x = draw_in(rng, p.base), y = draw_in(rng, p.base);
            const Vector z = resolvent(c.f, p, x, cfg);
            tvi.observe(verify_resolvent(c.f, p, x, z, probes));
            if (c.bfne) {
                tbf.observe(bfne_gap(c.f, p, cfg, x, y));
                tb5.observe(-bfne_four_term_slack(c.f, p, cfg, x, y));
                tpy.observe(resolvent_pythagoras_gap(c.f, p, cfg, q, x));
            }
        }
        tfx.observe(distance(resolvent(c.f, p, q, cfg), q));
        tfx.observe(gmep_violation(p, q, probes), 1e-12);
        out.push_back(tvi.result());
        if (c.bfne) {
            out.push_back(tbf.result());
            out.push_back(tb5.result());
            out.push_back(tpy.result());
        }
        out.push_back(tfx.result());
    }
    return out;
}

Results closed_form_vs_bisection(const VerifyOptions& o)
{
    Results out;
    std::mt19937_64 rng(o.seed + 11);
    for (const char* name : {"paper-example-gmep", "paper-example-ep", "affine-quadratic(0.5,0.25,linear:0.5,1)",
                             "affine-quadratic(1,1,sin,2)", "affine-quadratic(2,0.5,zero,1)"}) {
        const auto p = make_problem(name);
        const auto f = LegendreFunction::euclidean(p.dim());
        ResolventConfig cf, bi;
        cf.method = ResolventMethod::closed_form_affine_quadratic;
        bi.method = ResolventMethod::scalar_kkt_bisection;
        cf.fault_gain = o.resolvent_fault;
        Tracker t{std::string("equilibrium.closed_form_vs_bisection[") + name + "]", 1e-12};
        for (int s = 0; s < o.samples; ++s) {
            // include points outside C so the clamp branch is exercised
            Vector x = draw_in(rng, p.base);
            for (auto& c : x) c = 2.0 * c + 0.5;
            t.observe(distance(resolvent(f, p, x, cf), resolvent(f, p, x, bi)));
        }
        out.push_back(t.result());
    }
    return out;
}

Results reduction(const VerifyOptions& o)
{
    std::mt19937_64 rng(o.seed + 12);
    Tracker t{"equilibrium.reduction", 1e-12};
    const auto f1 = LegendreFunction::euclidean(1);
    const auto f2 = LegendreFunction::euclidean(2);
    const auto gmep = make_problem("paper-example-gmep").as_ep();
    const auto ep = make_problem("paper-example-ep");
    const auto aq = make_problem("affine-quadratic(1,1,sin,2)").as_ep();
    const auto aq_ep = make_problem("affine-quadratic(1,0,zero,2)");
    ResolventConfig bi;
    bi.method = ResolventMethod::scalar_kkt_bisection;
    for (int s = 0; s < o.samples; ++s) {
        const Vector x = draw_in(rng, ep.base);
        t.observe(distance(resolvent(f1, gmep, x, bi), resolvent(f1, ep, x)));
        const Vector x2 = draw_in(rng, aq.base);
        t.observe(distance(resolvent(f2, aq, x2), resolvent(f2, aq_ep, x2, bi)));
        // the EP resolvent with Theta(x,y) = x(y - x) under f = x^2/2 is x/2
        t.observe(std::abs(resolvent(f1, ep, x)[0] - 0.5 * x[0]));
    }
    return {t.result()};
}

Results sampled_oracle(const VerifyOptions& o)
{
    std::mt19937_64 rng(o.seed + 13);
    const auto p = make_problem("paper-example-gmep");
    const auto f = LegendreFunction::euclidean(1);
    ResolventConfig sampled;
    sampled.method = ResolventMethod::sampled_vi_check_only;
    const double spacing = 1.5 / (sampled.probe_count - 1);
    Tracker t{"equilibrium.sampled_oracle[paper-example-gmep]", spacing};
    for (int s = 0; s < 5; ++s) {
        const Vector x = draw_in(rng, p.base);
        t.observe(distance(resolvent(f, p, x, sampled), resolvent(f, p, x)));
    }
    return {t.result()};
}

// ---------------------------------------------------------------- solver

Results schedule_and_mapping(const VerifyOptions& o)
{
    Results out;
    Tracker ts{"solver.schedule", 0.0};
    const Schedule sched;
    try {
        sched.validate(10'000'000);
        ts.observe(sched.asymptotics_ok() ? 0.0 : 1.0);
    } catch (const DomainError& e) {
        ts.observe(1.0);
        ts.detail = e.what();
    }
    out.push_back(ts.result());

    const auto map = FixedPointMap::linear_contraction(2.0 / 3.0);
    const auto c = BaseSet::interval(-1.5, 0.0);
    Tracker tm{"solver.mapping", 1e-12};
    tm.observe(map.maps_into(c, o.samples) ? 0.0 : 1.0);
    for (const auto& f : {LegendreFunction::euclidean(1), LegendreFunction::scalar_quartic(),
                          LegendreFunction::scalar_power(3.0)})
        tm.observe(map.quasi_nonexpansive_worst(f, c, o.samples));
    out.push_back(tm.result());
    return out;
}

Results short_runs(const VerifyOptions& o)
{
    Results out;
    struct Case {
        std::string problem;
        LegendreFunction f;
        Variant variant;
        Vector x0;
        std::int64_t iters;
    };
    const std::vector<Case> cases = {
        {"paper-example-gmep", LegendreFunction::euclidean(1), Variant::gmep, make_vector({-1.0}), 20000},
        {"paper-example-gmep", LegendreFunction::euclidean(1), Variant::ep, make_vector({-1.5}), 20000},
        {"paper-example-gmep", LegendreFunction::scalar_quartic(), Variant::gmep, make_vector({-1.0}), 5000},
        {"paper-example-gmep", LegendreFunction::scalar_power(3.0), Variant::ep, make_vector({-0.5}), 5000},
        {"affine-quadratic(1,1,sin,2)", LegendreFunction::euclidean(2), Variant::gmep, make_vector({-1.0, -0.5}), 40},
    };
    for (const auto& c : cases) {
        const std::string name = "solver.short_run[" + c.problem + "/" + c.f.tag() + "/" + to_string(c.variant) + "]";
        Tracker t{name, 1e-10};
        try {
            SolverConfig sc;
            sc.variant = c.variant;
            sc.max_iter = c.iters;
            sc.trace_every = std::max<std::int64_t>(1, c.iters / 200);
            sc.check_invariants_every = 1;
            sc.resolvent.fault_gain = o.resolvent_fault;
            const HybridSolver solver(c.f, make_problem(c.problem), FixedPointMap{}, Schedule{}, sc);
            const RunResult r = solver.run(c.x0);
            const auto& q = *solver.solution();
            t.observe(check_monotone_df(r.trace, bregman_distance(c.f, q, c.x0)) ? 0.0 : 1.0);
            t.observe(cauchy_worst(c.f, r.trace, c.x0));
            // incremental regions against a from-scratch rebuild of the same cuts
            sc.region.record_cuts = true;
            const HybridSolver recorder(c.f, make_problem(c.problem), FixedPointMap{}, Schedule{}, sc);
            IterationState s = recorder.initial_state(c.x0);
            for (int k = 0; k < 50; ++k) recorder.advance(s, c.x0);
            Region rebuilt(recorder.problem().base);
            for (const auto& h : s.region_c.cuts()) rebuilt.add_cut(h);
            for (const auto& h : s.region_q.cuts()) rebuilt.add_cut(h);
            t.observe(distance(bregman_project(c.f, rebuilt, c.x0), s.x), 1e-12);
            t.samples = static_cast<int>(r.invariant_checks);
        } catch (const std::exception& e) {
            t.failed = true;
            t.detail = e.what();
        }
        out.push_back(t.result());
    }
    return out;
}

}  // namespace

const std::vector<PropertyCheck>& property_registry()
{
    static const std::vector<PropertyCheck> reg = {
        {"bregman.nonnegativity", "D_f >= 0, zero exactly on coincident points", nonnegativity},
        {"bregman.gradient_roundtrip", "grad f* inverts grad f; closed form matches bisection", gradient_roundtrip},
        {"bregman.fenchel_equality", "f(x) + f*(grad f(x)) = <grad f(x), x>", fenchel_equality},
        {"bregman.three_four_point", "three- and four-point identities", three_four_point},
        {"bregman.v_identity", "V_f identity and the subdifferential inequality", v_identity_and_subdifferential},
        {"bregman.convex_combination", "D_f(z, combine_dual) <= sum t_i D_f(z, x_i)", convex_combination},
        {"bregman.sequential_consistency", "small D_f forces small distance on bounded sets", sequential_consistency},
        {"region.fold_exactness", "folded 1-D bounds equal cut-by-cut membership", fold_exactness},
        {"region.projection_1d", "1-D projection optimality, VI, Pythagoras, idempotence", projection_1d},
        {"region.projection_multidim", "Dykstra and Bregman cyclic projection in 2-D", projection_multidim},
        {"equilibrium.structure", "(A1), (A2), monotone Psi, convex phi", structure},
        {"equilibrium.resolvent", "resolvent VI, BFNE, four-term, Pythagoras, fixed point", resolvent_suite},
        {"equilibrium.closed_form_vs_bisection", "closed form agrees with KKT bisection", closed_form_vs_bisection},
        {"equilibrium.reduction", "phi = Psi = 0 reduces to the bare EP resolvent", reduction},
        {"equilibrium.sampled_oracle", "grid-search resolvent agrees to grid spacing", sampled_oracle},
        {"solver.schedule_mapping", "schedule validity and quasi-nonexpansive T", schedule_and_mapping},
        {"solver.short_runs", "runtime invariants on short hybrid runs", short_runs},
    };
    return reg;
}

std::vector<PropertyResult> run_properties(const std::vector<std::string>& names, bool select_all,
                                           const VerifyOptions& opts)
{
    std::vector<PropertyResult> out;
    for (const auto& check : property_registry()) {
        const bool chosen = select_all || std::find(names.begin(), names.end(), check.name) != names.end();
        if (!chosen) continue;
        try {
            auto res = check.run(opts);
            out.insert(out.end(), res.begin(), res.end());
        } catch (const std::exception& e) {
            out.push_back({check.name, 0, 0.0, 0.0, false, std::string("exception: ") + e.what()});
        }
    }
    for (const auto& n : names) {
        const auto& reg = property_registry();
        if (std::none_of(reg.begin(), reg.end(), [&](const PropertyCheck& c) { return c.name == n; }))
            throw ConfigError("unknown property '" + n + "'");
    }
    return out;
}

void write_report(std::ostream& os, const std::vector<PropertyResult>& results)
{
    char buf[512];
    for (const auto& r : results) {
        std::snprintf(buf, sizeof buf, "%-4s %-80s samples=%-7d worst=%-12.4e threshold=%.1e", r.pass ? "PASS" : "FAIL",
                      r.name.c_str(), r.samples, r.worst, r.threshold);
        os << buf;
        if (!r.detail.empty()) os << "  (" << r.detail << ")";
        os << '\n';
    }
}

}  // namespace bregman
