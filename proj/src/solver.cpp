#include "bregman/solver.hpp"

#include <algorithm>
#include <limits>
#include <cmath>
#include <cstdio>
#include <random>

#include "bregman/bregman.hpp"
#include "bregman/errors.hpp"

namespace bregman {

double Rule::operator()(std::int64_t n) const
{
    const double nn = static_cast<double>(n);
    switch (kind) {
    case Kind::harmonic: return 1.0 / (nn + offset);
    case Kind::shifted_harmonic: return cap - 1.0 / (nn + offset);
    case Kind::constant: return cap;
    }
    return 0.0;
}

std::string Rule::describe() const
{
    char buf[96];
    switch (kind) {
    case Kind::harmonic: std::snprintf(buf, sizeof buf, "1/(n+%g)", offset); break;
    case Kind::shifted_harmonic: std::snprintf(buf, sizeof buf, "%g-1/(n+%g)", cap, offset); break;
    case Kind::constant: std::snprintf(buf, sizeof buf, "%g", cap); break;
    }
    return buf;
}

void Schedule::validate(std::int64_t max_n) const
{
    for (std::int64_t n = 0; n <= max_n; ++n) {
        const double a = alpha(n), b = beta(n);
        if (!(a > 0.0 && a < 1.0) || !(b > 0.0 && b < 1.0)) {
            char buf[160];
            std::snprintf(buf, sizeof buf, "schedule invalid at n=%lld: alpha=%.17g beta=%.17g (both must lie in (0,1))",
                          static_cast<long long>(n), a, b);
            throw DomainError(buf);
        }
    }
}

bool Schedule::asymptotics_ok(std::int64_t prefix) const
{
    double prev = alpha(0);
    for (std::int64_t n = 1; n <= prefix; ++n) {
        const double a = alpha(n);
        if (a > prev) return false;
        prev = a;
        if (2 * n >= prefix && (1.0 - a) * beta(n) < 0.4) return false;
    }
    return prev < 1e-5;
}

FixedPointMap FixedPointMap::linear_contraction(double kappa)
{
    if (!(kappa > 0.0 && kappa < 1.0)) throw DomainError("linear contraction needs kappa in (0, 1)");
    return {kappa};
}

Vector FixedPointMap::operator()(const Vector& x) const { return kappa * x; }

namespace {

Vector draw_in(const BaseSet& c, std::mt19937_64& rng)
{
    Vector v(c.dim());
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double lo = std::isfinite(c.lo()[i]) ? c.lo()[i] : -2.0;
        const double hi = std::isfinite(c.hi()[i]) ? c.hi()[i] : 2.0;
        v[i] = std::uniform_real_distribution<double>(lo, hi)(rng);
    }
    return v;
}

}  // namespace

bool FixedPointMap::maps_into(const BaseSet& c, int samples, std::uint64_t seed) const
{
    std::mt19937_64 rng(seed);
    for (int s = 0; s < samples; ++s)
        if (!c.contains((*this)(draw_in(c, rng)))) return false;
    return true;
}

double FixedPointMap::quasi_nonexpansive_worst(const LegendreFunction& f, const BaseSet& c, int samples,
                                               std::uint64_t seed) const
{
    std::mt19937_64 rng(seed);
    const Vector p = fixed_point(c.dim());
    double worst = -std::numeric_limits<double>::infinity();
    for (int s = 0; s < samples; ++s) {
        const Vector x = draw_in(c, rng);
        if (!f.in_interior(x) || !f.in_interior((*this)(x))) continue;
        worst = std::max(worst, bregman_distance(f, p, (*this)(x)) - bregman_distance(f, p, x));
    }
    return worst;
}

std::string to_string(Variant v) { return v == Variant::gmep ? "gmep" : "ep"; }

Variant parse_variant(std::string_view s)
{
    if (s == "gmep") return Variant::gmep;
    if (s == "ep") return Variant::ep;
    throw ConfigError("unknown variant '" + std::string(s) + "' (expected gmep or ep)");
}

std::string to_string(RunStatus s) { return s == RunStatus::converged ? "converged" : "max_iter"; }

HybridSolver::HybridSolver(LegendreFunction f, GmepProblem problem, FixedPointMap map, Schedule schedule,
                           SolverConfig cfg)
    : f_(std::move(f)),
      problem_(cfg.variant == Variant::ep ? problem.as_ep() : std::move(problem)),
      map_(map),
      schedule_(schedule),
      cfg_(cfg)
{
    if (f_.dim() != problem_.dim())
        throw DomainError("HybridSolver: Legendre dimension does not match the problem dimension");
    if (!(cfg_.tol > 0.0)) throw DomainError("HybridSolver: tol must be positive");
    if (cfg_.max_iter < 0) throw DomainError("HybridSolver: max_iter must be nonnegative");
    if (problem_.known_solution) {
        const Vector& q = *problem_.known_solution;
        if (distance(map_(q), q) == 0.0 && f_.in_interior(q)) solution_ = q;
    }
}

IterationState HybridSolver::initial_state(const Vector& x0) const
{
    f_.require_interior(x0, "x0");
    if (!problem_.base.contains(x0)) throw DomainError("x0 = " + to_string(x0) + " is outside C = " + problem_.base.describe());
    IterationState s{0, x0, {}, {}, {}, Region(problem_.base, cfg_.region), Region(problem_.base, cfg_.region), 0.0};
    const double beta = schedule_.beta(0), alpha = schedule_.alpha(0);
    s.z = combine_dual2(f_, beta, map_(x0), x0);
    s.y = combine_dual2(f_, alpha, x0, s.z);
    s.u = resolvent(f_, problem_, s.y, cfg_.resolvent);
    // D_f(z, u0) <= D_f(z, x0); any alpha gives this cut when x_n = x0.
    s.region_c.add_cut(cut_from_distance_test(f_, s.u, x0, x0, 0.5));
    return s;
}

void HybridSolver::advance(IterationState& s, const Vector& x0) const
{
    const double alpha = schedule_.alpha(s.n), beta = schedule_.beta(s.n);
    s.z = combine_dual2(f_, beta, map_(s.x), s.x);
    s.y = combine_dual2(f_, alpha, x0, s.z);
    s.u = resolvent(f_, problem_, s.y, cfg_.resolvent);
    s.region_c.add_cut(cut_from_distance_test(f_, s.u, x0, s.x, alpha));
    s.region_q.add_cut(cut_from_bregman_vi(f_, x0, s.x));
    Vector next = bregman_project(f_, Region::intersect(s.region_c, s.region_q), x0, cfg_.projection);
    s.last_step = distance(next, s.x);
    s.x = std::move(next);
    ++s.n;
}

IterationState HybridSolver::step(IterationState state, const Vector& x0) const
{
    advance(state, x0);
    return state;
}

void HybridSolver::check_state(const IterationState& s) const
{
    const double tol = cfg_.invariant_tol;
    auto fail = [&](const std::string& what) {
        throw InvariantError("iteration " + std::to_string(s.n) + ": " + what + " (x_n = " + to_string(s.x) + ")");
    };
    if (!problem_.base.contains(s.x)) fail("x_n left the base set C");
    // x0 itself is generally outside C_0; x_n for n >= 1 is a projection onto C_n and Q_n.
    if (s.n > 0 && !s.region_c.contains(s.x, tol)) fail("x_n is not in C_n");
    if (s.n > 0 && !s.region_q.contains(s.x, tol)) fail("x_n is not in Q_n");
    if (solution_) {
        if (!s.region_c.contains(*solution_, tol)) fail("registered solution was cut from C_n");
        if (!s.region_q.contains(*solution_, tol)) fail("registered solution was cut from Q_n");
    }
}

TraceRecord HybridSolver::record(const IterationState& s, const Vector& x0) const
{
    TraceRecord r;
    r.n = s.n;
    r.x = s.x;
    r.step_norm = s.last_step;
    r.d_x0 = bregman_distance(f_, s.x, x0);
    if (solution_) r.d_sol = bregman_distance(f_, *solution_, s.x);
    r.fp_residual = distance(s.x, map_(s.x));
    return r;
}

RunResult HybridSolver::run(const Vector& x0) const
{
    schedule_.validate(cfg_.max_iter);
    RunResult res;
    IterationState s = initial_state(x0);
    const double bound =
        solution_ ? bregman_distance(f_, *solution_, x0) : std::numeric_limits<double>::infinity();
    double last_checked_d = 0.0;

    auto check = [&]() {
        check_state(s);
        const double d = bregman_distance(f_, s.x, x0);
        if (d < last_checked_d - 1e-12)
            throw InvariantError("iteration " + std::to_string(s.n) + ": D_f(x_n, x0) decreased");
        if (d > bound + cfg_.invariant_tol)
            throw InvariantError("iteration " + std::to_string(s.n) + ": D_f(x_n, x0) exceeds D_f(q, x0)");
        last_checked_d = d;
        ++res.invariant_checks;
    };

    const std::int64_t every_trace = std::max<std::int64_t>(cfg_.trace_every, 1);
    const std::int64_t every_check = cfg_.check_invariants_every;
    res.trace.push_back(record(s, x0));
    if (every_check > 0) check();

    res.status = RunStatus::max_iter;
    while (s.n < cfg_.max_iter) {
        advance(s, x0);
        const bool done = s.last_step < cfg_.tol;
        if (every_check > 0 && (s.n % every_check == 0 || done)) check();
        if (s.n % every_trace == 0 || done || s.n == cfg_.max_iter) res.trace.push_back(record(s, x0));
        if (done) {
            res.status = RunStatus::converged;
            break;
        }
    }
    if (res.trace.back().n != s.n) res.trace.push_back(record(s, x0));
    res.result = s.x;
    res.iterations = s.n;
    res.final_step = s.last_step;
    res.final_fp_residual = distance(s.x, map_(s.x));
    return res;
}

bool check_monotone_df(std::span<const TraceRecord> trace, std::optional<double> bound)
{
    for (std::size_t i = 0; i < trace.size(); ++i) {
        if (i > 0 && trace[i].d_x0 < trace[i - 1].d_x0 - 1e-12) return false;
        if (bound && trace[i].d_x0 > *bound + 1e-10) return false;
    }
    return true;
}

double cauchy_worst(const LegendreFunction& f, std::span<const TraceRecord> trace, const Vector& x0)
{
    double worst = -std::numeric_limits<double>::infinity();
    for (std::size_t n = 0; n < trace.size(); ++n)
        for (std::size_t m = n + 1; m < trace.size(); ++m) {
            const double lhs = bregman_distance(f, trace[m].x, trace[n].x);
            const double rhs = bregman_distance(f, trace[m].x, x0) - bregman_distance(f, trace[n].x, x0);
            worst = std::max(worst, lhs - rhs);
        }
    return worst;
}

}  // namespace bregman
