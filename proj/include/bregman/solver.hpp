#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "bregman/equilibrium.hpp"
#include "bregman/legendre.hpp"
#include "bregman/region.hpp"
#include "bregman/vector.hpp"

namespace bregman {

/// Closed-form parameter sequence.
struct Rule {
    enum class Kind {
        harmonic,          ///< 1 / (n + offset)
        shifted_harmonic,  ///< cap - 1 / (n + offset)
        constant,          ///< cap
    };
    Kind kind = Kind::harmonic;
    double cap = 0.0;
    double offset = 1.0;

    static Rule harmonic(double offset) { return {Kind::harmonic, 0.0, offset}; }
    static Rule shifted_harmonic(double cap, double offset) { return {Kind::shifted_harmonic, cap, offset}; }
    static Rule constant(double value) { return {Kind::constant, value, 0.0}; }

    double operator()(std::int64_t n) const;
    std::string describe() const;

    friend bool operator==(const Rule&, const Rule&) = default;
};

/// alpha_n and beta_n. Defaults: alpha_n = 1/(n+3), beta_n = 0.99 - 1/(n+2).
struct Schedule {
    Rule alpha = Rule::harmonic(3.0);
    Rule beta = Rule::shifted_harmonic(0.99, 2.0);

    /// Throws DomainError unless alpha_n, beta_n lie in (0, 1) for 0 <= n <= max_n.
    void validate(std::int64_t max_n) const;
    /// Finite-prefix proxy for alpha_n -> 0 and liminf (1 - alpha_n) beta_n > 0:
    /// alpha nonincreasing on [0, prefix] with alpha_prefix < 1e-5, and
    /// (1 - alpha_n) beta_n >= 0.4 on the second half of the prefix.
    bool asymptotics_ok(std::int64_t prefix = 1'000'000) const;

    friend bool operator==(const Schedule&, const Schedule&) = default;
};

/// The mapping T whose fixed points are sought. The registered rule is
/// T(x) = kappa x with kappa in (0, 1); its only fixed point is 0.
struct FixedPointMap {
    double kappa = 2.0 / 3.0;

    static FixedPointMap linear_contraction(double kappa);

    Vector operator()(const Vector& x) const;
    Vector fixed_point(std::size_t dim) const { return zeros(dim); }
    /// Sampled check that T maps C into C.
    bool maps_into(const BaseSet& c, int samples, std::uint64_t seed = 11) const;
    /// Sampled worst D_f(p, Tx) - D_f(p, x) at the fixed point p.
    double quasi_nonexpansive_worst(const LegendreFunction& f, const BaseSet& c, int samples,
                                    std::uint64_t seed = 13) const;

    friend bool operator==(const FixedPointMap&, const FixedPointMap&) = default;
};

enum class Variant { gmep, ep };
std::string to_string(Variant v);
Variant parse_variant(std::string_view s);

struct IterationState {
    std::int64_t n = 0;
    Vector x;  ///< x_n
    Vector z;  ///< z_{n-1} (last computed)
    Vector y;  ///< y_{n-1}
    Vector u;  ///< u_{n-1}
    Region region_c;
    Region region_q;
    double last_step = 0.0;  ///< ||x_n - x_{n-1}||
};

struct TraceRecord {
    std::int64_t n = 0;
    Vector x;
    double step_norm = 0.0;
    double d_x0 = 0.0;                ///< D_f(x_n, x0)
    std::optional<double> d_sol;      ///< D_f(q, x_n) for the registered solution q
    double fp_residual = 0.0;         ///< ||x_n - T x_n||
};

struct SolverConfig {
    double tol = 1e-10;
    std::int64_t max_iter = 10'000'000;
    Variant variant = Variant::gmep;
    std::int64_t trace_every = 10'000;
    std::int64_t check_invariants_every = 10'000;
    double invariant_tol = 1e-10;
    ResolventConfig resolvent;
    ProjectionOptions projection;
    RegionOptions region;
};

enum class RunStatus { converged, max_iter };
std::string to_string(RunStatus s);

struct RunResult {
    Vector result;
    std::int64_t iterations = 0;
    RunStatus status = RunStatus::max_iter;
    double final_step = 0.0;
    double final_fp_residual = 0.0;
    std::int64_t invariant_checks = 0;
    std::vector<TraceRecord> trace;
};

/// Hybrid shrinking-projection iteration for a common point of F(T) and the
/// solution set of a GMEP:
///
///   z_n     = grad f*(beta_n grad f(T x_n) + (1 - beta_n) grad f(x_n))
///   y_n     = grad f*(alpha_n grad f(x0) + (1 - alpha_n) grad f(z_n))
///   u_n     = Res(y_n)
///   C_{n+1} = C_n cut by D_f(z,u_n) <= alpha_n D_f(z,x0) + (1-alpha_n) D_f(z,x_n)
///   Q_{n+1} = Q_n cut by <grad f(x0) - grad f(x_n), z - x_n> <= 0
///   x_{n+1} = Bregman projection of x0 onto C_{n+1} and Q_{n+1}
///
/// starting from Q_0 = C and C_0 = { z in C : D_f(z, u_0) <= D_f(z, x0) }.
/// The ep variant runs the same engine with phi = Psi = 0.
class HybridSolver {
public:
    HybridSolver(LegendreFunction f, GmepProblem problem, FixedPointMap map, Schedule schedule, SolverConfig cfg = {});

    const LegendreFunction& legendre() const noexcept { return f_; }
    /// The problem actually iterated (phi and Psi zeroed for the ep variant).
    const GmepProblem& problem() const noexcept { return problem_; }
    const SolverConfig& config() const noexcept { return cfg_; }
    /// Registered common solution q (fixed point of T that solves the
    /// problem), if any.
    const std::optional<Vector>& solution() const noexcept { return solution_; }

    IterationState initial_state(const Vector& x0) const;
    /// One full iteration n -> n+1.
    IterationState step(IterationState state, const Vector& x0) const;
    void advance(IterationState& state, const Vector& x0) const;

    RunResult run(const Vector& x0) const;

    /// Throws InvariantError if x_n (n >= 1) is not in C_n, Q_n and C, or the
    /// registered solution has been cut away.
    void check_state(const IterationState& state) const;

private:
    TraceRecord record(const IterationState& s, const Vector& x0) const;

    LegendreFunction f_;
    GmepProblem problem_;
    FixedPointMap map_;
    Schedule schedule_;
    SolverConfig cfg_;
    std::optional<Vector> solution_;
};

/// d_x0 nondecreasing along the trace within 1e-12 and, when given, bounded
/// by `bound` + 1e-10.
bool check_monotone_df(std::span<const TraceRecord> trace, std::optional<double> bound = std::nullopt);

/// Worst D_f(x_m, x_n) - (D_f(x_m, x0) - D_f(x_n, x0)) over trace pairs m > n.
double cauchy_worst(const LegendreFunction& f, std::span<const TraceRecord> trace, const Vector& x0);

}  // namespace bregman
