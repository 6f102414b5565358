#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "bregman/bregman.hpp"
#include "bregman/legendre.hpp"
#include "bregman/region.hpp"
#include "bregman/vector.hpp"

namespace bregman {

/// Theta(x, y) = a <x, y - x>, a >= 0. Monotone since
/// Theta(x,y) + Theta(y,x) = -a ||x - y||^2.
struct Bifunction {
    enum class Kind { zero, affine_quadratic };
    Kind kind = Kind::zero;
    double a = 0.0;

    static Bifunction zero() { return {}; }
    static Bifunction affine_quadratic(double a);

    double operator()(const Vector& x, const Vector& y) const;
    /// Gradient of y -> Theta(z, y) at y = z, coordinate i.
    double diag_derivative(double z) const { return kind == Kind::zero ? 0.0 : a * z; }
    bool is_zero() const { return kind == Kind::zero || a == 0.0; }

    friend bool operator==(const Bifunction&, const Bifunction&) = default;
};

/// phi(y) = c ||y||^2, c >= 0.
struct ConvexTerm {
    enum class Kind { zero, quadratic };
    Kind kind = Kind::zero;
    double c = 0.0;

    static ConvexTerm zero() { return {}; }
    static ConvexTerm quadratic(double c);

    double operator()(const Vector& y) const;
    double derivative(double y) const { return kind == Kind::zero ? 0.0 : 2.0 * c * y; }
    bool is_zero() const { return kind == Kind::zero || c == 0.0; }

    friend bool operator==(const ConvexTerm&, const ConvexTerm&) = default;
};

/// Coordinatewise monotone operator Psi: zero, sin (monotone on
/// [-pi/2, pi/2]^d) or k x with k >= 0.
struct MonotoneOperator {
    enum class Kind { zero, sin, linear };
    Kind kind = Kind::zero;
    double k = 0.0;

    static MonotoneOperator zero() { return {}; }
    static MonotoneOperator sine() { return {Kind::sin, 1.0}; }
    static MonotoneOperator linear(double k);

    double apply1(double x) const;
    Vector operator()(const Vector& x) const;
    bool is_zero() const { return kind == Kind::zero || (kind == Kind::linear && k == 0.0); }
    std::string tag() const;

    friend bool operator==(const MonotoneOperator&, const MonotoneOperator&) = default;
};

/// Find x in C with Theta(x,y) + <Psi x, y - x> + phi(y) >= phi(x) for all y in C.
/// Zero components give the reductions: EP (phi = Psi = 0), MEP (Psi = 0),
/// GEP (phi = 0), MVI (Theta = 0).
struct GmepProblem {
    std::string name;
    BaseSet base;
    Bifunction theta;
    ConvexTerm phi;
    MonotoneOperator psi;
    /// A point known to solve the problem, when one is registered.
    std::optional<Vector> known_solution;

    std::size_t dim() const { return base.dim(); }
    bool is_trivial() const { return theta.is_zero() && phi.is_zero() && psi.is_zero(); }
    /// Same Theta and C with phi = Psi = 0.
    GmepProblem as_ep() const;

    friend bool operator==(const GmepProblem&, const GmepProblem&) = default;
};

/// Registry lookup: "paper-example-gmep", "paper-example-ep", or
/// "affine-quadratic(a,c,psi,d)" where psi is zero|sin|linear:k. The
/// affine-quadratic family lives on the box [-3/2, 0]^d with solution 0.
GmepProblem make_problem(std::string_view spec);
/// Canonical spec string accepted by make_problem.
std::string problem_spec(const GmepProblem& p);

struct StructureReport {
    double a1_worst = 0.0;       ///< max |Theta(x,x)|
    double a2_worst = 0.0;       ///< max Theta(x,y) + Theta(y,x)
    double psi_worst = 0.0;      ///< max -<Psi x - Psi y, x - y>
    double phi_worst = 0.0;      ///< max phi((x+y)/2) - (phi(x)+phi(y))/2
    int samples = 0;
    bool ok(double tol = 1e-12) const;
};

/// Samples the structural conditions on pairs drawn from C.
StructureReport check_structure(const GmepProblem& p, int samples, std::uint64_t seed = 7);

enum class ResolventMethod { automatic, closed_form_affine_quadratic, scalar_kkt_bisection, sampled_vi_check_only };

struct ResolventConfig {
    ResolventMethod method = ResolventMethod::automatic;
    double inner_tol = 1e-14;
    int max_inner = 200;
    /// Grid size for the sampled method.
    int probe_count = 1000;
    /// Test hook: the output becomes z + fault_gain * x. Nonzero values break
    /// the resolvent on purpose.
    double fault_gain = 0.0;

    friend bool operator==(const ResolventConfig&, const ResolventConfig&) = default;
};

std::string to_string(ResolventMethod m);
ResolventMethod parse_resolvent_method(std::string_view s);

/// Deterministic probe points of C: a uniform grid (endpoints included) in
/// 1-D, a Halton sequence in d > 1. For the whole space, points are drawn
/// from the box center +- radius.
std::vector<Vector> probe_grid(const BaseSet& base, int count, const Vector* center = nullptr, double radius = 2.0);

/// max over probes y of phi(x) - Theta(x,y) - <Psi x, y - x> - phi(y).
/// Nonpositive at a solution.
double gmep_violation(const GmepProblem& p, const Vector& x, std::span<const Vector> probes);

/// The mixed resolvent Res(x): the z in C with
/// Theta(z,y) + phi(y) + <Psi x, y - z> + <grad f(z) - grad f(x), y - z> >= phi(z)
/// for all y in C. Psi is evaluated at the input x.
Vector resolvent(const LegendreFunction& f, const GmepProblem& p, const Vector& x, const ResolventConfig& cfg = {});

/// max over probes y of
/// phi(z) - Theta(z,y) - phi(y) - <Psi x, y - z> - <grad f(z) - grad f(x), y - z>.
double verify_resolvent(const LegendreFunction& f, const GmepProblem& p, const Vector& x, const Vector& z,
                        std::span<const Vector> probes);

/// <grad f(Tx) - grad f(Ty), Tx - Ty> - <grad f(x) - grad f(y), Tx - Ty>, T = Res.
double bfne_gap(const LegendreFunction& f, const GmepProblem& p, const ResolventConfig& cfg, const Vector& x,
                const Vector& y);

/// D(Tx,y) + D(Ty,x) - [D(Tx,Ty) + D(Ty,Tx) + D(Tx,x) + D(Ty,y)], T = Res.
double bfne_four_term_slack(const LegendreFunction& f, const GmepProblem& p, const ResolventConfig& cfg,
                            const Vector& x, const Vector& y);

/// D(p, Res x) + D(Res x, x) - D(p, x) for a fixed point p of Res.
double resolvent_pythagoras_gap(const LegendreFunction& f, const GmepProblem& prob, const ResolventConfig& cfg,
                                 const Vector& p, const Vector& x);

}  // namespace bregman
