#include "bregman/bregman.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "bregman/errors.hpp"

namespace bregman {

double bregman_distance(const LegendreFunction& f, const Vector& x, const Vector& y)
{
    f.require_domain(x, "bregman_distance(x)");
    f.require_interior(y, "bregman_distance(y)");
    double s = 0.0;
    // Coordinatewise sum avoids the large cancellation of f(x) - f(y) when
    // both points are far from the origin.
    for (std::size_t i = 0; i < x.size(); ++i)
        s += f.value1(x[i]) - f.value1(y[i]) - f.grad1(y[i]) * (x[i] - y[i]);
    return std::max(s, 0.0);
}

double v_fn(const LegendreFunction& f, const Vector& x, const Vector& ustar)
{
    f.require_domain(x, "v_fn(x)");
    f.require_conj_interior(ustar, "v_fn(u*)");
    return f.value(x) - dot(ustar, x) + f.conj_value(ustar);
}

Vector combine_dual(const LegendreFunction& f, std::span<const double> weights, std::span<const Vector> points)
{
    if (weights.size() != points.size() || weights.empty())
        throw DomainError("combine_dual: need one weight per point and at least one point");
    double sum = 0.0;
    for (double t : weights) {
        if (!(t > 0.0 && t <= 1.0)) throw DomainError("combine_dual: weights must lie in (0, 1]");
        sum += t;
    }
    if (std::abs(sum - 1.0) > 1e-12) throw DomainError("combine_dual: weights must sum to 1");
    if (points.size() == 1) {
        f.require_interior(points[0], "combine_dual");
        return points[0];
    }
    Vector acc = zeros(f.dim());
    for (std::size_t k = 0; k < points.size(); ++k) {
        const Vector g = f.grad(points[k]);
        for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += weights[k] * g[i];
    }
    return f.grad_conj(acc);
}

Vector combine_dual2(const LegendreFunction& f, double t, const Vector& a, const Vector& b)
{
    if (!(t >= 0.0 && t <= 1.0)) throw DomainError("combine_dual2: weight must lie in [0, 1]");
    f.require_interior(a, "combine_dual2(a)");
    f.require_interior(b, "combine_dual2(b)");
    if (f.kind() == LegendreKind::euclidean) {
        Vector r(a.size());
        for (std::size_t i = 0; i < a.size(); ++i) r[i] = t * a[i] + (1.0 - t) * b[i];
        return r;
    }
    Vector r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = f.grad_conj1(t * f.grad1(a[i]) + (1.0 - t) * f.grad1(b[i]));
    return r;
}

double three_point_residual(const LegendreFunction& f, const Vector& x, const Vector& y, const Vector& z)
{
    const double lhs = bregman_distance(f, x, y) + bregman_distance(f, y, z) - bregman_distance(f, x, z);
    const double rhs = dot(f.grad(z) - f.grad(y), x - y);
    return std::abs(lhs - rhs);
}

double four_point_residual(const LegendreFunction& f, const Vector& y, const Vector& w, const Vector& x,
                           const Vector& z)
{
    const double lhs = bregman_distance(f, y, x) - bregman_distance(f, y, z) - bregman_distance(f, w, x) +
                       bregman_distance(f, w, z);
    const double rhs = dot(f.grad(z) - f.grad(x), y - w);
    return std::abs(lhs - rhs);
}

double subdifferential_slack(const LegendreFunction& f, const Vector& x, const Vector& xstar, const Vector& ystar)
{
    const double lhs = v_fn(f, x, xstar) + dot(ystar, f.grad_conj(xstar) - x);
    return v_fn(f, x, xstar + ystar) - lhs;
}

double total_convexity_modulus(const LegendreFunction& f, const Vector& x, double t, int samples, std::uint64_t seed)
{
    f.require_interior(x, "total_convexity_modulus");
    if (!(t > 0.0) || !std::isfinite(t)) throw DomainError("total_convexity_modulus: t must be positive");
    const std::size_t d = x.size();
    double best = std::numeric_limits<double>::infinity();
    auto consider = [&](const Vector& y) {
        if (f.in_domain(y)) best = std::min(best, bregman_distance(f, y, x));
    };
    for (std::size_t i = 0; i < d; ++i) {
        for (double sgn : {-1.0, 1.0}) {
            Vector y = x;
            y[i] += sgn * t;
            consider(y);
        }
    }
    if (d > 1) {
        std::mt19937_64 rng(seed);
        std::normal_distribution<double> gauss;
        for (int s = 0; s < samples; ++s) {
            Vector dir(d);
            for (auto& c : dir) c = gauss(rng);
            const double n = norm(dir);
            if (n == 0.0) continue;
            consider(x + (t / n) * dir);
        }
    }
    return best;
}

}  // namespace bregman
