#pragma once

#include <cstdint>
#include <span>

#include "bregman/legendre.hpp"
#include "bregman/vector.hpp"

namespace bregman {

/// Default absolute/relative tolerance for identity and property checks.
inline constexpr double kIdentityTol = 1e-9;

/// D_f(x, y) = f(x) - f(y) - <grad f(y), x - y>. Requires x in dom f and y in
/// int dom f. Tiny negative values from cancellation are clamped to zero.
double bregman_distance(const LegendreFunction& f, const Vector& x, const Vector& y);

/// V_f(x, u*) = f(x) - <u*, x> + f*(u*), which equals D_f(x, grad f*(u*)).
double v_fn(const LegendreFunction& f, const Vector& x, const Vector& ustar);

/// grad f*( sum_i t_i grad f(x_i) ). Weights must lie in (0, 1] and sum to one
/// within 1e-12; a single weight of exactly 1 is the identity.
Vector combine_dual(const LegendreFunction& f, std::span<const double> weights, std::span<const Vector> points);

/// Two-point special case used on the iteration hot path:
/// grad f*( t grad f(a) + (1 - t) grad f(b) ).
Vector combine_dual2(const LegendreFunction& f, double t, const Vector& a, const Vector& b);

/// |D(x,y) + D(y,z) - D(x,z) - <grad f(z) - grad f(y), x - y>|.
double three_point_residual(const LegendreFunction& f, const Vector& x, const Vector& y, const Vector& z);

/// |D(y,x) - D(y,z) - D(w,x) + D(w,z) - <grad f(z) - grad f(x), y - w>|.
double four_point_residual(const LegendreFunction& f, const Vector& y, const Vector& w, const Vector& x,
                           const Vector& z);

/// V(x, x* + y*) - V(x, x*) - <y*, grad f*(x*) - x>. Nonnegative by the
/// subdifferential inequality for f*.
double subdifferential_slack(const LegendreFunction& f, const Vector& x, const Vector& xstar, const Vector& ystar);

/// Sampled upper estimate of the modulus of total convexity
/// nu_f(x, t) = inf { D_f(y, x) : ||y - x|| = t }.
///
/// In 1-D the sphere is the two points x +- t and the value is exact. In d > 1
/// the 2d axis points plus `samples` uniformly random sphere points are used.
/// Sphere points outside dom f are skipped.
double total_convexity_modulus(const LegendreFunction& f, const Vector& x, double t, int samples,
                               std::uint64_t seed = 0x5eed);

}  // namespace bregman
