#include "bregman/legendre.hpp"

#include <charconv>
#include <cmath>

#include "bregman/errors.hpp"

namespace bregman {

namespace {

double signed_pow(double x, double e)
{
    const double m = std::pow(std::abs(x), e);
    return x < 0.0 ? -m : m;
}

}  // namespace

LegendreFunction::LegendreFunction(LegendreKind kind, std::size_t dim, double p)
    : kind_(kind), dim_(dim), p_(p), q_(p / (p - 1.0))
{
    if (dim == 0) throw DomainError("LegendreFunction: dimension must be positive");
}

LegendreFunction LegendreFunction::euclidean(std::size_t dim) { return {LegendreKind::euclidean, dim, 2.0}; }

LegendreFunction LegendreFunction::scalar_power(double p, std::size_t dim)
{
    if (!(p > 1.0) || !std::isfinite(p)) throw DomainError("scalar-power: exponent must satisfy p > 1");
    return {LegendreKind::scalar_power, dim, p};
}

LegendreFunction LegendreFunction::scalar_quartic(std::size_t dim) { return {LegendreKind::scalar_quartic, dim, 4.0}; }

LegendreFunction LegendreFunction::neg_entropy(std::size_t dim)
{
    // p is unused for the entropy; keep q finite.
    return {LegendreKind::neg_entropy, dim, 2.0};
}

LegendreFunction LegendreFunction::parse(std::string_view tag, std::size_t dim)
{
    if (tag == "euclidean") return euclidean(dim);
    if (tag == "scalar-quartic") return scalar_quartic(dim);
    if (tag == "neg-entropy") return neg_entropy(dim);
    constexpr std::string_view prefix = "scalar-power:";
    if (tag.starts_with(prefix)) {
        const auto rest = tag.substr(prefix.size());
        double p = 0.0;
        const auto [ptr, ec] = std::from_chars(rest.data(), rest.data() + rest.size(), p);
        if (ec != std::errc() || ptr != rest.data() + rest.size())
            throw DomainError("bad scalar-power exponent in '" + std::string(tag) + "'");
        return scalar_power(p, dim);
    }
    throw DomainError("unknown Legendre function '" + std::string(tag) + "'");
}

std::string LegendreFunction::tag() const
{
    switch (kind_) {
    case LegendreKind::euclidean: return "euclidean";
    case LegendreKind::scalar_quartic: return "scalar-quartic";
    case LegendreKind::neg_entropy: return "neg-entropy";
    case LegendreKind::scalar_power: {
        char buf[64];
        const auto res = std::to_chars(buf, buf + sizeof buf, p_);
        return "scalar-power:" + std::string(buf, res.ptr);
    }
    }
    return "?";
}

bool LegendreFunction::in_domain(const Vector& x) const
{
    if (x.size() != dim_) return false;
    for (double c : x) {
        if (!std::isfinite(c)) return false;
        if (kind_ == LegendreKind::neg_entropy && c < 0.0) return false;
    }
    return true;
}

bool LegendreFunction::in_interior(const Vector& x) const
{
    if (!in_domain(x)) return false;
    if (kind_ == LegendreKind::neg_entropy)
        for (double c : x)
            if (c <= 0.0) return false;
    return true;
}

bool LegendreFunction::in_conj_interior(const Vector& u) const
{
    if (u.size() != dim_) return false;
    for (double c : u)
        if (!std::isfinite(c)) return false;
    return true;
}

double LegendreFunction::value1(double x) const
{
    switch (kind_) {
    case LegendreKind::euclidean: return 0.5 * x * x;
    case LegendreKind::scalar_quartic: {
        const double x2 = x * x;
        return 0.25 * x2 * x2;
    }
    case LegendreKind::scalar_power: return std::pow(std::abs(x), p_) / p_;
    case LegendreKind::neg_entropy: return x == 0.0 ? 0.0 : x * std::log(x) - x;
    }
    return 0.0;
}

double LegendreFunction::grad1(double x) const
{
    switch (kind_) {
    case LegendreKind::euclidean: return x;
    case LegendreKind::scalar_quartic: return x * x * x;
    case LegendreKind::scalar_power: return signed_pow(x, p_ - 1.0);
    case LegendreKind::neg_entropy: return std::log(x);
    }
    return 0.0;
}

double LegendreFunction::conj_value1(double u) const
{
    switch (kind_) {
    case LegendreKind::euclidean: return 0.5 * u * u;
    case LegendreKind::scalar_quartic: return 0.75 * std::pow(std::abs(u), 4.0 / 3.0);
    case LegendreKind::scalar_power: return std::pow(std::abs(u), q_) / q_;
    case LegendreKind::neg_entropy: return std::exp(u);
    }
    return 0.0;
}

double LegendreFunction::grad_conj1(double u) const
{
    switch (kind_) {
    case LegendreKind::euclidean: return u;
    case LegendreKind::scalar_quartic: return std::cbrt(u);
    case LegendreKind::scalar_power: return signed_pow(u, q_ - 1.0);
    case LegendreKind::neg_entropy: return std::exp(u);
    }
    return 0.0;
}

void LegendreFunction::require_domain(const Vector& x, const char* what) const
{
    require_finite(x, what);
    if (!in_domain(x))
        throw DomainError(std::string(what) + ": " + to_string(x) + " is outside dom f for " + tag());
}

void LegendreFunction::require_interior(const Vector& x, const char* what) const
{
    require_finite(x, what);
    if (!in_interior(x))
        throw DomainError(std::string(what) + ": " + to_string(x) + " is outside int dom f for " + tag());
}

void LegendreFunction::require_conj_interior(const Vector& u, const char* what) const
{
    require_finite(u, what);
    if (!in_conj_interior(u))
        throw DomainError(std::string(what) + ": " + to_string(u) + " is outside int dom f* for " + tag());
}

double LegendreFunction::value(const Vector& x) const
{
    require_domain(x, "f");
    double s = 0.0;
    for (double c : x) s += value1(c);
    return s;
}

Vector LegendreFunction::grad(const Vector& x) const
{
    require_interior(x, "grad f");
    Vector g(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) g[i] = grad1(x[i]);
    return g;
}

double LegendreFunction::conj_value(const Vector& u) const
{
    require_conj_interior(u, "f*");
    double s = 0.0;
    for (double c : u) s += conj_value1(c);
    return s;
}

Vector LegendreFunction::grad_conj(const Vector& u) const
{
    require_conj_interior(u, "grad f*");
    Vector x(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) x[i] = grad_conj1(u[i]);
    return x;
}

Vector LegendreFunction::grad_conj_by_bisection(const Vector& u, double tol) const
{
    require_conj_interior(u, "grad f* (bisection)");
    Vector x(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) {
        const double target = u[i];
        double lo, hi;
        if (kind_ == LegendreKind::neg_entropy) {
            lo = 1.0;
            hi = 1.0;
            while (grad1(lo) > target) lo *= 0.5;
            while (grad1(hi) < target) hi *= 2.0;
        } else {
            lo = -1.0;
            hi = 1.0;
            while (grad1(lo) > target) lo *= 2.0;
            while (grad1(hi) < target) hi *= 2.0;
        }
        for (int it = 0; it < 400 && hi - lo > tol * (1.0 + std::abs(lo) + std::abs(hi)) * 0.5; ++it) {
            const double mid = 0.5 * (lo + hi);
            if (mid == lo || mid == hi) break;
            if (grad1(mid) < target) lo = mid;
            else hi = mid;
        }
        x[i] = 0.5 * (lo + hi);
    }
    return x;
}

}  // namespace bregman
