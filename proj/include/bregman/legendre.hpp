#pragma once

#include <cstddef>
#include <string>
#include <string_view>

#include "bregman/vector.hpp"

namespace bregman {

enum class LegendreKind {
    euclidean,     ///< f(x) = ||x||^2 / 2
    scalar_power,  ///< f(x) = sum |x_i|^p / p, p > 1
    scalar_quartic,///< f(x) = sum x_i^4 / 4
    neg_entropy,   ///< f(x) = sum x_i log x_i - x_i on the positive orthant
};

/// A separable Legendre function on R^d together with its Fenchel conjugate.
///
/// Every instance is a sum of identical one-dimensional terms, so the
/// gradient is a coordinatewise strictly increasing map and its inverse (the
/// conjugate gradient) can always be recovered by a scalar root-find. The
/// closed forms are used on the hot path; `grad_conj_by_bisection` exists to
/// cross-check them.
class LegendreFunction {
public:
    static LegendreFunction euclidean(std::size_t dim);
    static LegendreFunction scalar_power(double p, std::size_t dim = 1);
    static LegendreFunction scalar_quartic(std::size_t dim = 1);
    static LegendreFunction neg_entropy(std::size_t dim);

    /// Parses "euclidean", "scalar-power:<p>", "scalar-quartic", "neg-entropy".
    static LegendreFunction parse(std::string_view tag, std::size_t dim);

    LegendreKind kind() const noexcept { return kind_; }
    std::size_t dim() const noexcept { return dim_; }
    /// Exponent p for scalar-power (4 for quartic, 2 for euclidean).
    double exponent() const noexcept { return p_; }
    /// Inverse of `parse`.
    std::string tag() const;

    /// x in dom f (closed orthant for neg-entropy).
    bool in_domain(const Vector& x) const;
    /// x in int dom f.
    bool in_interior(const Vector& x) const;
    /// u in int dom f*. Every registered conjugate is finite on all of R^d.
    bool in_conj_interior(const Vector& u) const;

    double value(const Vector& x) const;
    Vector grad(const Vector& x) const;
    double conj_value(const Vector& u) const;
    Vector grad_conj(const Vector& u) const;

    /// Coordinatewise monotone bisection on grad(x)_i = u_i, with bracket
    /// expansion and tolerance `tol` on the bracket width.
    Vector grad_conj_by_bisection(const Vector& u, double tol = 1e-14) const;

    /// Scalar pieces of the separable sum.
    double value1(double x) const;
    double grad1(double x) const;
    double conj_value1(double u) const;
    double grad_conj1(double u) const;

    /// Throws DomainError unless x is finite, has dimension dim(), and lies in
    /// the requested part of the domain.
    void require_domain(const Vector& x, const char* what) const;
    void require_interior(const Vector& x, const char* what) const;
    void require_conj_interior(const Vector& u, const char* what) const;

    friend bool operator==(const LegendreFunction&, const LegendreFunction&) = default;

private:
    LegendreFunction(LegendreKind kind, std::size_t dim, double p);

    LegendreKind kind_;
    std::size_t dim_;
    double p_;
    double q_;  // conjugate exponent p / (p - 1)
};

}  // namespace bregman
