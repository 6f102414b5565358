#pragma once

#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "bregman/legendre.hpp"
#include "bregman/vector.hpp"

namespace bregman {

/// { z : <a, z> <= b }. A zero normal with b >= 0 is the whole space; a zero
/// normal with b < 0 is empty and rejected at construction.
struct Halfspace {
    Vector a;
    double b = 0.0;

    Halfspace() = default;
    Halfspace(Vector normal, double offset);

    static Halfspace full_space(std::size_t dim) { return Halfspace(zeros(dim), 0.0); }

    bool is_full_space() const;
    /// <a, z> - b; positive means violated.
    double violation(const Vector& z) const;
    bool satisfied(const Vector& z, double tol = 0.0) const { return violation(z) <= tol; }

    friend bool operator==(const Halfspace&, const Halfspace&) = default;
};

/// The base convex set C: a closed interval, a box, or all of R^d.
class BaseSet {
public:
    enum class Kind { interval, box, whole_space };

    static BaseSet interval(double lo, double hi);
    static BaseSet box(Vector lo, Vector hi);
    static BaseSet whole_space(std::size_t dim);

    Kind kind() const noexcept { return kind_; }
    std::size_t dim() const noexcept { return dim_; }
    bool bounded() const noexcept { return kind_ != Kind::whole_space; }
    /// Bounds per axis; +-infinity for the whole space.
    const Vector& lo() const noexcept { return lo_; }
    const Vector& hi() const noexcept { return hi_; }

    /// Exact membership (closed bounds).
    bool contains(const Vector& z) const;
    /// Coordinatewise clamp onto the box (the Euclidean projection).
    Vector clamp(const Vector& z) const;

    std::string describe() const;

    friend bool operator==(const BaseSet&, const BaseSet&) = default;

private:
    BaseSet(Kind kind, Vector lo, Vector hi);

    Kind kind_;
    std::size_t dim_;
    Vector lo_;
    Vector hi_;
};

struct RegionOptions {
    /// Keep every cut in 1-D as well as the folded bounds. Only needed for
    /// diagnostics and from-scratch recomputation.
    bool record_cuts = false;
    /// d > 1: drop a new cut that holds on the whole bounding box.
    bool prune_redundant = true;
    /// d > 1: hard cap on stored cuts.
    std::size_t max_cuts = 100000;

    friend bool operator==(const RegionOptions&, const RegionOptions&) = default;
};

/// A base set intersected with accumulated halfspace cuts.
///
/// In 1-D every cut is folded into running interval bounds, so memory stays
/// O(1) over arbitrarily long runs and the bounds are the exact intersection.
/// In d > 1 the cuts are stored.
class Region {
public:
    explicit Region(BaseSet base, RegionOptions opts = {});

    const BaseSet& base() const noexcept { return base_; }
    const RegionOptions& options() const noexcept { return opts_; }
    std::size_t dim() const noexcept { return base_.dim(); }
    bool folded() const noexcept { return base_.dim() == 1; }
    /// Folded bounds (1-D only).
    double lo() const noexcept { return lo_; }
    double hi() const noexcept { return hi_; }
    const std::vector<Halfspace>& cuts() const noexcept { return cuts_; }
    std::size_t cut_count() const noexcept { return cut_count_; }

    /// Intersects with h. Throws InfeasibleRegionError if a 1-D fold becomes
    /// empty, DomainError on overflow of max_cuts.
    void add_cut(const Halfspace& h);
    Region with_cut(const Halfspace& h) const;

    /// Intersection of two regions over the same base set.
    static Region intersect(const Region& a, const Region& b);

    /// z in base and every cut holds to within tol. In 1-D the check is made
    /// on the folded bounds with tol measured on the z scale.
    bool contains(const Vector& z, double tol = 0.0) const;
    /// Cut-by-cut membership using the recorded cuts only.
    bool satisfies_cuts(const Vector& z, double tol = 0.0) const;
    /// Largest cut violation <a,z> - b over recorded cuts (0 if none).
    double max_violation(const Vector& z) const;

    friend bool operator==(const Region&, const Region&) = default;

private:
    BaseSet base_;
    RegionOptions opts_;
    std::vector<Halfspace> cuts_;
    std::size_t cut_count_ = 0;
    double lo_ = -std::numeric_limits<double>::infinity();
    double hi_ = std::numeric_limits<double>::infinity();
};

/// { z : D_f(z, u) <= alpha D_f(z, x0) + (1 - alpha) D_f(z, xn) } written as a
/// halfspace; the f(z) terms cancel because the coefficients sum to one.
Halfspace cut_from_distance_test(const LegendreFunction& f, const Vector& u, const Vector& x0, const Vector& xn,
                                 double alpha);

/// { z : <grad f(x0) - grad f(xn), z - xn> <= 0 }.
Halfspace cut_from_bregman_vi(const LegendreFunction& f, const Vector& x0, const Vector& xn);

struct ProjectionOptions {
    double tol = 1e-12;         ///< iterate change per full cycle
    int max_cycles = 100000;
    double feas_tol = 1e-10;    ///< accepted residual cut violation (relative to ||a||)
};

/// Bregman projection of x onto the region: the unique minimizer of
/// D_f(., x) over it.
///
/// 1-D: exact clamp to the folded interval. d > 1, euclidean f: Dykstra's
/// cyclic projection over the box and the cuts. d > 1, other f: Bregman's
/// cyclic method with one nonnegative dual multiplier per halfspace
/// (approximate to `tol`).
Vector bregman_project(const LegendreFunction& f, const Region& region, const Vector& x,
                       const ProjectionOptions& opts = {});

/// Closed-form Euclidean projection onto one halfspace:
/// x - max(0, (<a,x> - b) / ||a||^2) a.
Vector project_halfspace_euclidean(const Halfspace& h, const Vector& x);

}  // namespace bregman
