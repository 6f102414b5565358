#include "bregman/region.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "bregman/errors.hpp"

namespace bregman {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kEps = std::numeric_limits<double>::epsilon();

// <grad f(y), y> - f(y), i.e. f*(grad f(y)) by the Fenchel equality.
double legendre_offset(const LegendreFunction& f, const Vector& y)
{
    double s = 0.0;
    for (double c : y) s += f.grad1(c) * c - f.value1(c);
    return s;
}

// Cuts whose normal is lost in rounding are treated as the whole space; a
// clearly negative offset with such a normal means the set is empty.
Halfspace settle_degenerate(Vector a, double b, double a_scale, double b_scale)
{
    if (norm(a) > 64.0 * kEps * a_scale) return Halfspace(std::move(a), b);
    if (b < -64.0 * kEps * (1.0 + b_scale))
        throw InfeasibleRegionError("degenerate cut with zero normal and negative offset", -kInf, b);
    return Halfspace::full_space(a.size());
}

}  // namespace

Halfspace::Halfspace(Vector normal, double offset) : a(std::move(normal)), b(offset)
{
    require_finite(a, "Halfspace normal");
    if (!std::isfinite(b)) throw DomainError("Halfspace: non-finite offset");
    if (b < 0.0 && is_full_space())
        throw InfeasibleRegionError("Halfspace with zero normal and negative offset is empty", -kInf, b);
}

bool Halfspace::is_full_space() const
{
    return std::all_of(a.begin(), a.end(), [](double c) { return c == 0.0; });
}

double Halfspace::violation(const Vector& z) const { return dot(a, z) - b; }

BaseSet::BaseSet(Kind kind, Vector lo, Vector hi) : kind_(kind), dim_(lo.size()), lo_(std::move(lo)), hi_(std::move(hi))
{
    if (dim_ == 0 || lo_.size() != hi_.size()) throw DomainError("BaseSet: bounds must be nonempty and of equal size");
    for (std::size_t i = 0; i < dim_; ++i) {
        if (std::isnan(lo_[i]) || std::isnan(hi_[i])) throw DomainError("BaseSet: NaN bound");
        if (lo_[i] > hi_[i]) throw DomainError("BaseSet: lo > hi on axis " + std::to_string(i));
    }
}

BaseSet BaseSet::interval(double lo, double hi)
{
    if (!std::isfinite(lo) || !std::isfinite(hi)) throw DomainError("BaseSet::interval: bounds must be finite");
    return BaseSet(Kind::interval, make_vector({lo}), make_vector({hi}));
}

BaseSet BaseSet::box(Vector lo, Vector hi)
{
    for (double c : lo)
        if (!std::isfinite(c)) throw DomainError("BaseSet::box: bounds must be finite");
    for (double c : hi)
        if (!std::isfinite(c)) throw DomainError("BaseSet::box: bounds must be finite");
    const Kind k = lo.size() == 1 ? Kind::interval : Kind::box;
    return BaseSet(k, std::move(lo), std::move(hi));
}

BaseSet BaseSet::whole_space(std::size_t dim) { return BaseSet(Kind::whole_space, Vector(dim, -kInf), Vector(dim, kInf)); }

bool BaseSet::contains(const Vector& z) const
{
    if (z.size() != dim_) return false;
    for (std::size_t i = 0; i < dim_; ++i)
        if (!(z[i] >= lo_[i] && z[i] <= hi_[i])) return false;
    return true;
}

Vector BaseSet::clamp(const Vector& z) const
{
    require_same_dim(z, lo_, "BaseSet::clamp");
    Vector r(z.size());
    for (std::size_t i = 0; i < dim_; ++i) r[i] = std::clamp(z[i], lo_[i], hi_[i]);
    return r;
}

std::string BaseSet::describe() const
{
    if (kind_ == Kind::whole_space) return "R^" + std::to_string(dim_);
    std::string s;
    char buf[80];
    for (std::size_t i = 0; i < dim_; ++i) {
        std::snprintf(buf, sizeof buf, "%s[%.17g, %.17g]", i ? " x " : "", lo_[i], hi_[i]);
        s += buf;
    }
    return s;
}

Region::Region(BaseSet base, RegionOptions opts) : base_(std::move(base)), opts_(opts)
{
    if (folded()) {
        lo_ = base_.lo()[0];
        hi_ = base_.hi()[0];
    }
}

void Region::add_cut(const Halfspace& h)
{
    require_same_dim(h.a, base_.lo(), "Region::add_cut");
    ++cut_count_;
    if (folded()) {
        const double a = h.a[0];
        if (a > 0.0) hi_ = std::min(hi_, h.b / a);
        else if (a < 0.0) lo_ = std::max(lo_, h.b / a);
        if (opts_.record_cuts) cuts_.push_back(h);
        if (lo_ > hi_) {
            char buf[128];
            std::snprintf(buf, sizeof buf, "region became empty: lo=%.17g > hi=%.17g", lo_, hi_);
            throw InfeasibleRegionError(buf, lo_, hi_);
        }
        return;
    }
    if (h.is_full_space()) return;
    if (opts_.prune_redundant && base_.bounded()) {
        // max of <a, z> over the box
        double m = 0.0;
        for (std::size_t i = 0; i < h.a.size(); ++i) m += h.a[i] > 0.0 ? h.a[i] * base_.hi()[i] : h.a[i] * base_.lo()[i];
        if (m <= h.b) return;
    }
    if (cuts_.size() >= opts_.max_cuts)
        throw DomainError("Region: cut capacity " + std::to_string(opts_.max_cuts) + " exceeded");
    cuts_.push_back(h);
}

Region Region::with_cut(const Halfspace& h) const
{
    Region r = *this;
    r.add_cut(h);
    return r;
}

Region Region::intersect(const Region& a, const Region& b)
{
    if (!(a.base_ == b.base_)) throw DomainError("Region::intersect: regions over different base sets");
    Region r = a;
    r.cut_count_ += b.cut_count_;
    r.cuts_.insert(r.cuts_.end(), b.cuts_.begin(), b.cuts_.end());
    if (r.folded()) {
        r.lo_ = std::max(a.lo_, b.lo_);
        r.hi_ = std::min(a.hi_, b.hi_);
        if (r.lo_ > r.hi_) {
            char buf[128];
            std::snprintf(buf, sizeof buf, "intersection is empty: lo=%.17g > hi=%.17g", r.lo_, r.hi_);
            throw InfeasibleRegionError(buf, r.lo_, r.hi_);
        }
    } else if (r.cuts_.size() > r.opts_.max_cuts) {
        throw DomainError("Region::intersect: cut capacity exceeded");
    }
    return r;
}

bool Region::contains(const Vector& z, double tol) const
{
    if (!base_.contains(z)) return false;
    if (folded()) {
        if (!(z[0] >= lo_ - tol && z[0] <= hi_ + tol)) return false;
        return !opts_.record_cuts || satisfies_cuts(z, tol);
    }
    return satisfies_cuts(z, tol);
}

bool Region::satisfies_cuts(const Vector& z, double tol) const
{
    return std::all_of(cuts_.begin(), cuts_.end(), [&](const Halfspace& h) { return h.satisfied(z, tol); });
}

double Region::max_violation(const Vector& z) const
{
    double m = 0.0;
    for (const auto& h : cuts_) m = std::max(m, h.violation(z));
    return m;
}

Halfspace cut_from_distance_test(const LegendreFunction& f, const Vector& u, const Vector& x0, const Vector& xn,
                                 double alpha)
{
    if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("cut_from_distance_test: alpha must lie in (0, 1)");
    f.require_interior(u, "cut_from_distance_test(u)");
    f.require_interior(x0, "cut_from_distance_test(x0)");
    f.require_interior(xn, "cut_from_distance_test(xn)");
    const std::size_t d = u.size();
    Vector a(d);
    double a_scale = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
        const double g0 = f.grad1(x0[i]), gn = f.grad1(xn[i]), gu = f.grad1(u[i]);
        a[i] = alpha * g0 + (1.0 - alpha) * gn - gu;
        a_scale += std::abs(g0) + std::abs(gn) + std::abs(gu);
    }
    const double o0 = legendre_offset(f, x0), on = legendre_offset(f, xn), ou = legendre_offset(f, u);
    const double b = alpha * o0 + (1.0 - alpha) * on - ou;
    return settle_degenerate(std::move(a), b, a_scale, std::abs(o0) + std::abs(on) + std::abs(ou));
}

Halfspace cut_from_bregman_vi(const LegendreFunction& f, const Vector& x0, const Vector& xn)
{
    f.require_interior(x0, "cut_from_bregman_vi(x0)");
    f.require_interior(xn, "cut_from_bregman_vi(xn)");
    Vector a = f.grad(x0) - f.grad(xn);
    const double b = dot(a, xn);
    if (a.size() > 0 && std::all_of(a.begin(), a.end(), [](double c) { return c == 0.0; }))
        return Halfspace::full_space(a.size());
    return Halfspace(std::move(a), b);
}

Vector project_halfspace_euclidean(const Halfspace& h, const Vector& x)
{
    const double v = h.violation(x);
    if (v <= 0.0 || h.is_full_space()) return x;
    const double s = v / dot(h.a, h.a);
    Vector r = x;
    for (std::size_t i = 0; i < r.size(); ++i) r[i] -= s * h.a[i];
    return r;
}

namespace {

Vector project_1d(const LegendreFunction& f, const Region& region, const Vector& x)
{
    double z = std::clamp(x[0], region.lo(), region.hi());
    Vector r = make_vector({z});
    if (!f.in_interior(r)) {
        char buf[160];
        std::snprintf(buf, sizeof buf, "region [%.17g, %.17g] does not meet int dom f", region.lo(), region.hi());
        throw InfeasibleRegionError(buf, region.lo(), region.hi());
    }
    return r;
}

Vector dykstra(const Region& region, const Vector& x, const ProjectionOptions& opts)
{
    const auto& cuts = region.cuts();
    const bool with_box = region.base().bounded();
    const std::size_t m = cuts.size() + (with_box ? 1 : 0);
    std::vector<Vector> incr(m, zeros(x.size()));
    Vector cur = x;
    double change = kInf;
    for (int cycle = 0; cycle < opts.max_cycles; ++cycle) {
        const Vector prev = cur;
        for (std::size_t k = 0; k < m; ++k) {
            const Vector shifted = cur + incr[k];
            Vector next = k < cuts.size() ? project_halfspace_euclidean(cuts[k], shifted) : region.base().clamp(shifted);
            incr[k] = shifted - next;
            cur = std::move(next);
        }
        change = distance(cur, prev);
        if (change <= opts.tol) {
            bool feasible = true;
            for (const auto& h : cuts)
                if (h.violation(cur) > opts.feas_tol * (1.0 + norm(h.a))) feasible = false;
            if (feasible) return cur;
        }
    }
    throw ConvergenceError("Dykstra projection did not converge (region may be empty); last change " +
                               std::to_string(change),
                           change);
}

// Bregman's cyclic method for halfspaces: z = grad f*(grad f(x) - sum_k lam_k a_k)
// with lam_k >= 0 adjusted one constraint at a time.
Vector bregman_cyclic(const LegendreFunction& f, const Region& region, const Vector& x, const ProjectionOptions& opts)
{
    const std::size_t d = x.size();
    std::vector<Halfspace> cons = region.cuts();
    if (region.base().bounded()) {
        for (std::size_t i = 0; i < d; ++i) {
            Vector e = zeros(d);
            e[i] = 1.0;
            cons.emplace_back(e, region.base().hi()[i]);
            e[i] = -1.0;
            // lower bounds at or below the boundary of dom f never bind
            if (!(f.kind() == LegendreKind::neg_entropy && region.base().lo()[i] <= 0.0))
                cons.emplace_back(e, -region.base().lo()[i]);
        }
    }
    std::vector<double> lam(cons.size(), 0.0);
    Vector dual = f.grad(x);
    Vector cur = x;

    auto primal = [&](const Vector& v, const Vector& a, double theta) {
        double s = 0.0;
        for (std::size_t i = 0; i < d; ++i) s += a[i] * f.grad_conj1(v[i] - theta * a[i]);
        return s;
    };

    double change = kInf;
    for (int cycle = 0; cycle < opts.max_cycles; ++cycle) {
        const Vector prev = cur;
        for (std::size_t k = 0; k < cons.size(); ++k) {
            const auto& h = cons[k];
            const double h0 = primal(dual, h.a, 0.0) - h.b;
            if (h0 <= 0.0 && lam[k] == 0.0) continue;
            // h(theta) is nonincreasing; bracket its root
            double lo = 0.0, hi = 0.0, step = 1.0;
            if (h0 > 0.0) {
                hi = step;
                while (primal(dual, h.a, hi) - h.b > 0.0) {
                    lo = hi;
                    step *= 2.0;
                    hi += step;
                    if (step > 1e300) throw ConvergenceError("Bregman projection: root bracket diverged", h0);
                }
            } else {
                lo = -std::min(step, lam[k]);
                while (primal(dual, h.a, lo) - h.b < 0.0 && -lo < lam[k]) {
                    hi = lo;
                    step *= 2.0;
                    lo = -std::min(-lo + step, lam[k]);
                }
            }
            for (int it = 0; it < 200; ++it) {
                const double mid = 0.5 * (lo + hi);
                if (mid == lo || mid == hi) break;
                if (primal(dual, h.a, mid) - h.b > 0.0) lo = mid;
                else hi = mid;
            }
            const double theta = 0.5 * (lo + hi);
            const double delta = std::max(theta, -lam[k]);
            lam[k] += delta;
            for (std::size_t i = 0; i < d; ++i) dual[i] -= delta * h.a[i];
        }
        cur = f.grad_conj(dual);
        change = distance(cur, prev);
        if (change <= opts.tol) {
            bool feasible = true;
            for (const auto& h : cons)
                if (h.violation(cur) > opts.feas_tol * (1.0 + norm(h.a))) feasible = false;
            if (feasible) return region.base().bounded() ? region.base().clamp(cur) : cur;
        }
    }
    throw ConvergenceError("Bregman cyclic projection did not converge; last change " + std::to_string(change), change);
}

}  // namespace

Vector bregman_project(const LegendreFunction& f, const Region& region, const Vector& x, const ProjectionOptions& opts)
{
    f.require_interior(x, "bregman_project");
    require_same_dim(x, region.base().lo(), "bregman_project");
    if (region.folded()) return project_1d(f, region, x);
    if (region.contains(x)) return x;
    if (f.kind() == LegendreKind::euclidean) return dykstra(region, x, opts);
    return bregman_cyclic(f, region, x, opts);
}

}  // namespace bregman
