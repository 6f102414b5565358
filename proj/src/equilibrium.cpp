#include "bregman/equilibrium.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <random>

#include "bregman/errors.hpp"

namespace bregman {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double parse_double(std::string_view s, std::string_view what)
{
    while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
    while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v))
        throw ConfigError("bad number '" + std::string(s) + "' for " + std::string(what));
    return v;
}

std::string fmt_num(double v)
{
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

double radical_inverse(std::uint64_t i, std::uint64_t base)
{
    double inv = 1.0 / static_cast<double>(base), f = inv, r = 0.0;
    while (i > 0) {
        r += f * static_cast<double>(i % base);
        i /= base;
        f *= inv;
    }
    return r;
}

constexpr std::uint64_t kPrimes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53};

void require_problem_dim(const LegendreFunction& f, const GmepProblem& p)
{
    if (f.dim() != p.dim())
        throw DomainError("Legendre function dimension " + std::to_string(f.dim()) + " does not match problem dimension " +
                          std::to_string(p.dim()));
}

// Lower end of C_i intersected with int dom f, as a bisection bracket.
double effective_lo(const LegendreFunction& f, double lo) { return f.kind() == LegendreKind::neg_entropy ? std::max(lo, 0.0) : lo; }

}  // namespace

Bifunction Bifunction::affine_quadratic(double a)
{
    if (!(a >= 0.0) || !std::isfinite(a)) throw DomainError("affine-quadratic bifunction needs a >= 0");
    return {Kind::affine_quadratic, a};
}

double Bifunction::operator()(const Vector& x, const Vector& y) const
{
    if (kind == Kind::zero) return 0.0;
    return a * dot(x, y - x);
}

ConvexTerm ConvexTerm::quadratic(double c)
{
    if (!(c >= 0.0) || !std::isfinite(c)) throw DomainError("quadratic phi needs c >= 0");
    return {Kind::quadratic, c};
}

double ConvexTerm::operator()(const Vector& y) const { return kind == Kind::zero ? 0.0 : c * dot(y, y); }

MonotoneOperator MonotoneOperator::linear(double k)
{
    if (!(k >= 0.0) || !std::isfinite(k)) throw DomainError("linear Psi needs k >= 0");
    return {Kind::linear, k};
}

double MonotoneOperator::apply1(double x) const
{
    switch (kind) {
    case Kind::zero: return 0.0;
    case Kind::sin: return std::sin(x);
    case Kind::linear: return k * x;
    }
    return 0.0;
}

Vector MonotoneOperator::operator()(const Vector& x) const
{
    Vector r(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) r[i] = apply1(x[i]);
    return r;
}

std::string MonotoneOperator::tag() const
{
    switch (kind) {
    case Kind::zero: return "zero";
    case Kind::sin: return "sin";
    case Kind::linear: return "linear:" + fmt_num(k);
    }
    return "?";
}

GmepProblem GmepProblem::as_ep() const
{
    GmepProblem ep = *this;
    ep.phi = ConvexTerm::zero();
    ep.psi = MonotoneOperator::zero();
    if (name == "paper-example-gmep") ep.name = "paper-example-ep";
    else if (!name.starts_with("affine-quadratic")) ep.name = name + "/ep";
    else ep.name = "affine-quadratic(" + fmt_num(theta.a) + ",0,zero," + std::to_string(dim()) + ")";
    return ep;
}

GmepProblem make_problem(std::string_view spec)
{
    const BaseSet example_base = BaseSet::interval(-1.5, 0.0);
    if (spec == "paper-example-gmep")
        return {"paper-example-gmep", example_base, Bifunction::affine_quadratic(1.0), ConvexTerm::quadratic(1.0),
                MonotoneOperator::sine(), make_vector({0.0})};
    if (spec == "paper-example-ep")
        return {"paper-example-ep", example_base, Bifunction::affine_quadratic(1.0), ConvexTerm::zero(),
                MonotoneOperator::zero(), make_vector({0.0})};

    constexpr std::string_view head = "affine-quadratic(";
    if (spec.starts_with(head) && spec.ends_with(")")) {
        std::string_view body = spec.substr(head.size(), spec.size() - head.size() - 1);
        std::vector<std::string_view> parts;
        for (std::size_t pos = 0;;) {
            const auto comma = body.find(',', pos);
            parts.push_back(body.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos));
            if (comma == std::string_view::npos) break;
            pos = comma + 1;
        }
        if (parts.size() != 4) throw ConfigError("affine-quadratic expects (a,c,psi,d): '" + std::string(spec) + "'");
        const double a = parse_double(parts[0], "a");
        const double c = parse_double(parts[1], "c");
        const std::string_view psi_tag = parts[2];
        const double dd = parse_double(parts[3], "d");
        if (dd < 1.0 || dd != std::floor(dd) || dd > 16.0) throw ConfigError("affine-quadratic: d must be an integer in [1, 16]");
        const auto d = static_cast<std::size_t>(dd);

        MonotoneOperator psi;
        if (psi_tag == "zero") psi = MonotoneOperator::zero();
        else if (psi_tag == "sin") psi = MonotoneOperator::sine();
        else if (psi_tag.starts_with("linear:")) psi = MonotoneOperator::linear(parse_double(psi_tag.substr(7), "k"));
        else throw ConfigError("unknown psi tag '" + std::string(psi_tag) + "'");

        try {
            GmepProblem p{"", BaseSet::box(Vector(d, -1.5), Vector(d, 0.0)),
                          a == 0.0 ? Bifunction::zero() : Bifunction::affine_quadratic(a),
                          c == 0.0 ? ConvexTerm::zero() : ConvexTerm::quadratic(c), psi, zeros(d)};
            p.name = problem_spec(p);
            return p;
        } catch (const DomainError& e) {
            throw ConfigError(e.what());
        }
    }
    throw ConfigError("unknown problem '" + std::string(spec) + "'");
}

std::string problem_spec(const GmepProblem& p)
{
    if (p.name == "paper-example-gmep" || p.name == "paper-example-ep") return p.name;
    return "affine-quadratic(" + fmt_num(p.theta.is_zero() ? 0.0 : p.theta.a) + "," +
           fmt_num(p.phi.is_zero() ? 0.0 : p.phi.c) + "," + p.psi.tag() + "," + std::to_string(p.dim()) + ")";
}

bool StructureReport::ok(double tol) const
{
    return a1_worst <= tol && a2_worst <= tol && psi_worst <= tol && phi_worst <= tol;
}

StructureReport check_structure(const GmepProblem& p, int samples, std::uint64_t seed)
{
    StructureReport r;
    r.samples = samples;
    std::mt19937_64 rng(seed);
    const auto& base = p.base;
    auto draw = [&]() {
        Vector v(base.dim());
        for (std::size_t i = 0; i < v.size(); ++i) {
            const double lo = std::isfinite(base.lo()[i]) ? base.lo()[i] : -2.0;
            const double hi = std::isfinite(base.hi()[i]) ? base.hi()[i] : 2.0;
            v[i] = std::uniform_real_distribution<double>(lo, hi)(rng);
        }
        return v;
    };
    for (int s = 0; s < samples; ++s) {
        const Vector x = draw(), y = draw();
        r.a1_worst = std::max(r.a1_worst, std::abs(p.theta(x, x)));
        r.a2_worst = std::max(r.a2_worst, p.theta(x, y) + p.theta(y, x));
        r.psi_worst = std::max(r.psi_worst, -dot(p.psi(x) - p.psi(y), x - y));
        const Vector mid = 0.5 * (x + y);
        r.phi_worst = std::max(r.phi_worst, p.phi(mid) - 0.5 * (p.phi(x) + p.phi(y)));
    }
    return r;
}

std::string to_string(ResolventMethod m)
{
    switch (m) {
    case ResolventMethod::automatic: return "automatic";
    case ResolventMethod::closed_form_affine_quadratic: return "closed-form-affine-quadratic";
    case ResolventMethod::scalar_kkt_bisection: return "scalar-kkt-bisection";
    case ResolventMethod::sampled_vi_check_only: return "sampled-vi-check-only";
    }
    return "?";
}

ResolventMethod parse_resolvent_method(std::string_view s)
{
    for (auto m : {ResolventMethod::automatic, ResolventMethod::closed_form_affine_quadratic,
                   ResolventMethod::scalar_kkt_bisection, ResolventMethod::sampled_vi_check_only})
        if (s == to_string(m)) return m;
    throw ConfigError("unknown resolvent method '" + std::string(s) + "'");
}

std::vector<Vector> probe_grid(const BaseSet& base, int count, const Vector* center, double radius)
{
    if (count <= 0) return {};
    const std::size_t d = base.dim();
    Vector lo = base.lo(), hi = base.hi();
    for (std::size_t i = 0; i < d; ++i) {
        const double c = center ? (*center)[i] : 0.0;
        if (!std::isfinite(lo[i])) lo[i] = c - radius;
        if (!std::isfinite(hi[i])) hi[i] = c + radius;
    }
    std::vector<Vector> pts;
    pts.reserve(static_cast<std::size_t>(count));
    if (d == 1) {
        for (int k = 0; k < count; ++k) {
            const double t = count == 1 ? 0.5 : static_cast<double>(k) / (count - 1);
            pts.push_back(make_vector({k == count - 1 ? hi[0] : lo[0] + t * (hi[0] - lo[0])}));
        }
        return pts;
    }
    if (d > std::size(kPrimes)) throw DomainError("probe_grid: dimension too large for Halton sampling");
    for (int k = 0; k < count; ++k) {
        Vector v(d);
        for (std::size_t i = 0; i < d; ++i)
            v[i] = lo[i] + radical_inverse(static_cast<std::uint64_t>(k) + 1, kPrimes[i]) * (hi[i] - lo[i]);
        pts.push_back(std::move(v));
    }
    return pts;
}

double gmep_violation(const GmepProblem& p, const Vector& x, std::span<const Vector> probes)
{
    if (!p.base.contains(x)) throw DomainError("gmep_violation: x = " + to_string(x) + " is outside C");
    const Vector psi_x = p.psi(x);
    const double phi_x = p.phi(x);
    double worst = -kInf;
    for (const auto& y : probes) worst = std::max(worst, phi_x - p.theta(x, y) - dot(psi_x, y - x) - p.phi(y));
    return probes.empty() ? 0.0 : worst;
}

double verify_resolvent(const LegendreFunction& f, const GmepProblem& p, const Vector& x, const Vector& z,
                        std::span<const Vector> probes)
{
    require_problem_dim(f, p);
    const Vector psi_x = p.psi(x);
    const Vector dg = f.grad(z) - f.grad(x);
    const double phi_z = p.phi(z);
    double worst = -kInf;
    for (const auto& y : probes) {
        const Vector step = y - z;
        worst = std::max(worst, phi_z - p.theta(z, y) - p.phi(y) - dot(psi_x, step) - dot(dg, step));
    }
    return probes.empty() ? 0.0 : worst;
}

namespace {

Vector resolvent_closed_form(const LegendreFunction& f, const GmepProblem& p, const Vector& x)
{
    if (f.kind() != LegendreKind::euclidean)
        throw DomainError("closed-form-affine-quadratic resolvent requires the euclidean Legendre function");
    const double a = p.theta.is_zero() ? 0.0 : p.theta.a;
    const double c = p.phi.is_zero() ? 0.0 : p.phi.c;
    const double slope = a + 2.0 * c + 1.0;
    Vector z(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double rhs = x[i] - p.psi.apply1(x[i]);
        const double zi = std::clamp(rhs / slope, p.base.lo()[i], p.base.hi()[i]);
        // KKT sign at an active bound: F(z) = slope z + Psi x - x must push outward.
        const double F = slope * zi - rhs;
        const double scale = 1e-12 * (1.0 + std::abs(rhs));
        if ((zi == p.base.hi()[i] && F > scale) || (zi == p.base.lo()[i] && F < -scale))
            throw ConvergenceError("closed-form resolvent failed the KKT sign check at a bound", std::abs(F));
        z[i] = zi;
    }
    return z;
}

Vector resolvent_bisection(const LegendreFunction& f, const GmepProblem& p, const Vector& x, const ResolventConfig& cfg)
{
    Vector z(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double gx = f.grad1(x[i]);
        const double px = p.psi.apply1(x[i]);
        // Strictly increasing in zi: monotone Theta, convex phi, strictly monotone grad f.
        auto F = [&](double zi) { return p.theta.diag_derivative(zi) + p.phi.derivative(zi) + px + f.grad1(zi) - gx; };

        double lo = effective_lo(f, p.base.lo()[i]);
        double hi = p.base.hi()[i];
        const bool open_lo = f.kind() == LegendreKind::neg_entropy && lo <= 0.0;
        if (f.kind() == LegendreKind::neg_entropy && hi <= 0.0)
            throw DomainError("resolvent: C does not meet int dom f on axis " + std::to_string(i));

        if (!std::isfinite(lo)) {
            lo = std::min(-1.0, std::isfinite(hi) ? hi - 1.0 : -1.0);
            for (double step = 1.0; F(lo) > 0.0; step *= 2.0) lo -= step;
        }
        if (!std::isfinite(hi)) {
            hi = std::max(1.0, lo + 1.0);
            for (double step = 1.0; F(hi) < 0.0; step *= 2.0) hi += step;
        }
        if (open_lo) {
            // F -> -inf as zi -> 0+
            lo = std::min(1.0, hi) * 0.5;
            while (F(lo) > 0.0) lo *= 0.5;
        } else if (F(lo) >= 0.0) {
            z[i] = lo;
            continue;
        }
        if (F(hi) <= 0.0) {
            z[i] = hi;
            continue;
        }
        int it = 0;
        while (hi - lo > cfg.inner_tol) {
            const double mid = 0.5 * (lo + hi);
            if (mid == lo || mid == hi) break;
            if (++it > cfg.max_inner) throw ConvergenceError("scalar-kkt-bisection exceeded max_inner", std::abs(F(mid)));
            if (F(mid) < 0.0) lo = mid;
            else hi = mid;
        }
        z[i] = 0.5 * (lo + hi);
    }
    return z;
}

Vector resolvent_sampled(const LegendreFunction& f, const GmepProblem& p, const Vector& x, const ResolventConfig& cfg)
{
    if (p.dim() != 1) throw DomainError("sampled-vi-check-only resolvent is implemented for 1-D problems only");
    const auto grid = probe_grid(p.base, cfg.probe_count, &x);
    double best = kInf;
    Vector arg = grid.front();
    for (const auto& z : grid) {
        if (!f.in_interior(z)) continue;
        const double v = verify_resolvent(f, p, x, z, grid);
        if (v < best) {
            best = v;
            arg = z;
        }
    }
    return arg;
}

}  // namespace

Vector resolvent(const LegendreFunction& f, const GmepProblem& p, const Vector& x, const ResolventConfig& cfg)
{
    require_problem_dim(f, p);
    f.require_interior(x, "resolvent");
    if (!(cfg.inner_tol > 0.0)) throw DomainError("resolvent: inner_tol must be positive");

    Vector z;
    if (p.is_trivial() && cfg.method != ResolventMethod::sampled_vi_check_only) {
        z = bregman_project(f, Region(p.base), x);
    } else {
        ResolventMethod m = cfg.method;
        if (m == ResolventMethod::automatic)
            m = f.kind() == LegendreKind::euclidean ? ResolventMethod::closed_form_affine_quadratic
                                                    : ResolventMethod::scalar_kkt_bisection;
        switch (m) {
        case ResolventMethod::closed_form_affine_quadratic: z = resolvent_closed_form(f, p, x); break;
        case ResolventMethod::scalar_kkt_bisection: z = resolvent_bisection(f, p, x, cfg); break;
        case ResolventMethod::sampled_vi_check_only: z = resolvent_sampled(f, p, x, cfg); break;
        case ResolventMethod::automatic: break;
        }
    }
    if (cfg.fault_gain != 0.0)
        for (std::size_t i = 0; i < z.size(); ++i) z[i] += cfg.fault_gain * x[i];
    return z;
}

double bfne_gap(const LegendreFunction& f, const GmepProblem& p, const ResolventConfig& cfg, const Vector& x,
                const Vector& y)
{
    const Vector tx = resolvent(f, p, x, cfg);
    const Vector ty = resolvent(f, p, y, cfg);
    const Vector dt = tx - ty;
    return dot(f.grad(tx) - f.grad(ty), dt) - dot(f.grad(x) - f.grad(y), dt);
}

double bfne_four_term_slack(const LegendreFunction& f, const GmepProblem& p, const ResolventConfig& cfg,
                            const Vector& x, const Vector& y)
{
    const Vector tx = resolvent(f, p, x, cfg);
    const Vector ty = resolvent(f, p, y, cfg);
    const double lhs = bregman_distance(f, tx, ty) + bregman_distance(f, ty, tx) + bregman_distance(f, tx, x) +
                       bregman_distance(f, ty, y);
    const double rhs = bregman_distance(f, tx, y) + bregman_distance(f, ty, x);
    return rhs - lhs;
}

double resolvent_pythagoras_gap(const LegendreFunction& f, const GmepProblem& prob, const ResolventConfig& cfg,
                                const Vector& p, const Vector& x)
{
    const Vector r = resolvent(f, prob, x, cfg);
    return bregman_distance(f, p, r) + bregman_distance(f, r, x) - bregman_distance(f, p, x);
}

}  // namespace bregman
