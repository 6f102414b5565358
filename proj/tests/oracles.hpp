// Independent numerical oracles for the unit tests. None of these call the
// library's closed forms: they work from function values alone.
#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <utility>

namespace oracle {

// Central difference with step h.
inline double derivative(const std::function<double(double)>& g, double x, double h = 1e-5)
{
    return (g(x + h) - g(x - h)) / (2.0 * h);
}

// Bisection for g(x) = target with g increasing on [lo, hi].
inline double solve_increasing(const std::function<double(double)>& g, double target, double lo, double hi,
                               int iters = 200)
{
    for (int i = 0; i < iters; ++i) {
        const double mid = 0.5 * (lo + hi);
        (g(mid) < target ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

// Argmin of g over a uniform grid on [lo, hi] (endpoints included).
inline double grid_argmin(const std::function<double(double)>& g, double lo, double hi, int points = 200001)
{
    double best = lo, best_v = std::numeric_limits<double>::infinity();
    for (int k = 0; k < points; ++k) {
        const double z = lo + (hi - lo) * k / (points - 1);
        const double v = g(z);
        if (v < best_v) best_v = v, best = z;
    }
    return best;
}

// Largest and smallest grid points of [lo, hi] where pred holds; an interval
// oracle for 1-D halfspace cuts. Returns {nan, nan} if pred never holds.
inline std::pair<double, double> grid_feasible_range(const std::function<bool(double)>& pred, double lo, double hi,
                                                     int points = 100001)
{
    double first = std::nan(""), last = std::nan("");
    for (int k = 0; k < points; ++k) {
        const double z = lo + (hi - lo) * k / (points - 1);
        if (pred(z)) {
            if (std::isnan(first)) first = z;
            last = z;
        }
    }
    return {first, last};
}

}  // namespace oracle
