#pragma once

#include <algorithm>
#include <cmath>

namespace ngmining {

/// Deterministic argmax of f over [lo, hi]: a coarse grid scan locates the
/// best sample, a golden-section pass shrinks the bracketing interval to
/// width <= tol. The grid stage guards piecewise kinks; the refinement
/// assumes f is unimodal inside the winning bracket.
template <typename F>
double argmax_on_interval(F&& f, double lo, double hi, int grid_points, double tol) {
    if (hi <= lo) return lo;
    if (grid_points < 2) grid_points = 2;

    double best_x = lo;
    double best_y = f(lo);
    int best_i = 0;
    for (int i = 1; i < grid_points; ++i) {
        double x = lo + (hi - lo) * i / (grid_points - 1);
        double y = f(x);
        if (y > best_y) {
            best_y = y;
            best_x = x;
            best_i = i;
        }
    }

    double a = lo + (hi - lo) * std::max(best_i - 1, 0) / (grid_points - 1);
    double b = lo + (hi - lo) * std::min(best_i + 1, grid_points - 1) / (grid_points - 1);

    constexpr double inv_phi = 0.6180339887498949;
    double x1 = b - inv_phi * (b - a);
    double x2 = a + inv_phi * (b - a);
    double f1 = f(x1);
    double f2 = f(x2);
    while (b - a > tol) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = f(x1);
        }
    }
    double mid = 0.5 * (a + b);
    return f(mid) >= best_y ? mid : best_x;
}

/// Central finite difference of f at x with step h.
template <typename F>
double central_difference(F&& f, double x, double h) {
    return (f(x + h) - f(x - h)) / (2.0 * h);
}

}  // namespace ngmining
