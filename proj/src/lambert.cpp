#include "ngmining/lambert.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace ngmining {

namespace {

constexpr double kBranchPoint = -0.36787944117144233;  // -1/e
constexpr int kMaxIterations = 50;

// Series around the branch point x = -1/e in p = sqrt(2(e*x + 1)).
double branch_point_series(double x) {
    double q = 2.0 * (std::exp(1.0) * x + 1.0);
    double p = std::sqrt(q > 0.0 ? q : 0.0);
    return -1.0 + p * (1.0 + p * (-1.0 / 3.0 + p * (11.0 / 72.0)));
}

double initial_guess(double x) {
    if (x < -0.25) return branch_point_series(x);
    if (x <= 1.0) return x / (1.0 + x);  // crude but inside the basin
    double l = std::log(x);
    if (x <= std::exp(1.0) * 2.0) return 0.5 * l + 0.5;
    return l - std::log(l);
}

}  // namespace

double lambert_w0(double x) {
    if (std::isnan(x) || x < kBranchPoint - 1e-15) {
        throw std::domain_error("lambert_w0: argument below -1/e");
    }
    if (x < kBranchPoint) x = kBranchPoint;
    if (x == 0.0) return 0.0;

    double w = initial_guess(x);
    // The Halley denominator degenerates at w = -1; the series value is
    // already accurate to ~1e-6 there, which is all the branch point needs.
    if (w <= -1.0 + 1e-6) return std::max(w, -1.0);

    double prev_step = std::numeric_limits<double>::infinity();
    for (int i = 0; i < kMaxIterations; ++i) {
        double ew = std::exp(w);
        double f = w * ew - x;
        double denom = ew * (w + 1.0) - (w + 2.0) * f / (2.0 * w + 2.0);
        double step = f / denom;
        w -= step;
        double scale = 1.0 + std::abs(w);
        if (std::abs(step) <= 1e-14 * scale) return w;
        // Near the branch point the iterate oscillates at the conditioning
        // floor of double precision; a non-shrinking tiny step means done.
        if (std::abs(step) >= prev_step && std::abs(step) <= 1e-11 * scale) return w;
        prev_step = std::abs(step);
    }
    throw std::runtime_error("lambert_w0: no convergence after 50 iterations");
}

double lambert_w0_exp(double s) {
    if (s <= 700.0) return lambert_w0(std::exp(s));
    // For huge s, solve w + log(w) = s by Newton; w0(exp(s)) > 1 here.
    double w = s - std::log(s);
    for (int i = 0; i < kMaxIterations; ++i) {
        double f = w + std::log(w) - s;
        double step = f / (1.0 + 1.0 / w);
        w -= step;
        if (std::abs(step) <= 1e-15 * w) return w;
    }
    throw std::runtime_error("lambert_w0_exp: no convergence after 50 iterations");
}

}  // namespace ngmining
