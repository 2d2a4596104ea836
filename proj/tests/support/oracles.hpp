#pragma once

// Test-only reference computations, kept independent of the library's
// evaluation paths: adaptive quadrature for the segment kernels and CDFs,
// finite differences for gradients and Hessians, grid search for tiny
// optimization problems.

#include <cmath>
#include <functional>
#include <vector>

namespace oracle {

namespace detail {

template <class F>
double simpson_rec(const F& f, double a, double b, double fa, double fm, double fb,
                   double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
        return left + right + delta / 15.0;
    return simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace detail

/// Adaptive Simpson quadrature with a relative error target.
template <class F>
double integrate(const F& f, double a, double b, double rel_tol = 1e-13) {
    const double fa = f(a);
    const double fb = f(b);
    const double fm = f(0.5 * (a + b));
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    double scale = std::abs(whole);
    if (scale == 0.0) scale = 1e-300;
    return detail::simpson_rec(f, a, b, fa, fm, fb, whole, rel_tol * scale, 48);
}

/// \int_0^1 (1-t)^a t^b exp((1-t) r + t s) dt by quadrature.
inline double quad_j(int a, int b, double r, double s) {
    return integrate(
        [&](double t) {
            double w = 1.0;
            for (int i = 0; i < a; ++i) w *= (1.0 - t);
            for (int i = 0; i < b; ++i) w *= t;
            return w * std::exp((1.0 - t) * r + t * s);
        },
        0.0, 1.0);
}

/// Central-difference gradient of a multivariate function.
inline std::vector<double> fd_gradient(const std::function<double(const std::vector<double>&)>& f,
                                       std::vector<double> x, double h = 1e-5) {
    std::vector<double> g(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double xi = x[i];
        x[i] = xi + h;
        const double up = f(x);
        x[i] = xi - h;
        const double dn = f(x);
        x[i] = xi;
        g[i] = (up - dn) / (2.0 * h);
    }
    return g;
}

/// Central-difference scalar derivative d/dt f(t) at t = 0.
inline double fd_dt0(const std::function<double(double)>& f, double h = 1e-6) {
    return (f(h) - f(-h)) / (2.0 * h);
}

/// Coordinate-descent grid refinement for tiny smooth concave maximization.
/// Searches a box around `center` and shrinks it; good to ~1e-7.
inline std::vector<double> grid_maximize(
    const std::function<double(const std::vector<double>&)>& f, std::vector<double> center,
    double radius = 3.0, int levels = 24, int steps = 8) {
    for (int lvl = 0; lvl < levels; ++lvl) {
        for (std::size_t i = 0; i < center.size(); ++i) {
            double best_v = f(center);
            double best_x = center[i];
            for (int s = -steps; s <= steps; ++s) {
                std::vector<double> probe = center;
                probe[i] = center[i] + radius * s / steps;
                const double v = f(probe);
                if (v > best_v) {
                    best_v = v;
                    best_x = probe[i];
                }
            }
            center[i] = best_x;
        }
        radius *= 0.5;
    }
    return center;
}

}  // namespace oracle
