#pragma once

#include <functional>
#include <limits>

namespace wprox {

struct QuadratureResult {
    double value = 0.0;
    double error_estimate = 0.0;
    bool converged = false;
    // Log-log slope of |integrand| fitted over the last two decades of an
    // improper upper tail; NaN when not applicable.
    double tail_exponent = std::numeric_limits<double>::quiet_NaN();
    bool divergent = false;  // tail exponent >= -1 within tolerance
};

inline double infinity() { return std::numeric_limits<double>::infinity(); }

// Adaptive Gauss-Kronrod (G7/K15) on a finite interval.
QuadratureResult integrate_adaptive(const std::function<double(double)>& f,
                                    double a, double b,
                                    double rel_tol = 1e-10,
                                    double abs_tol = 1e-14,
                                    int max_panels = 4000);

// Adaptive integration of [a, b] spanning many decades: geometric windows,
// each integrated adaptively. Requires a > 0.
QuadratureResult integrate_geometric(const std::function<double(double)>& f,
                                     double a, double b,
                                     double rel_tol = 1e-10);

// Improper integral over [a, +inf): adaptive panels on geometrically growing
// windows up to r_max, then a power-law tail correction from the fitted
// exponent. Declares divergence when the fitted exponent of |f| is
// >= -1 - exponent_tol (the integral cannot converge at desk precision).
QuadratureResult integrate_tail(const std::function<double(double)>& f,
                                double a,
                                double r_max = 1e6,
                                double rel_tol = 1e-8,
                                double exponent_tol = 1e-3);

// Surface area of the unit sphere S^{d-1} in R^d.
double sphere_surface(int d);

}  // namespace wprox
