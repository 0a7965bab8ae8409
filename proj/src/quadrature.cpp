#include "wprox/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace wprox {

namespace {

// Gauss 7 / Kronrod 15 nodes and weights on [-1, 1].
constexpr int kNodes = 8;
constexpr double kAbscissa[kNodes] = {
    0.000000000000000000, 0.207784955007898468, 0.405845151377397167,
    0.586087235467691130, 0.741531185599394440, 0.864864423359769073,
    0.949107912342758525, 0.991455371120812639};
constexpr double kWeightK[kNodes] = {
    0.209482141084727828, 0.204432940075298892, 0.190350578064785410,
    0.169004726639267903, 0.140653259715525919, 0.104790010322250184,
    0.063092092629978553, 0.022935322010529225};
constexpr double kWeightG[kNodes] = {
    0.417959183673469388, 0.0, 0.381830050505118945, 0.0,
    0.279705391489276668, 0.0, 0.129484966168869693, 0.0};

struct PanelEstimate {
    double value;
    double error;
};

PanelEstimate gk15(const std::function<double(double)>& f, double a, double b) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double fc = f(mid);
    double k15 = kWeightK[0] * fc;
    double g7 = kWeightG[0] * fc;
    for (int i = 1; i < kNodes; ++i) {
        double dx = half * kAbscissa[i];
        double fsum = f(mid + dx) + f(mid - dx);
        k15 += kWeightK[i] * fsum;
        g7 += kWeightG[i] * fsum;
    }
    k15 *= half;
    g7 *= half;
    double err = std::abs(k15 - g7);
    err = 200.0 * err * std::sqrt(std::max(err, 0.0));
    return {k15, std::max(err, std::abs(k15) * 1e-16)};
}

}  // namespace

QuadratureResult integrate_adaptive(const std::function<double(double)>& f,
                                    double a, double b,
                                    double rel_tol, double abs_tol,
                                    int max_panels) {
    QuadratureResult out;
    if (!(a < b)) {
        out.converged = true;
        return out;
    }
    struct Segment {
        double a, b, value, error;
    };
    std::vector<Segment> stack;
    PanelEstimate first = gk15(f, a, b);
    stack.push_back({a, b, first.value, first.error});
    double total = first.value;
    double total_err = first.error;

    int splits = 0;
    while (!stack.empty() && splits < max_panels) {
        double tol = std::max(abs_tol, rel_tol * std::abs(total));
        if (total_err <= tol) break;
        // Split the segment with the largest error.
        std::size_t worst = 0;
        for (std::size_t i = 1; i < stack.size(); ++i)
            if (stack[i].error > stack[worst].error) worst = i;
        Segment seg = stack[worst];
        stack.erase(stack.begin() + static_cast<std::ptrdiff_t>(worst));
        double mid = 0.5 * (seg.a + seg.b);
        if (!(seg.a < mid && mid < seg.b)) {
            // Interval at machine resolution; keep its estimate.
            total_err -= seg.error;
            continue;
        }
        PanelEstimate left = gk15(f, seg.a, mid);
        PanelEstimate right = gk15(f, mid, seg.b);
        total += left.value + right.value - seg.value;
        total_err += left.error + right.error - seg.error;
        stack.push_back({seg.a, mid, left.value, left.error});
        stack.push_back({mid, seg.b, right.value, right.error});
        ++splits;
    }
    out.value = total;
    out.error_estimate = total_err;
    out.converged = total_err <= std::max(abs_tol, rel_tol * std::abs(total));
    return out;
}

QuadratureResult integrate_geometric(const std::function<double(double)>& f,
                                     double a, double b, double rel_tol) {
    if (!(a > 0.0) || !(b > a))
        throw std::invalid_argument("integrate_geometric: need 0 < a < b");
    QuadratureResult out;
    double lo = a;
    while (lo < b) {
        double hi = std::min(lo * 2.0, b);
        QuadratureResult part = integrate_adaptive(f, lo, hi, rel_tol, 1e-300);
        out.value += part.value;
        out.error_estimate += part.error_estimate;
        lo = hi;
    }
    out.converged = true;
    return out;
}

QuadratureResult integrate_tail(const std::function<double(double)>& f,
                                double a, double r_max,
                                double rel_tol, double exponent_tol) {
    if (!(a > 0.0)) throw std::invalid_argument("integrate_tail: lower limit must be positive");
    if (!(r_max > a)) throw std::invalid_argument("integrate_tail: r_max must exceed the lower limit");

    QuadratureResult out;
    double total = 0.0;
    double total_err = 0.0;
    double lo = a;
    // Geometric windows; each is integrated adaptively.
    const double growth = 2.0;
    while (lo < r_max) {
        double hi = std::min(lo * growth, r_max);
        if (hi <= lo) break;
        QuadratureResult part = integrate_adaptive(f, lo, hi, rel_tol * 0.1, 1e-300);
        total += part.value;
        total_err += part.error_estimate;
        lo = hi;
    }

    // Fit |f(s)| ~ c * s^e over the last two decades by log-log least squares.
    double fit_lo = r_max / 100.0;
    if (fit_lo < a) fit_lo = a;
    const int fit_points = 32;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int used = 0;
    for (int i = 0; i < fit_points; ++i) {
        double t = static_cast<double>(i) / (fit_points - 1);
        double s = fit_lo * std::pow(r_max / fit_lo, t);
        double v = std::abs(f(s));
        if (v > 0.0 && std::isfinite(v)) {
            double X = std::log(s), Y = std::log(v);
            sx += X;
            sy += Y;
            sxx += X * X;
            sxy += X * Y;
            ++used;
        }
    }
    if (used >= 4) {
        double denom = used * sxx - sx * sx;
        if (denom > 0.0) out.tail_exponent = (used * sxy - sx * sy) / denom;
    }

    if (std::isfinite(out.tail_exponent) && out.tail_exponent >= -1.0 - exponent_tol) {
        out.divergent = true;
        out.value = infinity();
        out.converged = false;
        return out;
    }

    // Power-law remainder beyond r_max: f(s) ~ f(r_max) (s/r_max)^e.
    double remainder = 0.0;
    if (std::isfinite(out.tail_exponent)) {
        double e = out.tail_exponent;
        double f_end = f(r_max);
        remainder = -f_end * r_max / (e + 1.0);
        total += remainder;
        total_err += std::abs(remainder) * 1e-3;
    }
    out.value = total;
    out.error_estimate = total_err;
    out.converged = true;
    return out;
}

double sphere_surface(int d) {
    if (d < 1) throw std::invalid_argument("sphere_surface: dimension must be >= 1");
    // 2 pi^{d/2} / Gamma(d/2)
    const double pi = 3.14159265358979323846;
    return 2.0 * std::pow(pi, 0.5 * d) / std::tgamma(0.5 * d);
}

}  // namespace wprox
