#include "wprox/conjugate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace wprox {

AlphaValue AlphaValue::power(double alpha) {
    if (!(alpha > 0.0)) throw std::invalid_argument("AlphaValue: alpha must be positive");
    if (alpha == 1.0)
        throw std::invalid_argument("AlphaValue: alpha = 1 is the KL marker, use AlphaValue::kl()");
    return AlphaValue(false, alpha);
}

double f_alpha(double x, const AlphaValue& a) {
    if (!(x >= 0.0)) throw std::invalid_argument("f_alpha: x must be nonnegative");
    if (a.is_kl()) {
        if (x == 0.0) return 0.0;  // limit of x ln x
        return x * std::log(x);
    }
    double al = a.alpha();
    return (std::pow(x, al) - 1.0) / (al * (al - 1.0));
}

double f_alpha_star(double y, const AlphaValue& a, double ceiling, bool* saturated) {
    if (saturated) *saturated = false;
    double v;
    if (a.is_kl()) {
        v = std::exp(y - 1.0);
    } else {
        double al = a.alpha();
        if (al > 1.0) {
            double c = 1.0 / (al * (al - 1.0));
            if (y <= 0.0) return c;
            double expo = al / (al - 1.0);
            v = std::pow(al - 1.0, expo) / al * std::pow(y, expo) + c;
        } else {
            // alpha in (0, 1): infinite on y >= 0, finite on the negative branch.
            if (y >= 0.0) return std::numeric_limits<double>::infinity();
            double expo = al / (1.0 - al);
            v = std::pow(1.0 - al, -expo) / al * std::pow(-y, -expo) -
                1.0 / (al * (1.0 - al));
        }
    }
    if (v > ceiling || std::isinf(v)) {
        if (saturated) *saturated = true;
        return ceiling;
    }
    return v;
}

double f_alpha_star_prime(double y, const AlphaValue& a) {
    if (a.is_kl()) return std::exp(y - 1.0);
    double al = a.alpha();
    if (!(al > 1.0))
        throw std::invalid_argument("f_alpha_star_prime: requires alpha > 1 or KL");
    if (y <= 0.0) return 0.0;
    return std::pow((al - 1.0) * y, 1.0 / (al - 1.0));
}

double conjugate_unit_slope_point(const AlphaValue& a) {
    return a.is_kl() ? 1.0 : 1.0 / (a.alpha() - 1.0);
}

namespace {

double lambda_at(std::span<const double> gamma, std::span<const double> w,
                 const AlphaValue& a, double nu) {
    double acc = 0.0;
    for (std::size_t i = 0; i < gamma.size(); ++i)
        acc += w[i] * f_alpha_star(gamma[i] - nu, a);
    return nu + acc;
}

double shift_derivative(std::span<const double> gamma, std::span<const double> w,
                        const AlphaValue& a, double nu) {
    double acc = 0.0;
    for (std::size_t i = 0; i < gamma.size(); ++i)
        acc += w[i] * f_alpha_star_prime(gamma[i] - nu, a);
    return 1.0 - acc;
}

}  // namespace

ShiftResult shift_functional(std::span<const double> gamma_values,
                             std::span<const double> weights,
                             const AlphaValue& a, double tolerance) {
    if (gamma_values.size() != weights.size() || gamma_values.empty())
        throw std::invalid_argument("shift_functional: gamma/weights size mismatch");
    if (!a.dual_supported())
        throw std::invalid_argument("shift_functional: requires alpha > 1 or KL");
    double wsum = 0.0;
    for (double w : weights) {
        if (!(w >= 0.0)) throw std::invalid_argument("shift_functional: negative weight");
        wsum += w;
    }
    if (std::abs(wsum - 1.0) > 1e-9)
        throw std::invalid_argument("shift_functional: weights must sum to 1");

    double gmin = gamma_values[0], gmax = gamma_values[0];
    for (double g : gamma_values) {
        gmin = std::min(gmin, g);
        gmax = std::max(gmax, g);
    }

    // h(nu) = 1 - E[f*'(gamma - nu)] is nondecreasing in nu.
    // At nu = gmax the conjugate derivative is <= f*'(0) <= e^{-1} < 1, so
    // h > 0 there; expand downward from gmin - y0 until h <= 0.
    double hi = gmax;
    double y0 = conjugate_unit_slope_point(a);
    double s = std::max(1.0, (gmax - gmin) * 0.5);
    double lo = gmin - y0 - s;
    ShiftResult out;
    int expansions = 0;
    while (shift_derivative(gamma_values, weights, a, lo) > 0.0) {
        s *= 2.0;
        lo = gmin - y0 - s;
        if (++expansions > 200)
            throw std::runtime_error("shift_functional: bracket expansion failed");
    }

    int iters = 0;
    double h_mid = 0.0;
    while (hi - lo > tolerance && iters < 400) {
        double mid = 0.5 * (lo + hi);
        h_mid = shift_derivative(gamma_values, weights, a, mid);
        if (h_mid > 0.0)
            hi = mid;
        else
            lo = mid;
        ++iters;
    }
    out.nu_star = 0.5 * (lo + hi);
    out.lambda_value = lambda_at(gamma_values, weights, a, out.nu_star);
    out.iterations = iters;
    out.converged = (hi - lo) <= tolerance;
    return out;
}

}  // namespace wprox
