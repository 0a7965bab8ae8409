#pragma once

#include <cstddef>
#include <span>

namespace wprox {

// The alpha family f_alpha(x) = (x^alpha - 1) / (alpha (alpha - 1)) together
// with the alpha -> 1 limit (KL, f(x) = x ln x) kept as an explicit branch.
class AlphaValue {
public:
    static AlphaValue power(double alpha);
    static AlphaValue kl() { return AlphaValue(true, 1.0); }

    bool is_kl() const { return kl_; }
    double alpha() const { return alpha_; }

    // True when the dual machinery (conjugate derivative, shift, solvers)
    // supports this value: alpha > 1 or KL.
    bool dual_supported() const { return kl_ || alpha_ > 1.0; }

private:
    AlphaValue(bool kl, double alpha) : kl_(kl), alpha_(alpha) {}
    bool kl_;
    double alpha_;
};

// f_alpha(x) for x >= 0. KL branch defines f(0) = 0 by limit.
double f_alpha(double x, const AlphaValue& a);

// Convex conjugate f_alpha^*(y). Returns +inf where the conjugate is
// infinite (y >= 0 for alpha in (0,1)). Output is clamped at `ceiling` to
// avoid overflow; saturation is reported through `saturated` when provided.
double f_alpha_star(double y, const AlphaValue& a, double ceiling = 1e300,
                    bool* saturated = nullptr);

// Derivative of the conjugate; defined for alpha > 1 and KL only.
double f_alpha_star_prime(double y, const AlphaValue& a);

// The y at which f_alpha_star_prime equals 1: 1/(alpha-1) for the power
// branch, 1 for KL. Used to bracket the shift bisection.
double conjugate_unit_slope_point(const AlphaValue& a);

struct ShiftResult {
    double lambda_value = 0.0;  // value of the shift functional
    double nu_star = 0.0;       // minimizing shift
    int iterations = 0;
    bool converged = false;
};

// Shift functional Lambda[gamma] = inf_nu { nu + E_Q[f_alpha^*(gamma - nu)] }
// for a discrete measure Q given by (gamma_values, weights). Solved by
// bisection on the monotone derivative h(nu) = 1 - E_Q[f*'(gamma - nu)].
ShiftResult shift_functional(std::span<const double> gamma_values,
                             std::span<const double> weights,
                             const AlphaValue& a,
                             double tolerance = 1e-10);

}  // namespace wprox
