#include "wprox/finiteness.hpp"

#include <cmath>
#include <stdexcept>

namespace wprox {

namespace {

void check_betas(int d, double beta1, double beta2) {
    if (d < 1) throw std::invalid_argument("finiteness: dimension must be >= 1");
    if (!(beta1 > d) || !(beta2 > d))
        throw std::invalid_argument(
            "finiteness: beta <= d is not the tail of a probability density");
}

TailVerdict make_verdict(Finiteness v, std::string rule, int d,
                         const AlphaValue& a, double b1, double b2) {
    TailVerdict out;
    out.verdict = v;
    out.rule_fired = std::move(rule);
    out.dim = d;
    out.kl = a.is_kl();
    out.alpha = a.is_kl() ? 1.0 : a.alpha();
    out.beta1 = b1;
    out.beta2 = b2;
    return out;
}

TailVerdict w1_clauses(int d, const AlphaValue& a, double beta1, double beta2,
                       const char* tag) {
    check_betas(d, beta1, beta2);
    if (a.is_kl() || !(a.alpha() > 1.0))
        throw std::invalid_argument("finiteness_w1: requires alpha > 1");
    std::string prefix(tag);
    if (beta1 > d + 1.0)
        return make_verdict(Finiteness::Finite, prefix + ".ii", d, a, beta1, beta2);
    // Here d < beta1 <= d+1 (beta1 = d+1 falls into clause (i)).
    if (beta2 - beta1 < (beta1 - d) / (a.alpha() - 1.0))
        return make_verdict(Finiteness::Finite, prefix + ".i", d, a, beta1, beta2);
    // The boundary beta2 - beta1 = (beta1 - d)/(alpha - 1) is covered by the
    // necessity construction and classified infinite.
    return make_verdict(Finiteness::Infinite, prefix + ".necessity", d, a, beta1, beta2);
}

}  // namespace

TailVerdict finiteness_w1(int d, const AlphaValue& a, double beta1, double beta2) {
    return w1_clauses(d, a, beta1, beta2, "thm1");
}

TailVerdict finiteness_w1_kl(int d, double beta1, double beta2) {
    check_betas(d, beta1, beta2);
    return make_verdict(Finiteness::Finite, "kl.proposition", d, AlphaValue::kl(),
                        beta1, beta2);
}

TailVerdict finiteness_w2(int d, const AlphaValue& a, double beta1, double beta2) {
    check_betas(d, beta1, beta2);
    if (a.is_kl() || !(a.alpha() > 1.0))
        throw std::invalid_argument("finiteness_w2: requires alpha > 1");
    if (beta1 > d + 2.0)
        return make_verdict(Finiteness::FiniteSufficient, "thm3.ii", d, a, beta1, beta2);
    if (beta2 - beta1 < (beta1 - d) / (a.alpha() - 1.0))
        return make_verdict(Finiteness::FiniteSufficient, "thm3.i", d, a, beta1, beta2);
    return make_verdict(Finiteness::Undecided, "thm3.undecided", d, a, beta1, beta2);
}

TailVerdict finiteness_lowdim(int d_star, const AlphaValue& a, double beta1,
                              double beta2) {
    if (d_star < 1) throw std::invalid_argument("finiteness_lowdim: d* must be >= 1");
    return w1_clauses(d_star, a, beta1, beta2, "cor1");
}

double witness_integral(int d, const AlphaValue& a, double beta1, double beta2,
                        double tau, double r_max) {
    TailVerdict v = finiteness_w1(d, a, beta1, beta2);
    if (v.verdict != Finiteness::Infinite)
        throw std::invalid_argument(
            "witness_integral: only defined in the infinite regime");
    if (!(tau > 0.0)) throw std::invalid_argument("witness_integral: tau must be positive");
    if (!(r_max > 1.0)) throw std::invalid_argument("witness_integral: r_max must exceed 1");

    double alpha = a.alpha();
    double conj_exp = alpha / (alpha - 1.0);
    double e1, e2;
    if (beta2 - beta1 >= 1.0 / (alpha - 1.0)) {
        e1 = 1.0 - beta1;
        e2 = conj_exp - beta2;
    } else {
        e1 = (alpha - 1.0) * (beta2 - beta1) - beta1;
        e2 = e1;
    }
    double surface = sphere_surface(d);
    double tau_conj = std::pow(tau, conj_exp);
    auto integrand = [&](double s) {
        return surface * std::pow(s, d - 1) *
               (tau * std::pow(s, e1) - tau_conj * std::pow(s, e2));
    };
    return integrate_geometric(integrand, 1.0, r_max, 1e-10).value;
}

DivergenceEstimate divergence_quadrature(
    const std::function<double(double)>& p_density,
    const std::function<double(double)>& q_density, const AlphaValue& a,
    const SupportSpec& support, double r_max, double rel_tol) {
    if (!a.dual_supported())
        throw std::invalid_argument("divergence_quadrature: requires alpha > 1 or KL");

    DivergenceEstimate out;

    // Mass of P on the singular set forces +inf for alpha >= 1.
    double singular_mass = 0.0;
    for (const Interval& iv : support.p_only) {
        double hi = std::isinf(iv.hi) ? r_max : iv.hi;
        singular_mass += integrate_adaptive(p_density, iv.lo, hi, 1e-10, 1e-14).value;
    }
    if (singular_mass > 1e-12) {
        out.value = infinity();
        out.is_finite = false;
        out.reason = "P carries mass where Q vanishes";
        return out;
    }

    double surface = support.radial_dim >= 1 ? sphere_surface(support.radial_dim) : 1.0;
    auto integrand = [&](double s) {
        double q = q_density(s);
        double p = p_density(s);
        double g = f_alpha(q > 0.0 ? p / q : 0.0, a) * q;
        if (support.radial_dim >= 1) g *= surface * std::pow(s, support.radial_dim - 1);
        return g;
    };

    double total = 0.0;
    for (const Interval& iv : support.q_positive) {
        if (std::isinf(iv.hi)) {
            double lo = std::max(iv.lo, 1e-12);
            QuadratureResult tail = integrate_tail(integrand, lo, r_max, rel_tol);
            if (tail.divergent) {
                out.value = infinity();
                out.is_finite = false;
                out.reason = "integrand tail exponent admits no convergent integral";
                return out;
            }
            total += tail.value;
        } else {
            total += integrate_adaptive(integrand, iv.lo, iv.hi, rel_tol, 1e-14).value;
        }
    }
    out.value = total;
    return out;
}

}  // namespace wprox
