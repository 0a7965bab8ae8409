#pragma once

#include <functional>
#include <string>
#include <vector>

#include "wprox/conjugate.hpp"
#include "wprox/quadrature.hpp"

namespace wprox {

enum class Finiteness { Finite, Infinite, FiniteSufficient, Undecided };

// Decision record: which clause fired and the parameters it saw. The W2 rule
// is sufficient only and never reports Infinite.
struct TailVerdict {
    Finiteness verdict = Finiteness::Undecided;
    std::string rule_fired;
    int dim = 0;          // ambient d, or d* for the submanifold rule
    double alpha = 0.0;   // 1.0 for KL
    bool kl = false;
    double beta1 = 0.0;
    double beta2 = 0.0;

    bool finite() const {
        return verdict == Finiteness::Finite || verdict == Finiteness::FiniteSufficient;
    }
};

// W1 proximal, alpha > 1: finite iff
//   (i)  d < beta1 <= d+1 and beta2 - beta1 < (beta1 - d)/(alpha - 1), or
//   (ii) beta1 > d + 1.
TailVerdict finiteness_w1(int d, const AlphaValue& a, double beta1, double beta2);

// W1 proximal of KL: finite for all beta1, beta2 > d.
TailVerdict finiteness_w1_kl(int d, double beta1, double beta2);

// W2 proximal, alpha > 1 (sufficient condition only):
//   (i)  d < beta1 <= d+2 and beta2 - beta1 < (beta1 - d)/(alpha - 1), or
//   (ii) beta1 > d + 2.
TailVerdict finiteness_w2(int d, const AlphaValue& a, double beta1, double beta2);

// Submanifold variant: the W1 clauses with d replaced by the intrinsic
// dimension d*.
TailVerdict finiteness_lowdim(int d_star, const AlphaValue& a, double beta1,
                              double beta2);

// Truncated integral of the divergence witness from the infinite regime:
//   integral over 1 <= |x| <= r_max of
//     surface * s^{d-1} (tau s^{e1} - tau^{alpha/(alpha-1)} s^{e2}) ds,
// where the exponents depend on whether beta2 - beta1 >= 1/(alpha-1)
// (witness tau|x|) or not (witness tau|x|^{(alpha-1)(beta2-beta1)}).
// Grows without bound in r_max exactly in the infinite regime.
double witness_integral(int d, const AlphaValue& a, double beta1, double beta2,
                        double tau, double r_max);

// Support description for direct quadrature of an alpha-divergence between
// 1-D or radially symmetric densities.
struct Interval {
    double lo = 0.0;
    double hi = 0.0;  // may be +inf
};

struct SupportSpec {
    std::vector<Interval> q_positive;  // q > 0 on these intervals
    std::vector<Interval> p_only;      // p > 0 and q = 0 (singular part)
    int radial_dim = 0;                // 0 = line integral; d >= 1 adds the sphere factor
};

struct DivergenceEstimate {
    double value = 0.0;    // +inf when divergent
    bool is_finite = true;
    std::string reason;    // why +inf was declared, if it was
};

// Direct integral of f_alpha(p/q) dQ over the described support. Declares
// +inf when p carries mass on the singular set (alpha >= 1) or when the
// integrand's fitted tail exponent admits no convergent integral.
DivergenceEstimate divergence_quadrature(
    const std::function<double(double)>& p_density,
    const std::function<double(double)>& q_density, const AlphaValue& a,
    const SupportSpec& support, double r_max = 1e6, double rel_tol = 1e-8);

}  // namespace wprox
