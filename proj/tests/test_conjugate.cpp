#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "wprox/conjugate.hpp"
#include "wprox/rng.hpp"

using namespace wprox;

namespace {

// Independent conjugate oracle: sup over a dense x-grid of x*y - f(x).
double conjugate_by_grid(double y, const AlphaValue& a) {
    double best = -1e308;
    for (double x = 0.0; x <= 50.0; x += 1e-4)
        best = std::max(best, x * y - f_alpha(x, a));
    return best;
}

// Independent shift oracle: dense grid over nu.
double shift_by_grid(const std::vector<double>& gamma, const std::vector<double>& w,
                     const AlphaValue& a, double lo, double hi, double step) {
    double best = 1e308;
    for (double nu = lo; nu <= hi; nu += step) {
        double v = nu;
        for (std::size_t i = 0; i < gamma.size(); ++i)
            v += w[i] * f_alpha_star(gamma[i] - nu, a);
        best = std::min(best, v);
    }
    return best;
}

}  // namespace

TEST_CASE("f_alpha closed forms") {
    AlphaValue a2 = AlphaValue::power(2.0);
    CHECK(f_alpha(1.0, a2) == doctest::Approx(0.0));
    CHECK(f_alpha(2.0, a2) == doctest::Approx(1.5));
    CHECK(f_alpha(1.0, AlphaValue::kl()) == doctest::Approx(0.0));
    CHECK(f_alpha(0.0, AlphaValue::kl()) == doctest::Approx(0.0));
    CHECK_THROWS_AS(f_alpha(-0.5, a2), std::invalid_argument);
    CHECK_THROWS_AS(AlphaValue::power(0.0), std::invalid_argument);
    CHECK_THROWS_AS(AlphaValue::power(1.0), std::invalid_argument);
}

TEST_CASE("conjugate values against the grid oracle") {
    AlphaValue a2 = AlphaValue::power(2.0);
    CHECK(f_alpha_star(1.0, a2) == doctest::Approx(1.0));
    CHECK(f_alpha_star(1.0, a2) == doctest::Approx(conjugate_by_grid(1.0, a2)).epsilon(1e-6));
    CHECK(f_alpha_star(-5.0, a2) == doctest::Approx(0.5));
    CHECK(std::isinf(f_alpha_star(0.3, AlphaValue::power(0.5))));
    CHECK(std::isinf(f_alpha_star(0.0, AlphaValue::power(0.5))));
    // Negative branch for alpha in (0,1) stays finite.
    CHECK(std::isfinite(f_alpha_star(-2.0, AlphaValue::power(0.5))));
    // KL conjugate.
    CHECK(f_alpha_star(1.0, AlphaValue::kl()) == doctest::Approx(1.0));
    CHECK(f_alpha_star(1.0, AlphaValue::kl()) ==
          doctest::Approx(conjugate_by_grid(1.0, AlphaValue::kl())).epsilon(1e-5));

    // Saturation guard.
    bool saturated = false;
    double v = f_alpha_star(800.0, AlphaValue::kl(), 1e300, &saturated);
    CHECK(saturated);
    CHECK(v == doctest::Approx(1e300));
}

TEST_CASE("conjugate derivative closed forms and finite differences") {
    AlphaValue a2 = AlphaValue::power(2.0);
    AlphaValue a3 = AlphaValue::power(3.0);
    CHECK(f_alpha_star_prime(3.0, a2) == doctest::Approx(3.0));
    CHECK(f_alpha_star_prime(-1.0, a2) == doctest::Approx(0.0));
    CHECK(f_alpha_star_prime(2.0, a3) == doctest::Approx(2.0));
    CHECK_THROWS_AS(f_alpha_star_prime(1.0, AlphaValue::power(0.5)), std::invalid_argument);

    for (const AlphaValue& a : {AlphaValue::power(1.5), a2, a3, AlphaValue::kl()}) {
        for (double y = 0.1; y <= 10.0; y *= 1.7) {
            double h = 1e-6 * std::max(1.0, y);
            double fd = (f_alpha_star(y + h, a) - f_alpha_star(y - h, a)) / (2.0 * h);
            double an = f_alpha_star_prime(y, a);
            CHECK(std::abs(fd - an) <= 1e-6 * std::max(1.0, std::abs(an)));
        }
    }
}

TEST_CASE("conjugate convexity and Fenchel-Young") {
    CounterRng rng(11);
    for (const AlphaValue& a :
         {AlphaValue::power(1.5), AlphaValue::power(2.0), AlphaValue::power(4.0),
          AlphaValue::kl()}) {
        for (int trial = 0; trial < 200; ++trial) {
            double y1 = 20.0 * rng.next_uniform() - 10.0;
            double y2 = 20.0 * rng.next_uniform() - 10.0;
            double t = rng.next_uniform();
            double lhs = f_alpha_star(t * y1 + (1.0 - t) * y2, a);
            double rhs = t * f_alpha_star(y1, a) + (1.0 - t) * f_alpha_star(y2, a);
            CHECK(lhs <= rhs + 1e-12 * (1.0 + std::abs(rhs)));

            double x = 5.0 * rng.next_uniform();
            double y = 10.0 * rng.next_uniform() - 5.0;
            CHECK(f_alpha_star(y, a) >= x * y - f_alpha(x, a) - 1e-12);
        }
        // Equality at the subgradient point y = f'(x).
        for (double x : {0.25, 1.0, 2.0, 7.5}) {
            double y = a.is_kl() ? std::log(x) + 1.0
                                 : std::pow(x, a.alpha() - 1.0) / (a.alpha() - 1.0);
            double gap = f_alpha_star(y, a) - (x * y - f_alpha(x, a));
            CHECK(std::abs(gap) <= 1e-8);
        }
    }
}

TEST_CASE("shift functional: constant potential") {
    AlphaValue a2 = AlphaValue::power(2.0);
    std::vector<double> gamma = {3.0, 3.0, 3.0};
    std::vector<double> w = {0.2, 0.5, 0.3};
    ShiftResult r = shift_functional(gamma, w, a2);
    CHECK(r.converged);
    CHECK(r.lambda_value == doctest::Approx(3.0).epsilon(1e-8));
    CHECK(r.nu_star == doctest::Approx(2.0).epsilon(1e-6));  // c - 1/(alpha-1)

    ShiftResult rkl = shift_functional(gamma, w, AlphaValue::kl());
    CHECK(rkl.lambda_value == doctest::Approx(3.0).epsilon(1e-8));
    CHECK(rkl.nu_star == doctest::Approx(2.0).epsilon(1e-6));  // c - 1
}

TEST_CASE("shift functional against the grid oracle") {
    AlphaValue a2 = AlphaValue::power(2.0);
    std::vector<double> gamma = {0.0, 2.0};
    std::vector<double> w = {0.5, 0.5};
    ShiftResult r = shift_functional(gamma, w, a2);
    double oracle = shift_by_grid(gamma, w, a2, -5.0, 5.0, 1e-4);
    CHECK(r.lambda_value == doctest::Approx(oracle).epsilon(1e-6));
    // Lambda is the infimum: no probed nu does better.
    CHECK(r.lambda_value <= oracle + 1e-8);
}

TEST_CASE("shift equivariance and minimality") {
    CounterRng rng(7);
    for (const AlphaValue& a :
         {AlphaValue::power(1.5), AlphaValue::power(2.0), AlphaValue::kl()}) {
        for (int trial = 0; trial < 30; ++trial) {
            std::size_t n = 2 + rng.next_u64() % 6;
            std::vector<double> gamma(n), shifted(n), w(n);
            double wsum = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                gamma[i] = 6.0 * rng.next_uniform() - 3.0;
                shifted[i] = gamma[i] + 7.0;
                w[i] = rng.next_uniform_pos();
                wsum += w[i];
            }
            for (auto& x : w) x /= wsum;
            ShiftResult r0 = shift_functional(gamma, w, a);
            ShiftResult r7 = shift_functional(shifted, w, a);
            CHECK(r7.lambda_value == doctest::Approx(r0.lambda_value + 7.0).epsilon(1e-8));
            // Value is a lower envelope over probed shifts.
            for (int probe = 0; probe < 20; ++probe) {
                double nu = 12.0 * rng.next_uniform() - 6.0;
                double v = nu;
                for (std::size_t i = 0; i < n; ++i)
                    v += w[i] * f_alpha_star(gamma[i] - nu, a);
                CHECK(r0.lambda_value <= v + 1e-9);
            }
        }
    }
}

TEST_CASE("shift functional input validation") {
    AlphaValue a2 = AlphaValue::power(2.0);
    std::vector<double> gamma = {0.0, 1.0};
    std::vector<double> bad_w = {0.9, 0.3};
    CHECK_THROWS_AS(shift_functional(gamma, bad_w, a2), std::invalid_argument);
    std::vector<double> neg_w = {1.2, -0.2};
    CHECK_THROWS_AS(shift_functional(gamma, neg_w, a2), std::invalid_argument);
    std::vector<double> w = {0.5, 0.5};
    CHECK_THROWS_AS(shift_functional(gamma, w, AlphaValue::power(0.5)),
                    std::invalid_argument);
}
