#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "wprox/discrete_dual.hpp"
#include "wprox/rng.hpp"
#include "wprox/samplers.hpp"
#include "wprox/wasserstein.hpp"

using namespace wprox;

namespace {

SampleSet random_set(CounterRng& rng, int d, std::size_t n, double spread = 2.0) {
    std::vector<double> pts(n * static_cast<std::size_t>(d));
    for (auto& x : pts) x = spread * (2.0 * rng.next_uniform() - 1.0);
    return SampleSet(d, std::move(pts));
}

AlphaValue alpha_cycle(int k) {
    switch (k % 4) {
        case 0: return AlphaValue::power(1.5);
        case 1: return AlphaValue::power(2.0);
        case 2: return AlphaValue::power(4.0);
        default: return AlphaValue::kl();
    }
}

}  // namespace

TEST_CASE("lipschitz projection basics") {
    // Feasible input unchanged.
    std::vector<double> dist = {0.0, 1.0, 1.0, 0.0};
    auto unchanged = project_lipschitz({0.25, 0.5}, dist, 2, 1.0);
    CHECK(unchanged[0] == doctest::Approx(0.25));
    CHECK(unchanged[1] == doctest::Approx(0.5));

    // Symmetric pairwise projection.
    auto proj = project_lipschitz({0.0, 3.0}, dist, 2, 1.0);
    CHECK(proj[0] == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(proj[1] == doctest::Approx(2.0).epsilon(1e-9));

    // Random inputs land within tolerance of the polytope.
    CounterRng rng(5);
    for (int trial = 0; trial < 20; ++trial) {
        std::size_t n = 3 + rng.next_u64() % 10;
        std::vector<double> pts(n), g(n);
        for (auto& x : pts) x = 4.0 * rng.next_uniform();
        for (auto& x : g) x = 8.0 * rng.next_uniform() - 4.0;
        std::vector<double> D(n * n, 0.0);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) D[i * n + j] = std::abs(pts[i] - pts[j]);
        auto out = project_lipschitz(g, D, n, 0.7, 1e-10);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                CHECK(std::abs(out[i] - out[j]) <= 0.7 * D[i * n + j] + 1e-9);
    }
    CHECK_THROWS_AS(project_lipschitz({0.0}, {0.0, 1.0}, 1, 1.0), std::invalid_argument);
}

TEST_CASE("identity instances solve to zero") {
    CounterRng rng(41);
    for (int k = 0; k < 6; ++k) {
        int d = 1 + static_cast<int>(rng.next_u64() % 3);
        SampleSet p = random_set(rng, d, 4 + rng.next_u64() % 12);
        DualPotential sol = solve_discrete_dual(p, p, alpha_cycle(k), 1.0);
        CHECK(std::abs(sol.objective) <= 1e-6);
    }
}

TEST_CASE("point masses at 0 and 1 saturate the lipschitz cap") {
    SampleSet p(1, {0.0});
    SampleSet q(1, {1.0});
    DualPotential sol = solve_discrete_dual(p, q, AlphaValue::power(2.0), 1.0);
    CHECK(sol.objective == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(sol.corollary3_cap == doctest::Approx(1.0));
    // The potential decreases from the particle to the target at full slope.
    REQUIRE(sol.gamma.size() == 2);
    double g0 = sol.joint_points[0] == 0.0 ? sol.gamma[0] : sol.gamma[1];
    double g1 = sol.joint_points[0] == 0.0 ? sol.gamma[1] : sol.gamma[0];
    CHECK(g0 - g1 == doctest::Approx(1.0).epsilon(1e-6));

    // Grid-search oracle over (gamma(0) - gamma(1), nu): feasible differences
    // are [-1, 1]; the objective is diff - Lambda and Lambda depends only on
    // gamma(1), so the maximum is the cap.
    double best = -1e308;
    for (int k = -1000; k <= 1000; ++k) best = std::max(best, k * 1e-3);
    CHECK(sol.objective == doctest::Approx(best).epsilon(1e-6));
}

TEST_CASE("3-point instance matches the dense grid oracle") {
    // The objective is exactly shift invariant (Lambda[g + c] = Lambda[g] + c),
    // so the [-2,2]^3 grid collapses to the gamma_1 = 0 slice at the same
    // maximum; the slice is searched at step 1e-2.
    SampleSet p(1, {0.0, 0.6, 1.5}, {0.5, 0.3, 0.2});
    SampleSet q(1, {0.0, 0.6, 1.5}, {0.2, 0.3, 0.5});
    AlphaValue a2 = AlphaValue::power(2.0);
    const double L = 1.0;

    double oracle = -1e308;
    std::vector<double> w = {0.2, 0.3, 0.5};
    for (double g2 = -2.0; g2 <= 2.0 + 1e-12; g2 += 1e-2)
        for (double g3 = -2.0; g3 <= 2.0 + 1e-12; g3 += 1e-2) {
            if (std::abs(g2) > L * 0.6 + 1e-12) continue;
            if (std::abs(g3) > L * 1.5 + 1e-12) continue;
            if (std::abs(g3 - g2) > L * 0.9 + 1e-12) continue;
            std::vector<double> gamma = {0.0, g2, g3};
            ShiftResult sr = shift_functional(gamma, w, a2, 1e-10);
            double obj = 0.5 * 0.0 + 0.3 * g2 + 0.2 * g3;
            obj = 0.5 * gamma[0] + 0.3 * gamma[1] + 0.2 * gamma[2] - sr.lambda_value;
            oracle = std::max(oracle, obj);
        }

    DualPotential sol = solve_discrete_dual(p, q, a2, L);
    CHECK(sol.objective == doctest::Approx(oracle).epsilon(2e-2));
    CHECK(sol.objective >= oracle - 1e-6);  // grid value is feasible
}

TEST_CASE("corollary-3 cap on 100 random instances") {
    CounterRng rng(2024);
    for (int trial = 0; trial < 100; ++trial) {
        int d = 1 + static_cast<int>(rng.next_u64() % 3);
        std::size_t n = 2 + rng.next_u64() % 63;
        std::size_t m = 2 + rng.next_u64() % 63;
        SampleSet p = random_set(rng, d, n);
        SampleSet q = random_set(rng, d, m);
        AlphaValue a = alpha_cycle(trial);
        double L = 0.5 + 1.5 * rng.next_uniform();
        DiscreteDualOptions opt;
        opt.tol = 1e-6;
        opt.max_iter = 3000;
        opt.check_cap = false;
        DualPotential sol = solve_discrete_dual(p, q, a, L, opt);
        double cap = L * w1_exact(p, q);
        double scale = std::abs(cap);
        CHECK(sol.objective <= cap + 1e-6 * (1.0 + scale));
        CHECK(sol.objective >= -1e-9);  // nonnegativity
    }
}

TEST_CASE("lemma-1 pseudo-triangle and corollary-2 composition") {
    CounterRng rng(31337);
    AlphaValue a2 = AlphaValue::power(2.0);
    for (int trial = 0; trial < 100; ++trial) {
        int d = 1 + static_cast<int>(rng.next_u64() % 2);
        SampleSet p = random_set(rng, d, 3 + rng.next_u64() % 10);
        SampleSet eta = random_set(rng, d, 3 + rng.next_u64() % 10);
        SampleSet q = random_set(rng, d, 3 + rng.next_u64() % 10);
        AlphaValue a = alpha_cycle(trial);
        DiscreteDualOptions opt;
        opt.tol = 1e-7;
        opt.max_iter = 5000;
        double pq = solve_discrete_dual(p, q, a, 1.0, opt).objective;
        double eq = solve_discrete_dual(eta, q, a, 1.0, opt).objective;
        double w = w1_exact(p, eta);
        CHECK(pq <= w + eq + 1e-5);
        (void)a2;
    }
}

TEST_CASE("monotone in the lipschitz budget") {
    CounterRng rng(808);
    for (int trial = 0; trial < 10; ++trial) {
        int d = 1 + static_cast<int>(rng.next_u64() % 2);
        SampleSet p = random_set(rng, d, 8);
        SampleSet q = random_set(rng, d, 8);
        AlphaValue a = alpha_cycle(trial);
        double prev = -1.0;
        for (double L : {0.25, 0.5, 1.0, 2.0}) {
            double obj = solve_discrete_dual(p, q, a, L).objective;
            CHECK(obj >= prev - 1e-6);
            prev = obj;
        }
    }
}

TEST_CASE("input validation") {
    SampleSet p(1, {0.0});
    SampleSet q(2, {0.0, 0.0});
    CHECK_THROWS_AS(solve_discrete_dual(p, q, AlphaValue::power(2.0), 1.0),
                    std::invalid_argument);
    SampleSet r(1, {1.0});
    CHECK_THROWS_AS(solve_discrete_dual(p, r, AlphaValue::power(0.5), 1.0),
                    std::invalid_argument);
    CHECK_THROWS_AS(solve_discrete_dual(p, r, AlphaValue::power(2.0), 0.0),
                    std::invalid_argument);
}
