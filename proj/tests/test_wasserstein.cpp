#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "wprox/rng.hpp"
#include "wprox/samplers.hpp"
#include "wprox/wasserstein.hpp"

using namespace wprox;

namespace {

// Exhaustive assignment oracle for small uniform instances.
double w1_by_permutations(const SampleSet& a, const SampleSet& b) {
    REQUIRE(a.size() == b.size());
    std::vector<int> perm(a.size());
    std::iota(perm.begin(), perm.end(), 0);
    double best = 1e308;
    do {
        double c = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i)
            c += euclidean_distance(a.point(i), b.point(perm[i]), a.dim());
        best = std::min(best, c);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best / static_cast<double>(a.size());
}

SampleSet random_set(CounterRng& rng, int d, std::size_t n, double spread = 4.0) {
    std::vector<double> pts(n * static_cast<std::size_t>(d));
    for (auto& x : pts) x = spread * (2.0 * rng.next_uniform() - 1.0);
    return SampleSet(d, std::move(pts));
}

}  // namespace

TEST_CASE("1-D quantile formula on knowns") {
    SampleSet zero(1, {0.0});
    SampleSet one(1, {1.0});
    CHECK(w1_1d(zero, zero) == doctest::Approx(0.0));
    CHECK(w1_1d(zero, one) == doctest::Approx(1.0));
    SampleSet a(1, {0.0, 1.0});
    SampleSet b(1, {2.0, 3.0});
    CHECK(w1_1d(a, b) == doctest::Approx(2.0));
    CHECK_THROWS_AS(w1_1d(SampleSet(), zero), std::invalid_argument);
}

TEST_CASE("assignment solver equals 1-D quantile formula on 50 instances") {
    CounterRng rng(404);
    for (int trial = 0; trial < 50; ++trial) {
        std::size_t n = 2 + rng.next_u64() % 40;
        SampleSet a = random_set(rng, 1, n);
        SampleSet b = random_set(rng, 1, n);
        CHECK(std::abs(w1_exact(a, b) - w1_1d(a, b)) <= 1e-9);
    }
}

TEST_CASE("4-point 2-D instances equal permutation brute force") {
    CounterRng rng(17);
    for (int trial = 0; trial < 50; ++trial) {
        SampleSet a = random_set(rng, 2, 4);
        SampleSet b = random_set(rng, 2, 4);
        double exact = w1_exact(a, b);
        double oracle = w1_by_permutations(a, b);
        CHECK(exact == doctest::Approx(oracle).epsilon(1e-13));
    }
}

TEST_CASE("identity, symmetry, triangle, mean separation") {
    CounterRng rng(23);
    for (int trial = 0; trial < 25; ++trial) {
        int d = 1 + static_cast<int>(rng.next_u64() % 3);
        SampleSet a = random_set(rng, d, 3 + rng.next_u64() % 8);
        SampleSet b = random_set(rng, d, 3 + rng.next_u64() % 8);
        SampleSet c = random_set(rng, d, 3 + rng.next_u64() % 8);
        CHECK(w1_exact(a, a) == doctest::Approx(0.0).epsilon(1e-12));
        double ab = w1_exact(a, b), ba = w1_exact(b, a);
        CHECK(ab == doctest::Approx(ba).epsilon(1e-10));
        double ac = w1_exact(a, c), cb = w1_exact(c, b);
        CHECK(ab <= ac + cb + 1e-9);

        // Jensen: transport cost dominates the distance between means.
        std::vector<double> ma(d, 0.0), mb(d, 0.0);
        for (std::size_t i = 0; i < a.size(); ++i)
            for (int k = 0; k < d; ++k) ma[k] += a.weight(i) * a.point(i)[k];
        for (std::size_t i = 0; i < b.size(); ++i)
            for (int k = 0; k < d; ++k) mb[k] += b.weight(i) * b.point(i)[k];
        CHECK(ab >= euclidean_distance(ma.data(), mb.data(), d) - 1e-9);
    }
}

TEST_CASE("weighted and unequal-count instances via min-cost flow") {
    // Weighted 1-D instance cross-checked against the quantile formula.
    SampleSet a(1, {0.0, 1.0, 4.0}, {0.25, 0.25, 0.5});
    SampleSet b(1, {0.5, 2.0}, {0.75, 0.25});
    CHECK(w1_exact(a, b) == doctest::Approx(w1_1d(a, b)).epsilon(1e-10));

    // Unequal counts, uniform weights.
    SampleSet c(1, {0.0, 2.0});
    SampleSet e(1, {0.0, 1.0, 2.0, 3.0});
    CHECK(w1_exact(c, e) == doctest::Approx(w1_1d(c, e)).epsilon(1e-10));

    // 2-D weighted instance against a hand solution: all mass of a single
    // atom splits between two sinks; optimum ships to the nearest first.
    SampleSet f(2, {0.0, 0.0}, {1.0});
    SampleSet g(2, {1.0, 0.0, 3.0, 0.0}, {0.5, 0.5});
    CHECK(w1_exact(f, g) == doctest::Approx(0.5 * 1.0 + 0.5 * 3.0));

    CounterRng rng(99);
    for (int trial = 0; trial < 20; ++trial) {
        std::size_t n = 2 + rng.next_u64() % 6;
        std::size_t m = 2 + rng.next_u64() % 6;
        std::vector<double> wa(n), wb(m);
        double sa = 0.0, sb = 0.0;
        for (auto& w : wa) sa += (w = 1.0 + static_cast<double>(rng.next_u64() % 8));
        for (auto& w : wb) sb += (w = 1.0 + static_cast<double>(rng.next_u64() % 8));
        for (auto& w : wa) w /= sa;
        for (auto& w : wb) w /= sb;
        SampleSet x(1, random_set(rng, 1, n).points(), wa);
        SampleSet y(1, random_set(rng, 1, m).points(), wb);
        CHECK(w1_exact(x, y) == doctest::Approx(w1_1d(x, y)).epsilon(1e-9));
    }
}

TEST_CASE("weight rationalization beyond the cap refuses") {
    // Weights with a large prime denominator exceed a tiny cap.
    SampleSet a(1, {0.0, 1.0}, {1.0 / 1009.0, 1008.0 / 1009.0});
    SampleSet b(1, {0.5});
    CHECK_THROWS_AS(w1_exact(a, b, 100), std::runtime_error);
    CHECK(w1_exact(a, b, 10000) == doctest::Approx(w1_1d(a, b)).epsilon(1e-10));
}

TEST_CASE("a-posteriori bound") {
    SampleSet a(1, {0.0});
    SampleSet b(1, {1.0});
    CHECK(posteriori_bound(a, a, 1.0) == doctest::Approx(0.0));
    CHECK(posteriori_bound(a, b, 1.0) == doctest::Approx(1.0));
    CHECK(posteriori_bound(a, b, 2.0) == doctest::Approx(2.0));  // linear in L
    CHECK(posteriori_bound(a, b, 1.0, 0.25) == doctest::Approx(1.25));
    CHECK_THROWS_AS(posteriori_bound(a, b, 0.0), std::invalid_argument);
}
