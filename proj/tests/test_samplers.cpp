#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "wprox/metrics.hpp"
#include "wprox/quadrature.hpp"
#include "wprox/samplers.hpp"

using namespace wprox;

namespace {

double ks_statistic(const SampleSet& s, const DistributionSpec& spec) {
    std::vector<double> x(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) x[i] = s.point(i)[0];
    std::sort(x.begin(), x.end());
    double n = static_cast<double>(x.size());
    double worst = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        double F = cdf_1d(spec, x[i]);
        worst = std::max(worst, std::abs((i + 1) / n - F));
        worst = std::max(worst, std::abs(i / n - F));
    }
    return worst;
}

}  // namespace

TEST_CASE("determinism under seed") {
    CHECK(sample_student_t(2, 1.0, 200, 42) == sample_student_t(2, 1.0, 200, 42));
    CHECK(sample_gaussian(3, 100, 7) == sample_gaussian(3, 100, 7));
    CHECK(sample_example1(Example1Kind::Q, 1.0, 100, 9) ==
          sample_example1(Example1Kind::Q, 1.0, 100, 9));
    CHECK_FALSE(sample_gaussian(3, 100, 7) == sample_gaussian(3, 100, 8));
}

TEST_CASE("student-t tail index via Hill estimator") {
    // 2-D isotropic, nu = 1: density tail exponent beta = nu + d = 3.
    SampleSet s = sample_student_t(2, 1.0, 100000, 31);
    double hill = hill_tail_index(s, 1000);  // top 1% of radii
    double beta_hat = hill + 2.0;            // survival exponent + dimension
    CHECK(beta_hat == doctest::Approx(3.0).epsilon(0.4 / 3.0));
}

TEST_CASE("student-t fourth moment, d=1, nu=12") {
    SampleSet s = sample_student_t(1, 12.0, 100000, 5);
    double m4 = empirical_moment(s, 4.0);
    // Analytic 2k-th moments: nu^k Gamma(k+1/2) Gamma(nu/2-k) / (sqrt(pi) Gamma(nu/2)).
    auto moment = [](double nu, int k) {
        return std::pow(nu, k) *
               std::exp(std::lgamma(k + 0.5) + std::lgamma(0.5 * nu - k) -
                        std::lgamma(0.5) - std::lgamma(0.5 * nu));
    };
    double m4_true = moment(12.0, 2);
    double m8_true = moment(12.0, 4);
    CHECK(m4_true == doctest::Approx(5.4));
    double se = std::sqrt((m8_true - m4_true * m4_true) / 100000.0);
    CHECK(std::abs(m4 - m4_true) <= 3.0 * se);
}

TEST_CASE("example-1 sampler medians and supports") {
    SampleSet p = sample_example1(Example1Kind::P, 1.0, 100001, 3);
    std::vector<double> xs(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) xs[i] = p.point(i)[0];
    std::sort(xs.begin(), xs.end());
    CHECK(xs.front() >= 1.0);  // support of p starts at 1
    double median = xs[xs.size() / 2];
    CHECK(median == doctest::Approx(std::sqrt(2.0)).epsilon(0.01));

    // Q has no mass on [1, 2): CDF at 1.5 equals 0.5, and no sample lands there.
    CHECK(cdf_1d(DistributionSpec::example1_q(), 1.5) == doctest::Approx(0.5));
    SampleSet q = sample_example1(Example1Kind::Q, 1.0, 50000, 4);
    for (std::size_t i = 0; i < q.size(); ++i) {
        double x = q.point(i)[0];
        CHECK((x < 1.0 || x >= 2.0));
    }

    SampleSet eta = sample_example1(Example1Kind::Eta, 1.0, 1000, 5);
    for (std::size_t i = 0; i < eta.size(); ++i) CHECK(eta.point(i)[0] >= 2.0);
}

TEST_CASE("gaussian moments") {
    SampleSet s = sample_gaussian(2, 100000, 17);
    for (int k = 0; k < 2; ++k) {
        double mean = 0.0;
        for (std::size_t i = 0; i < s.size(); ++i) mean += s.point(i)[k];
        mean /= static_cast<double>(s.size());
        CHECK(std::abs(mean) < 0.02);
    }
    SampleSet w = sample_gaussian(1, 100000, 18, {}, 2.0);
    double var = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) var += w.point(i)[0] * w.point(i)[0];
    var /= static_cast<double>(w.size());
    CHECK(var == doctest::Approx(4.0).epsilon(0.1 / 4.0));
    CHECK_THROWS_AS(sample_gaussian(1, 10, 0, {}, -1.0), std::invalid_argument);
}

TEST_CASE("density values") {
    DistributionSpec p1 = DistributionSpec::example1_p(1.0);
    double x = 1.0;
    CHECK(density(p1, &x) == doctest::Approx(2.0));
    x = 1.5;
    CHECK(density(DistributionSpec::example1_q(), &x) == doctest::Approx(0.0));
    x = 0.0;
    CHECK(density(DistributionSpec::student_t(1, 1.0), &x) ==
          doctest::Approx(1.0 / 3.14159265358979323846));
}

TEST_CASE("densities integrate to one") {
    auto tail_from = [](const DistributionSpec& spec, double lo) {
        auto f = [&](double x) { return density(spec, &x); };
        return integrate_tail(f, lo, 1e7, 1e-9).value;
    };
    CHECK(tail_from(DistributionSpec::example1_p(1.0), 1.0) ==
          doctest::Approx(1.0).epsilon(1e-6));
    CHECK(tail_from(DistributionSpec::example1_eta(0.5), 2.0) ==
          doctest::Approx(1.0).epsilon(1e-6));
    {
        DistributionSpec q = DistributionSpec::example1_q();
        auto f = [&](double x) { return density(q, &x); };
        double total = integrate_adaptive(f, 0.0, 1.0).value + tail_from(q, 2.0);
        CHECK(total == doctest::Approx(1.0).epsilon(1e-6));
    }
    for (int d : {1, 2, 3}) {
        DistributionSpec t = DistributionSpec::student_t(d, 1.5);
        std::vector<double> x(static_cast<std::size_t>(d), 0.0);
        auto radial = [&](double s) {
            x[0] = s;
            return sphere_surface(d) * std::pow(s, d - 1) * density(t, x.data());
        };
        double total = integrate_adaptive(radial, 0.0, 1.0, 1e-10, 1e-14).value +
                       integrate_tail(radial, 1.0, 1e7, 1e-9).value;
        CHECK(total == doctest::Approx(1.0).epsilon(1e-6));
    }
}

TEST_CASE("KS statistic against analytic CDFs, 5 seeds, >= 4 pass") {
    const std::size_t n = 100000;
    const double threshold = 1.95 * 2.0 / std::sqrt(static_cast<double>(n));
    std::vector<DistributionSpec> fams = {
        DistributionSpec::gaussian(1), DistributionSpec::student_t(1, 1.0),
        DistributionSpec::student_t(1, 3.0), DistributionSpec::example1_p(1.0),
        DistributionSpec::example1_q(), DistributionSpec::example1_eta(1.0)};
    for (const auto& fam : fams) {
        int pass = 0;
        for (std::uint64_t seed = 100; seed < 105; ++seed) {
            SampleSet s = sample(fam, n, seed);
            if (ks_statistic(s, fam) < threshold) ++pass;
        }
        CHECK(pass >= 4);
    }
}

TEST_CASE("heavy-tail envelopes hold on a radial grid") {
    std::vector<DistributionSpec> fams = {
        DistributionSpec::student_t(1, 1.0), DistributionSpec::student_t(2, 1.0),
        DistributionSpec::student_t(2, 3.0), DistributionSpec::example1_p(1.0),
        DistributionSpec::example1_q(), DistributionSpec::example1_eta(0.5)};
    for (const auto& fam : fams) {
        HeavyTailProfile h = heavy_tail_profile(fam);
        h.validate();
        std::vector<double> x(static_cast<std::size_t>(fam.dim), 0.0);
        for (double r = h.R; r <= 1e5; r *= 1.7) {
            x[0] = r;
            double f = density(fam, x.data());
            double envelope = std::pow(r, -h.beta);
            CHECK(f >= h.c_lower * envelope * (1.0 - 1e-12));
            CHECK(f <= h.c_upper * envelope * (1.0 + 1e-12));
        }
    }
    CHECK_THROWS_AS(heavy_tail_profile(DistributionSpec::gaussian(2)),
                    std::invalid_argument);
}

TEST_CASE("sample set CSV round trip") {
    SampleSet s = sample_student_t(2, 3.0, 64, 123);
    std::stringstream ss;
    s.write_csv(ss);
    SampleSet back = SampleSet::read_csv(ss, "buffer");
    CHECK(s == back);

    SampleSet w(1, {0.5, 1.5, 2.5}, {0.25, 0.5, 0.25});
    std::stringstream ws;
    w.write_csv(ws);
    CHECK(w == SampleSet::read_csv(ws, "buffer"));
}

TEST_CASE("moment lemma holds for sampled sets") {
    // sum w |x|^z <= sum w |x|^bhat + 1 whenever 1 <= z <= bhat.
    for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
        SampleSet s = sample_student_t(2, 5.0, 5000, seed);
        for (double bhat : {1.0, 2.0, 3.0}) {
            double cap = empirical_moment(s, bhat) + 1.0;
            for (double z = 1.0; z <= bhat; z += 0.25)
                CHECK(empirical_moment(s, z) <= cap);
        }
    }
}
