#include "wprox/samplers.hpp"

#include <cmath>
#include <stdexcept>

#include "wprox/quadrature.hpp"
#include "wprox/rng.hpp"

namespace wprox {

void HeavyTailProfile::validate() const {
    if (dim < 1) throw std::invalid_argument("HeavyTailProfile: dim must be >= 1");
    if (!(beta > dim))
        throw std::invalid_argument("HeavyTailProfile: beta must exceed dim");
    if (!(R > 0.0)) throw std::invalid_argument("HeavyTailProfile: R must be positive");
    if (!(0.0 < c_lower && c_lower <= c_upper))
        throw std::invalid_argument("HeavyTailProfile: need 0 < c_lower <= c_upper");
    if (intrinsic_dim < 0 || intrinsic_dim > dim)
        throw std::invalid_argument("HeavyTailProfile: intrinsic_dim out of range");
}

DistributionSpec DistributionSpec::student_t(int dim, double nu) {
    if (dim < 1 || !(nu > 0.0))
        throw std::invalid_argument("student_t: need dim >= 1 and nu > 0");
    DistributionSpec s;
    s.family = Family::StudentT;
    s.dim = dim;
    s.nu = nu;
    return s;
}

DistributionSpec DistributionSpec::example1_p(double delta) {
    if (!(delta > 0.0)) throw std::invalid_argument("example1_p: delta must be positive");
    DistributionSpec s;
    s.family = Family::Example1P;
    s.dim = 1;
    s.delta = delta;
    return s;
}

DistributionSpec DistributionSpec::example1_q() {
    DistributionSpec s;
    s.family = Family::Example1Q;
    s.dim = 1;
    return s;
}

DistributionSpec DistributionSpec::example1_eta(double delta) {
    if (!(delta > 0.0)) throw std::invalid_argument("example1_eta: delta must be positive");
    DistributionSpec s;
    s.family = Family::Example1Eta;
    s.dim = 1;
    s.delta = delta;
    return s;
}

DistributionSpec DistributionSpec::gaussian(int dim, std::vector<double> mean,
                                            double scale) {
    if (dim < 1) throw std::invalid_argument("gaussian: dim must be >= 1");
    if (!(scale > 0.0)) throw std::invalid_argument("gaussian: scale must be positive");
    if (!mean.empty() && mean.size() != static_cast<std::size_t>(dim))
        throw std::invalid_argument("gaussian: mean dimension mismatch");
    DistributionSpec s;
    s.family = Family::Gaussian;
    s.dim = dim;
    s.mean = std::move(mean);
    s.scale = scale;
    return s;
}

namespace {

// Marsaglia-Tsang; only needed for non-integer chi-square degrees.
double draw_gamma(CounterRng& rng, double shape) {
    if (shape < 1.0) {
        double u = rng.next_uniform_pos();
        return draw_gamma(rng, shape + 1.0) * std::pow(u, 1.0 / shape);
    }
    double d = shape - 1.0 / 3.0;
    double c = 1.0 / std::sqrt(9.0 * d);
    while (true) {
        double x = rng.next_normal();
        double v = 1.0 + c * x;
        if (v <= 0.0) continue;
        v = v * v * v;
        double u = rng.next_uniform_pos();
        if (std::log(u) < 0.5 * x * x + d - d * v + d * std::log(v)) return d * v;
    }
}

double draw_chi_square(CounterRng& rng, double nu) {
    double integral = 0.0;
    if (std::modf(nu, &integral) == 0.0 && nu <= 256.0) {
        double s = 0.0;
        for (int k = 0; k < static_cast<int>(integral); ++k) {
            double z = rng.next_normal();
            s += z * z;
        }
        return s;
    }
    return 2.0 * draw_gamma(rng, 0.5 * nu);
}

}  // namespace

double student_t_normalizer(int dim, double nu) {
    const double pi = 3.14159265358979323846;
    return std::exp(std::lgamma(0.5 * (nu + dim)) - std::lgamma(0.5 * nu)) /
           std::pow(nu * pi, 0.5 * dim);
}

SampleSet sample_student_t(int dim, double nu, std::size_t n, std::uint64_t seed) {
    if (dim < 1 || !(nu > 0.0) || n == 0)
        throw std::invalid_argument("sample_student_t: bad parameters");
    CounterRng rng(seed);
    std::vector<double> pts(n * dim);
    for (std::size_t i = 0; i < n; ++i) {
        double w = draw_chi_square(rng, nu);
        double f = std::sqrt(nu / w);
        for (int k = 0; k < dim; ++k) pts[i * dim + k] = rng.next_normal() * f;
    }
    return SampleSet(dim, std::move(pts));
}

SampleSet sample_example1(Example1Kind which, double delta, std::size_t n,
                          std::uint64_t seed) {
    if (!(delta > 0.0) || n == 0)
        throw std::invalid_argument("sample_example1: bad parameters");
    CounterRng rng(seed);
    std::vector<double> pts(n);
    for (std::size_t i = 0; i < n; ++i) {
        double u = rng.next_uniform();
        switch (which) {
            case Example1Kind::P:
                pts[i] = std::pow(1.0 - u, -1.0 / (1.0 + delta));
                break;
            case Example1Kind::Q:
                // CDF x/2 on [0,1), flat on [1,2), 1 - 1/x beyond; the flat
                // segment is never hit (u = 1/2 maps to 2).
                pts[i] = (u < 0.5) ? 2.0 * u : 1.0 / (1.0 - u);
                break;
            case Example1Kind::Eta:
                pts[i] = 2.0 * std::pow(1.0 - u, -1.0 / (1.0 + delta));
                break;
        }
    }
    return SampleSet(1, std::move(pts));
}

SampleSet sample_gaussian(int dim, std::size_t n, std::uint64_t seed,
                          const std::vector<double>& mean, double scale) {
    if (dim < 1 || n == 0) throw std::invalid_argument("sample_gaussian: bad parameters");
    if (!(scale > 0.0)) throw std::invalid_argument("sample_gaussian: scale must be positive");
    if (!mean.empty() && mean.size() != static_cast<std::size_t>(dim))
        throw std::invalid_argument("sample_gaussian: mean dimension mismatch");
    CounterRng rng(seed);
    std::vector<double> pts(n * dim);
    for (std::size_t i = 0; i < n; ++i)
        for (int k = 0; k < dim; ++k) {
            double m = mean.empty() ? 0.0 : mean[k];
            pts[i * dim + k] = m + scale * rng.next_normal();
        }
    return SampleSet(dim, std::move(pts));
}

SampleSet sample(const DistributionSpec& spec, std::size_t n, std::uint64_t seed) {
    switch (spec.family) {
        case Family::Gaussian:
            return sample_gaussian(spec.dim, n, seed, spec.mean, spec.scale);
        case Family::StudentT:
            return sample_student_t(spec.dim, spec.nu, n, seed);
        case Family::Example1P:
            return sample_example1(Example1Kind::P, spec.delta, n, seed);
        case Family::Example1Q:
            return sample_example1(Example1Kind::Q, spec.delta, n, seed);
        case Family::Example1Eta:
            return sample_example1(Example1Kind::Eta, spec.delta, n, seed);
    }
    throw std::invalid_argument("sample: unknown family");
}

double density(const DistributionSpec& spec, const double* x) {
    const double pi = 3.14159265358979323846;
    switch (spec.family) {
        case Family::Gaussian: {
            double q = 0.0;
            for (int k = 0; k < spec.dim; ++k) {
                double m = spec.mean.empty() ? 0.0 : spec.mean[k];
                double z = (x[k] - m) / spec.scale;
                q += z * z;
            }
            return std::exp(-0.5 * q) /
                   std::pow(2.0 * pi * spec.scale * spec.scale, 0.5 * spec.dim);
        }
        case Family::StudentT: {
            double r2 = 0.0;
            for (int k = 0; k < spec.dim; ++k) r2 += x[k] * x[k];
            return student_t_normalizer(spec.dim, spec.nu) *
                   std::pow(1.0 + r2 / spec.nu, -0.5 * (spec.nu + spec.dim));
        }
        case Family::Example1P:
            return x[0] >= 1.0 ? (1.0 + spec.delta) * std::pow(x[0], -(2.0 + spec.delta))
                               : 0.0;
        case Family::Example1Q:
            if (x[0] >= 0.0 && x[0] < 1.0) return 0.5;
            if (x[0] >= 2.0) return 1.0 / (x[0] * x[0]);
            return 0.0;
        case Family::Example1Eta:
            return x[0] >= 2.0 ? (1.0 + spec.delta) * std::pow(2.0, 1.0 + spec.delta) *
                                     std::pow(x[0], -(2.0 + spec.delta))
                               : 0.0;
    }
    throw std::invalid_argument("density: unknown family");
}

double cdf_1d(const DistributionSpec& spec, double x) {
    if (spec.dim != 1) throw std::invalid_argument("cdf_1d: requires a 1-D family");
    switch (spec.family) {
        case Family::Gaussian: {
            double m = spec.mean.empty() ? 0.0 : spec.mean[0];
            return 0.5 * std::erfc(-(x - m) / (spec.scale * std::sqrt(2.0)));
        }
        case Family::StudentT: {
            if (spec.nu == 1.0)  // Cauchy
                return 0.5 + std::atan(x) / 3.14159265358979323846;
            double ax = std::abs(x);
            DistributionSpec s = spec;
            auto half = integrate_adaptive(
                [&](double t) { return density(s, &t); }, 0.0, ax, 1e-12, 1e-15);
            return x >= 0.0 ? 0.5 + half.value : 0.5 - half.value;
        }
        case Family::Example1P:
            return x < 1.0 ? 0.0 : 1.0 - std::pow(x, -(1.0 + spec.delta));
        case Family::Example1Q:
            if (x < 0.0) return 0.0;
            if (x < 1.0) return 0.5 * x;
            if (x < 2.0) return 0.5;
            return 1.0 - 1.0 / x;
        case Family::Example1Eta:
            return x < 2.0 ? 0.0 : 1.0 - std::pow(2.0 / x, 1.0 + spec.delta);
    }
    throw std::invalid_argument("cdf_1d: unknown family");
}

HeavyTailProfile heavy_tail_profile(const DistributionSpec& spec) {
    HeavyTailProfile h;
    h.dim = spec.dim;
    switch (spec.family) {
        case Family::StudentT: {
            double beta = spec.nu + spec.dim;
            double R = 3.0 * std::sqrt(spec.nu) + 1.0;
            double c = student_t_normalizer(spec.dim, spec.nu) *
                       std::pow(spec.nu, 0.5 * beta);
            h.beta = beta;
            h.R = R;
            h.c_upper = c;
            h.c_lower = c * std::pow(R * R / (spec.nu + R * R), 0.5 * beta);
            break;
        }
        case Family::Example1P:
            h.beta = 2.0 + spec.delta;
            h.R = 1.0;
            h.c_lower = h.c_upper = 1.0 + spec.delta;
            break;
        case Family::Example1Q:
            h.beta = 2.0;
            h.R = 2.0;
            h.c_lower = h.c_upper = 1.0;
            break;
        case Family::Example1Eta:
            h.beta = 2.0 + spec.delta;
            h.R = 2.0;
            h.c_lower = h.c_upper = (1.0 + spec.delta) * std::pow(2.0, 1.0 + spec.delta);
            break;
        case Family::Gaussian:
            throw std::invalid_argument("heavy_tail_profile: Gaussian is not heavy-tailed");
    }
    h.validate();
    return h;
}

}  // namespace wprox
