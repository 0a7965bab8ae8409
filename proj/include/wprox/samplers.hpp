#pragma once

#include <cstdint>
#include <vector>

#include "wprox/sample_set.hpp"

namespace wprox {

// Power-law density envelope outside radius R:
//   c_lower * |x|^{-beta} <= density(x) <= c_upper * |x|^{-beta}.
struct HeavyTailProfile {
    int dim = 1;
    double beta = 2.0;  // must exceed dim
    double R = 1.0;
    double c_lower = 1.0;
    double c_upper = 1.0;
    int intrinsic_dim = 0;  // 0 = unset; d* <= dim when known

    void validate() const;
};

enum class Family { Gaussian, StudentT, Example1P, Example1Q, Example1Eta };

// One description for every distribution the experiments use; density and
// sampling are exact (no MCMC, no rejection except non-integer chi-square).
struct DistributionSpec {
    Family family = Family::Gaussian;
    int dim = 1;
    double nu = 1.0;                // StudentT degrees of freedom
    double delta = 1.0;             // Example-1 tail parameter
    std::vector<double> mean;       // Gaussian mean (empty = origin)
    double scale = 1.0;             // Gaussian per-coordinate deviation

    static DistributionSpec student_t(int dim, double nu);
    static DistributionSpec example1_p(double delta);
    static DistributionSpec example1_q();
    static DistributionSpec example1_eta(double delta);
    static DistributionSpec gaussian(int dim, std::vector<double> mean = {},
                                     double scale = 1.0);
};

enum class Example1Kind { P, Q, Eta };

// Isotropic d-dimensional Student-t via the Gaussian / chi-square ratio
// x = z sqrt(nu / w); the density tail decays like |x|^{-(nu + d)}.
SampleSet sample_student_t(int dim, double nu, std::size_t n, std::uint64_t seed);

// Example-1 family on the line, drawn by inverse CDF.
SampleSet sample_example1(Example1Kind which, double delta, std::size_t n,
                          std::uint64_t seed);

SampleSet sample_gaussian(int dim, std::size_t n, std::uint64_t seed,
                          const std::vector<double>& mean = {}, double scale = 1.0);

SampleSet sample(const DistributionSpec& spec, std::size_t n, std::uint64_t seed);

// Exact normalized density at x (length = spec dim).
double density(const DistributionSpec& spec, const double* x);

// Analytic CDF for the 1-D families (Gaussian, StudentT d=1 via quadrature,
// Example-1 P/Q/Eta). Used by goodness-of-fit tests and the harness.
double cdf_1d(const DistributionSpec& spec, double x);

// Tail envelope for the heavy-tailed families; throws for the Gaussian.
HeavyTailProfile heavy_tail_profile(const DistributionSpec& spec);

// Student-t normalization constant Gamma((nu+d)/2) / (Gamma(nu/2) (nu pi)^{d/2}).
double student_t_normalizer(int dim, double nu);

}  // namespace wprox
