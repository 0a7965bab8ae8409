#pragma once

#include <vector>

#include "wprox/sample_set.hpp"
#include "wprox/samplers.hpp"

namespace wprox {

// Survival fraction of the radii at each grid point: the fraction of radii
// strictly greater than r. Grid must be strictly increasing.
std::vector<double> rccdf_empirical(const std::vector<double>& radii,
                                    const std::vector<double>& grid);

// Ground-truth radial survival function of the isotropic Student-t,
// 1 - integral_0^r s^{d-1} * surface * density(s) ds.
double rccdf_truth_student_t(double nu, int dim, double r);

// Grid-weighted (trapezoidal) L1 distance between two curves on one grid.
double l1_error(const std::vector<double>& truth,
                const std::vector<double>& empirical,
                const std::vector<double>& grid);

// Weighted r-th moment of the radius, sum_i w_i |x_i|^r.
double empirical_moment(const SampleSet& s, double r);

// Hill estimator of the radial survival exponent from the k largest radii
// (the density tail exponent is this value plus the dimension).
double hill_tail_index(const SampleSet& s, std::size_t k);

// Default evaluation grid: geometric points between the lower and upper
// percentiles of the given radii.
std::vector<double> default_radius_grid(const std::vector<double>& radii,
                                        std::size_t points = 200,
                                        double lo_pct = 0.01,
                                        double hi_pct = 0.999);

}  // namespace wprox
