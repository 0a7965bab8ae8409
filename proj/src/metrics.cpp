#include "wprox/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "wprox/quadrature.hpp"

namespace wprox {

std::vector<double> rccdf_empirical(const std::vector<double>& radii,
                                    const std::vector<double>& grid) {
    for (double r : radii)
        if (!(r >= 0.0)) throw std::invalid_argument("rccdf_empirical: negative radius");
    for (std::size_t i = 1; i < grid.size(); ++i)
        if (!(grid[i] > grid[i - 1]))
            throw std::invalid_argument("rccdf_empirical: grid must be strictly increasing");
    std::vector<double> sorted = radii;
    std::sort(sorted.begin(), sorted.end());
    std::vector<double> out(grid.size());
    const double n = static_cast<double>(sorted.size());
    for (std::size_t g = 0; g < grid.size(); ++g) {
        auto it = std::upper_bound(sorted.begin(), sorted.end(), grid[g]);
        out[g] = static_cast<double>(sorted.end() - it) / n;
    }
    return out;
}

double rccdf_truth_student_t(double nu, int dim, double r) {
    if (!(r >= 0.0)) throw std::invalid_argument("rccdf_truth_student_t: r must be >= 0");
    if (r == 0.0) return 1.0;
    DistributionSpec spec = DistributionSpec::student_t(dim, nu);
    double surface = sphere_surface(dim);
    // density() is isotropic; only the radius matters, so evaluate at (s, 0, ..., 0).
    std::vector<double> x(static_cast<std::size_t>(dim), 0.0);
    auto mass = integrate_adaptive(
        [&](double s) {
            x[0] = s;
            return surface * std::pow(s, dim - 1) * density(spec, x.data());
        },
        0.0, r, 1e-12, 1e-15);
    double v = 1.0 - mass.value;
    return std::clamp(v, 0.0, 1.0);
}

double l1_error(const std::vector<double>& truth,
                const std::vector<double>& empirical,
                const std::vector<double>& grid) {
    if (truth.size() != grid.size() || empirical.size() != grid.size())
        throw std::invalid_argument("l1_error: curves and grid must share a length");
    if (grid.size() < 2) throw std::invalid_argument("l1_error: need at least two grid points");
    double total = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        double w;
        if (i == 0)
            w = 0.5 * (grid[1] - grid[0]);
        else if (i + 1 == grid.size())
            w = 0.5 * (grid[i] - grid[i - 1]);
        else
            w = 0.5 * (grid[i + 1] - grid[i - 1]);
        total += w * std::abs(truth[i] - empirical[i]);
    }
    return total;
}

double empirical_moment(const SampleSet& s, double r) {
    if (!(r >= 0.0)) throw std::invalid_argument("empirical_moment: order must be >= 0");
    double acc = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i)
        acc += s.weight(i) * std::pow(s.radius(i), r);
    return acc;
}

double hill_tail_index(const SampleSet& s, std::size_t k) {
    if (k < 2 || k >= s.size())
        throw std::invalid_argument("hill_tail_index: need 2 <= k < n");
    std::vector<double> r = s.radii();
    std::sort(r.begin(), r.end(), std::greater<double>());
    double pivot = r[k];  // (k+1)-th largest
    if (!(pivot > 0.0))
        throw std::invalid_argument("hill_tail_index: nonpositive pivot radius");
    double acc = 0.0;
    for (std::size_t i = 0; i < k; ++i) acc += std::log(r[i] / pivot);
    return static_cast<double>(k) / acc;
}

std::vector<double> default_radius_grid(const std::vector<double>& radii,
                                        std::size_t points, double lo_pct,
                                        double hi_pct) {
    if (radii.size() < 2 || points < 2)
        throw std::invalid_argument("default_radius_grid: not enough data");
    std::vector<double> sorted = radii;
    std::sort(sorted.begin(), sorted.end());
    auto pct = [&](double p) {
        double idx = p * static_cast<double>(sorted.size() - 1);
        std::size_t i = static_cast<std::size_t>(idx);
        if (i + 1 >= sorted.size()) return sorted.back();
        double frac = idx - static_cast<double>(i);
        return sorted[i] * (1.0 - frac) + sorted[i + 1] * frac;
    };
    double lo = std::max(pct(lo_pct), 1e-12);
    double hi = std::max(pct(hi_pct), lo * (1.0 + 1e-9));
    std::vector<double> grid(points);
    for (std::size_t i = 0; i < points; ++i) {
        double t = static_cast<double>(i) / static_cast<double>(points - 1);
        grid[i] = lo * std::pow(hi / lo, t);
    }
    return grid;
}

}  // namespace wprox
