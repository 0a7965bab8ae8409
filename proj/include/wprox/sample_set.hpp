#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

namespace wprox {

// An empirical measure: n support points in R^d with nonnegative weights
// summing to one. Uniform weights unless stated otherwise.
class SampleSet {
public:
    SampleSet() = default;
    SampleSet(int dim, std::vector<double> points);
    SampleSet(int dim, std::vector<double> points, std::vector<double> weights);

    int dim() const { return dim_; }
    std::size_t size() const { return weights_.size(); }

    const double* point(std::size_t i) const { return points_.data() + i * dim_; }
    double weight(std::size_t i) const { return weights_[i]; }
    const std::vector<double>& points() const { return points_; }
    const std::vector<double>& weights() const { return weights_; }
    bool uniform_weights() const { return uniform_; }

    // Euclidean norm of point i.
    double radius(std::size_t i) const;
    std::vector<double> radii() const;

    // Exact CSV round trip: header `dim=<d>` (plus `,weights` when a trailing
    // weight column is present), then one comma-separated point per line.
    void save_csv(const std::string& path) const;
    void write_csv(std::ostream& os) const;
    static SampleSet load_csv(const std::string& path);
    static SampleSet read_csv(std::istream& is, const std::string& source_name);

    bool operator==(const SampleSet& other) const;

private:
    void validate() const;

    int dim_ = 0;
    std::vector<double> points_;   // row-major n x d
    std::vector<double> weights_;  // length n
    bool uniform_ = true;
};

double euclidean_distance(const double* a, const double* b, int dim);

}  // namespace wprox
