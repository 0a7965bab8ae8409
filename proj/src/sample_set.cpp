#include "wprox/sample_set.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace wprox {

SampleSet::SampleSet(int dim, std::vector<double> points)
    : dim_(dim), points_(std::move(points)) {
    if (dim_ <= 0) throw std::invalid_argument("SampleSet: dim must be positive");
    if (points_.empty() || points_.size() % dim_ != 0)
        throw std::invalid_argument("SampleSet: point array size not a multiple of dim");
    std::size_t n = points_.size() / dim_;
    weights_.assign(n, 1.0 / static_cast<double>(n));
    uniform_ = true;
    validate();
}

SampleSet::SampleSet(int dim, std::vector<double> points, std::vector<double> weights)
    : dim_(dim), points_(std::move(points)), weights_(std::move(weights)) {
    if (dim_ <= 0) throw std::invalid_argument("SampleSet: dim must be positive");
    if (weights_.empty() || points_.size() != weights_.size() * dim_)
        throw std::invalid_argument("SampleSet: points/weights size mismatch");
    uniform_ = false;
    validate();
}

void SampleSet::validate() const {
    double total = 0.0;
    for (double w : weights_) {
        if (!(w >= 0.0)) throw std::invalid_argument("SampleSet: negative or NaN weight");
        total += w;
    }
    if (std::abs(total - 1.0) > 1e-12 * weights_.size() + 1e-12)
        throw std::invalid_argument("SampleSet: weights must sum to 1");
    for (double x : points_)
        if (!std::isfinite(x)) throw std::invalid_argument("SampleSet: non-finite coordinate");
}

double SampleSet::radius(std::size_t i) const {
    const double* x = point(i);
    double s = 0.0;
    for (int k = 0; k < dim_; ++k) s += x[k] * x[k];
    return std::sqrt(s);
}

std::vector<double> SampleSet::radii() const {
    std::vector<double> r(size());
    for (std::size_t i = 0; i < size(); ++i) r[i] = radius(i);
    return r;
}

bool SampleSet::operator==(const SampleSet& other) const {
    return dim_ == other.dim_ && points_ == other.points_ && weights_ == other.weights_;
}

namespace {

void print_value(std::ostream& os, double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    os << buf;
}

}  // namespace

void SampleSet::write_csv(std::ostream& os) const {
    os << "dim=" << dim_;
    if (!uniform_) os << ",weights";
    os << "\n";
    for (std::size_t i = 0; i < size(); ++i) {
        const double* x = point(i);
        for (int k = 0; k < dim_; ++k) {
            if (k) os << ",";
            print_value(os, x[k]);
        }
        if (!uniform_) {
            os << ",";
            print_value(os, weights_[i]);
        }
        os << "\n";
    }
}

void SampleSet::save_csv(const std::string& path) const {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("SampleSet: cannot open " + path + " for writing");
    write_csv(os);
}

SampleSet SampleSet::read_csv(std::istream& is, const std::string& source_name) {
    std::string line;
    if (!std::getline(is, line))
        throw std::runtime_error(source_name + ": empty file");

    auto fail_at = [&](std::size_t lineno, const std::string& what) {
        throw std::runtime_error(source_name + ":" + std::to_string(lineno) + ": " + what);
    };

    int dim = 0;
    bool has_weights = false;
    bool headerless = false;
    std::vector<double> points, weights;
    std::size_t lineno = 1;

    if (line.rfind("dim=", 0) == 0) {
        std::string rest = line.substr(4);
        auto comma = rest.find(',');
        std::string dim_str = rest.substr(0, comma);
        try {
            dim = std::stoi(dim_str);
        } catch (...) {
            fail_at(1, "bad header: " + line);
        }
        if (dim <= 0) fail_at(1, "bad dimension in header");
        if (comma != std::string::npos) {
            std::string flag = rest.substr(comma + 1);
            if (flag == "weights")
                has_weights = true;
            else
                fail_at(1, "unknown header flag: " + flag);
        }
    } else {
        // Headerless 1-D file: one value per line, first line already data.
        headerless = true;
        dim = 1;
        std::istringstream row(line);
        double v;
        char extra;
        if (!(row >> v) || (row >> extra))
            fail_at(1, "expected a single numeric value");
        points.push_back(v);
    }

    std::size_t expected_cols = static_cast<std::size_t>(dim) + (has_weights ? 1 : 0);
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::vector<double> cols;
        std::size_t start = 0;
        while (true) {
            auto comma = line.find(',', start);
            std::string field = line.substr(start, comma == std::string::npos
                                                       ? std::string::npos
                                                       : comma - start);
            try {
                std::size_t used = 0;
                double v = std::stod(field, &used);
                while (used < field.size() && std::isspace(static_cast<unsigned char>(field[used]))) ++used;
                if (used != field.size()) throw std::invalid_argument("trailing junk");
                cols.push_back(v);
            } catch (...) {
                fail_at(lineno, "malformed numeric field '" + field + "'");
            }
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
        if (headerless) {
            if (cols.size() != 1) fail_at(lineno, "expected a single numeric value");
            points.push_back(cols[0]);
            continue;
        }
        if (cols.size() != expected_cols)
            fail_at(lineno, "expected " + std::to_string(expected_cols) + " columns, got " +
                                std::to_string(cols.size()));
        for (int k = 0; k < dim; ++k) points.push_back(cols[k]);
        if (has_weights) weights.push_back(cols[dim]);
    }
    if (points.empty()) throw std::runtime_error(source_name + ": no data rows");

    if (has_weights) return SampleSet(dim, std::move(points), std::move(weights));
    return SampleSet(dim, std::move(points));
}

SampleSet SampleSet::load_csv(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("SampleSet: cannot open " + path);
    return read_csv(is, path);
}

double euclidean_distance(const double* a, const double* b, int dim) {
    double s = 0.0;
    for (int k = 0; k < dim; ++k) {
        double d = a[k] - b[k];
        s += d * d;
    }
    return std::sqrt(s);
}

}  // namespace wprox
