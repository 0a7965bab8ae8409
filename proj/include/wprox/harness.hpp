#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "wprox/conjugate.hpp"
#include "wprox/gpa.hpp"
#include "wprox/sample_set.hpp"

namespace wprox {

// ---- Example-1 reproduction -------------------------------------------------

struct Example1Report {
    double delta = 1.0;
    double alpha = 2.0;
    double L = 1.0;
    // Divergence evidence tables, indexed by the same axis values.
    std::vector<double> evidence_axis;        // {1, 10, 100, 1000}
    std::vector<double> w1_truncated;         // integral of |F_P - F_Q| up to radius
    std::vector<double> dalpha_lower_bound;   // capped-witness lower bound at height
    double w1_p_eta = 0.0;       // closed-form 2 at delta = 1
    double tail_integral = 0.0;  // integral over [2, inf); 13/12 at delta=1, alpha=2
    double d_eta_q = 0.0;        // full-support divergence eta || Q
    double bound = 0.0;          // d_eta_q + L * w1_p_eta
    double dual_estimate = 0.0;  // sampled discrete-dual value
    std::size_t sample_n = 0;
    bool estimate_within_bound = false;
};

Example1Report run_example1(double delta, const AlphaValue& a, double L,
                            std::size_t n = 2000, std::uint64_t seed = 20240901,
                            double estimate_slack = 0.2);

// ---- Convergence-rate study -------------------------------------------------

enum class EstimatorMethod { Exact, Neural };

struct RateStudyConfig {
    int dim = 1;
    double alpha = 8.0;
    double nu = 12.0;  // Student-t degrees for both P and Q
    std::vector<std::size_t> sizes = {50, 100, 200, 400, 800, 1600};
    std::size_t n_seeds = 20;
    std::uint64_t seed = 7;
    EstimatorMethod method = EstimatorMethod::Exact;
    double L = 1.0;
};

struct RateStudyResult {
    std::vector<std::size_t> sizes;
    std::vector<std::vector<double>> errors;  // [size][seed]
    std::vector<double> mean_error;
    double slope = 0.0;      // log mean error vs log n
    double intercept = 0.0;
    std::vector<std::string> warnings;  // violated moment/alpha preconditions
};

// Finite-sample rate preconditions per dimension (d=1 and d=2 have their own
// constraint sets; d >= 3 the general one). Returns violated constraints.
std::vector<std::string> check_rate_preconditions(int d, double alpha,
                                                  double beta1, double beta2);

RateStudyResult rate_study(const RateStudyConfig& cfg);

// ---- Student-t GPA benchmark ------------------------------------------------

struct StudentTBenchRow {
    bool lipschitz = true;
    std::uint64_t seed = 0;
    double l1_error = 0.0;
    long long runaway_count = 0;  // particles beyond 10x the target 99.9th pct
    double max_speed = 0.0;       // over the whole run
    double speed_cap = 0.0;       // eta * L * (1 + 1e-3), proximal mode only
};

struct StudentTBenchConfig {
    double nu = 1.0;
    double alpha = 2.0;
    double L = 1.0;
    std::size_t n_particles = 2000;
    std::size_t n_target = 10000;
    std::vector<std::uint64_t> seeds = {1, 2, 3};
    bool run_lipschitz = true;
    bool run_unconstrained = true;
    GpaSchedule schedule;  // outer_steps etc.; seed field is overwritten per run
    double prior_scale = 3.0;
};

struct StudentTBenchResult {
    std::vector<StudentTBenchRow> rows;
    std::vector<double> grid;
    std::vector<double> truth;
};

StudentTBenchResult run_student_t_benchmark(const StudentTBenchConfig& cfg);

// ---- Ingestion, config files, CSV output -------------------------------------

// SampleSet CSV (or headerless 1-D, one value per line). Malformed rows are
// reported with their line number.
SampleSet ingest_csv(const std::string& path);

// Flat key=value configuration text. '#' starts a comment line.
std::map<std::string, std::string> load_config(const std::string& path);

// One record per line, comma separated, 17 significant digits.
class CsvWriter {
public:
    explicit CsvWriter(std::ostream& os) : os_(os) {}
    void header(const std::vector<std::string>& cols);
    void row(const std::vector<double>& values);
    void row_mixed(const std::vector<std::string>& values);
    static std::string format(double v);

private:
    std::ostream& os_;
};

}  // namespace wprox
