#include "wprox/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <stdexcept>

#include "wprox/discrete_dual.hpp"
#include "wprox/finiteness.hpp"
#include "wprox/metrics.hpp"
#include "wprox/neural_dual.hpp"
#include "wprox/quadrature.hpp"
#include "wprox/rng.hpp"
#include "wprox/samplers.hpp"
#include "wprox/wasserstein.hpp"

namespace wprox {

Example1Report run_example1(double delta, const AlphaValue& a, double L,
                            std::size_t n, std::uint64_t seed,
                            double estimate_slack) {
    if (!(delta > 0.0)) throw std::invalid_argument("run_example1: delta must be positive");
    if (a.is_kl() || !(a.alpha() > 1.0))
        throw std::invalid_argument("run_example1: requires alpha > 1");
    if (!(L > 0.0)) throw std::invalid_argument("run_example1: L must be positive");

    Example1Report rep;
    rep.delta = delta;
    rep.alpha = a.alpha();
    rep.L = L;

    DistributionSpec P = DistributionSpec::example1_p(delta);
    DistributionSpec Q = DistributionSpec::example1_q();
    DistributionSpec Eta = DistributionSpec::example1_eta(delta);

    // Divergence evidence. W1(P, Q) truncated at radius X; the alpha
    // divergence certified from below by the bounded witness of height X on
    // the interval [1, 2) where Q vanishes but P does not.
    rep.evidence_axis = {1.0, 10.0, 100.0, 1000.0};
    auto fdiff = [&](double x) { return std::abs(cdf_1d(P, x) - cdf_1d(Q, x)); };
    double hole_mass = cdf_1d(P, 2.0) - cdf_1d(P, 1.0);  // 1 - 2^{-(1+delta)}
    double fstar0 = f_alpha_star(0.0, a);
    for (double X : rep.evidence_axis) {
        double w1t = integrate_adaptive(fdiff, 0.0, std::min(X, 2.0), 1e-11, 1e-14).value;
        if (X > 2.0) w1t += integrate_geometric(fdiff, 2.0, X, 1e-11).value;
        rep.w1_truncated.push_back(w1t);
        rep.dalpha_lower_bound.push_back(X * hole_mass - fstar0);
    }

    // W1(P, eta) to quadrature accuracy: [1,2] directly, the tail through
    // the substitution u = 1/y.
    auto fpe = [&](double y) { return std::abs(cdf_1d(P, y) - cdf_1d(Eta, y)); };
    double head = integrate_adaptive(fpe, 1.0, 2.0, 1e-12, 1e-15).value;
    double tail = integrate_adaptive(
        [&](double u) {
            double y = 1.0 / u;
            return fpe(y) * y * y;
        },
        0.0, 0.5, 1e-12, 1e-15).value;
    rep.w1_p_eta = head + tail;

    auto eta_density = [&](double x) { return density(Eta, &x); };
    auto q_density = [&](double x) { return density(Q, &x); };

    SupportSpec tail_support;
    tail_support.q_positive = {{2.0, infinity()}};
    rep.tail_integral =
        divergence_quadrature(eta_density, q_density, a, tail_support).value;

    SupportSpec full_support;
    full_support.q_positive = {{0.0, 1.0}, {2.0, infinity()}};
    rep.d_eta_q = divergence_quadrature(eta_density, q_density, a, full_support).value;
    rep.bound = rep.d_eta_q + L * rep.w1_p_eta;

    CounterRng root(seed);
    SampleSet p_n = sample_example1(Example1Kind::P, delta, n, root.spawn(1).seed());
    SampleSet q_n = sample_example1(Example1Kind::Q, delta, n, root.spawn(2).seed());
    DiscreteDualOptions opt;
    opt.tol = 1e-6;
    opt.max_iter = 5000;
    DualPotential sol = solve_discrete_dual(p_n, q_n, a, L, opt);
    rep.dual_estimate = sol.objective;
    rep.sample_n = n;
    rep.estimate_within_bound = rep.dual_estimate <= rep.bound + estimate_slack;
    return rep;
}

std::vector<std::string> check_rate_preconditions(int d, double alpha,
                                                  double beta1, double beta2) {
    std::vector<std::string> warnings;
    auto need = [&](bool ok, const std::string& what) {
        if (!ok) warnings.push_back(what);
    };
    if (!(alpha > 1.0)) {
        warnings.push_back("alpha must exceed 1");
        return warnings;
    }
    double conj = alpha / (alpha - 1.0);
    char buf[160];
    if (d == 1) {
        need(beta1 > 7.0, "d=1 requires beta1 > 7");
        need(beta2 > 13.0, "d=1 requires beta2 > 13");
        std::snprintf(buf, sizeof(buf), "d=1 requires 2a/(a-1)+4 < beta1-1 (%.3g vs %.3g)",
                      2.0 * conj + 4.0, beta1 - 1.0);
        need(2.0 * conj + 4.0 < beta1 - 1.0, buf);
        std::snprintf(buf, sizeof(buf), "d=1 requires 6a/(a-1) < beta2-7 (%.3g vs %.3g)",
                      6.0 * conj, beta2 - 7.0);
        need(6.0 * conj < beta2 - 7.0, buf);
    } else if (d == 2) {
        need(beta1 > 10.0, "d=2 requires beta1 > 10");
        need(beta2 > 18.0, "d=2 requires beta2 > 18");
        std::snprintf(buf, sizeof(buf), "d=2 requires 4a/(a-1)+4 < beta1-2 (%.3g vs %.3g)",
                      4.0 * conj + 4.0, beta1 - 2.0);
        need(4.0 * conj + 4.0 < beta1 - 2.0, buf);
        std::snprintf(buf, sizeof(buf), "d=2 requires 8a/(a-1) < beta2-10 (%.3g vs %.3g)",
                      8.0 * conj, beta2 - 10.0);
        need(8.0 * conj < beta2 - 10.0, buf);
    } else {
        need(beta1 > 3.0 * d, "d>=3 requires beta1 > 3d");
        need(beta2 > 5.0 * d, "d>=3 requires beta2 > 5d");
        std::snprintf(buf, sizeof(buf), "d>=3 requires 2da/(a-1) < beta1-d (%.3g vs %.3g)",
                      2.0 * d * conj, beta1 - d);
        need(2.0 * d * conj < beta1 - d, buf);
        std::snprintf(buf, sizeof(buf), "d>=3 requires 2a/(a-1) < beta2/d-3 (%.3g vs %.3g)",
                      2.0 * conj, beta2 / d - 3.0);
        need(2.0 * conj < beta2 / d - 3.0, buf);
    }
    return warnings;
}

RateStudyResult rate_study(const RateStudyConfig& cfg) {
    if (cfg.sizes.size() < 4)
        throw std::invalid_argument("rate_study: need at least 4 sizes for a slope fit");
    if (cfg.n_seeds == 0) throw std::invalid_argument("rate_study: need seeds");

    RateStudyResult out;
    out.sizes = cfg.sizes;
    double beta = cfg.nu + cfg.dim;
    out.warnings = check_rate_preconditions(cfg.dim, cfg.alpha, beta, beta);

    AlphaValue a = AlphaValue::power(cfg.alpha);
    CounterRng root(cfg.seed);
    out.errors.resize(cfg.sizes.size());

    // P = Q design: two independent samples of the same law, true value 0,
    // so the divergence estimate itself is the absolute error.
    for (std::size_t si = 0; si < cfg.sizes.size(); ++si) {
        std::size_t n = cfg.sizes[si];
        for (std::size_t s = 0; s < cfg.n_seeds; ++s) {
            CounterRng cell = root.spawn(si * 1000 + s);
            SampleSet p = sample_student_t(cfg.dim, cfg.nu, n, cell.spawn(1).seed());
            SampleSet q = sample_student_t(cfg.dim, cfg.nu, n, cell.spawn(2).seed());
            double est = 0.0;
            if (cfg.method == EstimatorMethod::Exact) {
                DiscreteDualOptions opt;
                opt.tol = 1e-6;
                opt.max_iter = 4000;
                opt.check_cap = true;
                est = solve_discrete_dual(p, q, a, cfg.L, opt).objective;
            } else {
                TrainConfig tc;
                tc.hidden = {32, 32, 32};
                tc.iterations = 1500;
                tc.batch_p = tc.batch_q = 128;
                tc.eval_window = 100;
                tc.seed = cell.spawn(3).seed();
                est = estimate_dual(p, q, a, cfg.L, tc).estimate;
            }
            out.errors[si].push_back(std::abs(est));
        }
    }

    out.mean_error.resize(cfg.sizes.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t si = 0; si < cfg.sizes.size(); ++si) {
        double m = 0.0;
        for (double e : out.errors[si]) m += e;
        m /= static_cast<double>(out.errors[si].size());
        out.mean_error[si] = m;
        double X = std::log(static_cast<double>(cfg.sizes[si]));
        double Y = std::log(std::max(m, 1e-300));
        sx += X;
        sy += Y;
        sxx += X * X;
        sxy += X * Y;
    }
    double k = static_cast<double>(cfg.sizes.size());
    out.slope = (k * sxy - sx * sy) / (k * sxx - sx * sx);
    out.intercept = (sy - out.slope * sx) / k;
    return out;
}

StudentTBenchResult run_student_t_benchmark(const StudentTBenchConfig& cfg) {
    if (!(cfg.nu > 0.0)) throw std::invalid_argument("benchmark: nu must be positive");
    StudentTBenchResult out;
    AlphaValue a = AlphaValue::power(cfg.alpha);

    // Shared target sample and ground-truth rCCDF grid.
    SampleSet target = sample_student_t(2, cfg.nu, cfg.n_target, 0x5EED0);
    std::vector<double> radii = target.radii();
    out.grid = default_radius_grid(radii);
    out.truth.resize(out.grid.size());
    for (std::size_t i = 0; i < out.grid.size(); ++i)
        out.truth[i] = rccdf_truth_student_t(cfg.nu, 2, out.grid[i]);

    // Run-away threshold: 10x the target's 99.9th percentile radius.
    std::vector<double> sorted = radii;
    std::sort(sorted.begin(), sorted.end());
    double pct999 = sorted[static_cast<std::size_t>(0.999 * (sorted.size() - 1))];
    double runaway_radius = 10.0 * pct999;

    std::vector<bool> modes;
    if (cfg.run_lipschitz) modes.push_back(true);
    if (cfg.run_unconstrained) modes.push_back(false);

    for (bool lipschitz : modes) {
        for (std::uint64_t seed : cfg.seeds) {
            GpaSchedule sched = cfg.schedule;
            sched.seed = seed;
            GpaMode mode = lipschitz ? GpaMode::w1_proximal(cfg.L)
                                     : GpaMode::unconstrained();
            GpaResult run = gpa_run(target, cfg.n_particles, {}, cfg.prior_scale, a,
                                    mode, sched, out.grid, out.truth);
            StudentTBenchRow row;
            row.lipschitz = lipschitz;
            row.seed = seed;
            row.l1_error = run.diagnostics.rccdf_l1.empty()
                               ? 0.0
                               : run.diagnostics.rccdf_l1.back();
            row.max_speed = 0.0;
            for (double s : run.diagnostics.max_speed)
                row.max_speed = std::max(row.max_speed, s);
            row.speed_cap = sched.eta * cfg.L * (1.0 + 1e-3);
            row.runaway_count = 0;
            const std::size_t np = run.particles.count();
            for (std::size_t i = 0; i < np; ++i) {
                const double* x = run.particles.positions.data() + i * 2;
                if (std::sqrt(x[0] * x[0] + x[1] * x[1]) > runaway_radius)
                    ++row.runaway_count;
            }
            out.rows.push_back(row);
        }
    }
    return out;
}

SampleSet ingest_csv(const std::string& path) { return SampleSet::load_csv(path); }

std::map<std::string, std::string> load_config(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("load_config: cannot open " + path);
    std::map<std::string, std::string> kv;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        std::size_t start = line.find_first_not_of(" \t");
        if (start == std::string::npos || line[start] == '#') continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                     ": expected key=value");
        auto trim = [](std::string s) {
            std::size_t b = s.find_first_not_of(" \t");
            std::size_t e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            throw std::runtime_error(path + ":" + std::to_string(lineno) + ": empty key");
        kv[key] = value;
    }
    return kv;
}

std::string CsvWriter::format(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void CsvWriter::header(const std::vector<std::string>& cols) {
    for (std::size_t i = 0; i < cols.size(); ++i) {
        if (i) os_ << ",";
        os_ << cols[i];
    }
    os_ << "\n";
}

void CsvWriter::row(const std::vector<double>& values) {
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) os_ << ",";
        os_ << format(values[i]);
    }
    os_ << "\n";
}

void CsvWriter::row_mixed(const std::vector<std::string>& values) {
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) os_ << ",";
        os_ << values[i];
    }
    os_ << "\n";
}

}  // namespace wprox
