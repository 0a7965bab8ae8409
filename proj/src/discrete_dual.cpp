#include "wprox/discrete_dual.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "wprox/wasserstein.hpp"

namespace wprox {

namespace {

struct Pair {
    std::size_t i, j;
    double cap;  // L * distance
};

// Cyclic sweeps in fixed pair order; every violated pair is moved
// symmetrically onto its constraint until the worst violation is below tol.
// Returns the achieved violation.
double sweep_project(std::vector<double>& g, const std::vector<Pair>& pairs,
                     double tol, int max_sweeps) {
    auto max_violation = [&]() {
        double worst = 0.0;
        for (const Pair& p : pairs)
            worst = std::max(worst, std::abs(g[p.i] - g[p.j]) - p.cap);
        return worst;
    };
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        double sweep_excess = 0.0;
        for (const Pair& p : pairs) {
            double diff = g[p.i] - g[p.j];
            double excess = std::abs(diff) - p.cap;
            if (excess > 0.0) {
                sweep_excess = std::max(sweep_excess, excess);
                double shift = 0.5 * excess * (diff > 0.0 ? 1.0 : -1.0);
                g[p.i] -= shift;
                g[p.j] += shift;
            }
        }
        if (sweep_excess <= 0.5 * tol && max_violation() <= tol) break;
    }
    return std::max(max_violation(), 0.0);
}

struct JointSupport {
    std::vector<double> points;  // N x d
    std::vector<double> pw, qw;
    std::vector<std::size_t> q_index;  // indices with qw > 0
    int dim = 0;
    std::size_t size() const { return pw.size(); }
};

JointSupport merge_supports(const SampleSet& p, const SampleSet& q) {
    JointSupport js;
    js.dim = p.dim();
    std::map<std::vector<double>, std::size_t> seen;
    auto add = [&](const double* x, double w, bool is_p) {
        std::vector<double> key(x, x + js.dim);
        auto [it, inserted] = seen.emplace(std::move(key), js.size());
        if (inserted) {
            js.points.insert(js.points.end(), x, x + js.dim);
            js.pw.push_back(0.0);
            js.qw.push_back(0.0);
        }
        (is_p ? js.pw : js.qw)[it->second] += w;
    };
    for (std::size_t i = 0; i < p.size(); ++i) add(p.point(i), p.weight(i), true);
    for (std::size_t j = 0; j < q.size(); ++j) add(q.point(j), q.weight(j), false);
    for (std::size_t i = 0; i < js.size(); ++i)
        if (js.qw[i] > 0.0) js.q_index.push_back(i);
    return js;
}

// On the line the adjacent constraints imply all others (distances are
// additive), so the polytope reduces to a chain over the sorted support.
std::vector<Pair> build_pairs(const JointSupport& js, double L) {
    std::vector<Pair> pairs;
    std::size_t n = js.size();
    if (js.dim == 1) {
        std::vector<std::size_t> order(n);
        for (std::size_t i = 0; i < n; ++i) order[i] = i;
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return js.points[a] < js.points[b];
        });
        for (std::size_t k = 0; k + 1 < n; ++k) {
            double d = js.points[order[k + 1]] - js.points[order[k]];
            pairs.push_back({order[k], order[k + 1], L * d});
        }
    } else {
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) {
                double d = euclidean_distance(js.points.data() + i * js.dim,
                                              js.points.data() + j * js.dim, js.dim);
                pairs.push_back({i, j, L * d});
            }
    }
    return pairs;
}

double support_diameter(const JointSupport& js) {
    if (js.dim == 1) {
        double lo = js.points[0], hi = js.points[0];
        for (double x : js.points) {
            lo = std::min(lo, x);
            hi = std::max(hi, x);
        }
        return hi - lo;
    }
    double best = 0.0;
    for (std::size_t i = 0; i < js.size(); ++i)
        for (std::size_t j = i + 1; j < js.size(); ++j)
            best = std::max(best, euclidean_distance(js.points.data() + i * js.dim,
                                                     js.points.data() + j * js.dim,
                                                     js.dim));
    return best;
}

// Inverse of the conjugate derivative: the y at which f*' equals z.
double inv_conjugate_prime(double z, const AlphaValue& a) {
    if (a.is_kl()) return z > 0.0 ? 1.0 + std::log(z) : -1e306;
    if (z <= 0.0) return 0.0;  // boundary of the flat region
    return std::pow(z, a.alpha() - 1.0) / (a.alpha() - 1.0);
}

}  // namespace

std::vector<double> project_lipschitz(std::vector<double> gamma,
                                      const std::vector<double>& distances,
                                      std::size_t n, double L, double tol) {
    if (gamma.size() != n || distances.size() != n * n)
        throw std::invalid_argument("project_lipschitz: size mismatch");
    std::vector<Pair> pairs;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            double dij = distances[i * n + j];
            if (!(dij >= 0.0) || std::abs(dij - distances[j * n + i]) > 1e-12)
                throw std::invalid_argument(
                    "project_lipschitz: distance matrix must be symmetric nonnegative");
            pairs.push_back({i, j, L * dij});
        }
    sweep_project(gamma, pairs, tol, 200000);
    return gamma;
}

DualPotential solve_discrete_dual(const SampleSet& p, const SampleSet& q,
                                  const AlphaValue& a, double L,
                                  const DiscreteDualOptions& opt) {
    if (p.dim() != q.dim())
        throw std::invalid_argument("solve_discrete_dual: dimension mismatch");
    if (!a.dual_supported())
        throw std::invalid_argument("solve_discrete_dual: requires alpha >= 1 (power or KL)");
    if (!(L > 0.0)) throw std::invalid_argument("solve_discrete_dual: L must be positive");

    JointSupport js = merge_supports(p, q);
    const std::size_t n = js.size();
    std::vector<Pair> pairs = build_pairs(js, L);

    // Constraint adjacency and a chain-friendly visiting order for the
    // coordinate polish.
    std::vector<std::vector<std::pair<std::size_t, double>>> adj(n);
    for (const Pair& pr : pairs) {
        adj[pr.i].push_back({pr.j, pr.cap});
        adj[pr.j].push_back({pr.i, pr.cap});
    }
    std::vector<std::size_t> polish_order(n);
    for (std::size_t i = 0; i < n; ++i) polish_order[i] = i;
    if (js.dim == 1)
        std::sort(polish_order.begin(), polish_order.end(),
                  [&](std::size_t x, std::size_t y) { return js.points[x] < js.points[y]; });

    // Exact Lipschitz retraction: the infimal convolution
    // c_i = min_j (v_j + L |x_i - x_j|) and its supremal counterpart
    // C_i = max_j (v_j - L |x_i - x_j|) are both feasible by the triangle
    // inequality, leave feasible inputs unchanged, and bracket v; their
    // midpoint is a feasible, bias-balanced retraction. O(N) on the sorted
    // line, O(N^2) otherwise.
    std::vector<double> lo_env(n), hi_env(n), scratch(n);
    auto lipschitz_retract = [&](std::vector<double>& v) {
        if (js.dim == 1) {
            double run_lo = v[polish_order[0]], run_hi = v[polish_order[0]];
            lo_env[0] = run_lo;
            hi_env[0] = run_hi;
            for (std::size_t k = 1; k < n; ++k) {
                double x = v[polish_order[k]], cap = pairs[k - 1].cap;
                run_lo = std::min(x, run_lo + cap);
                run_hi = std::max(x, run_hi - cap);
                lo_env[k] = run_lo;
                hi_env[k] = run_hi;
            }
            run_lo = v[polish_order[n - 1]];
            run_hi = run_lo;
            for (std::size_t k = n - 1; k-- > 0;) {
                double x = v[polish_order[k]], cap = pairs[k].cap;
                run_lo = std::min(x, run_lo + cap);
                run_hi = std::max(x, run_hi - cap);
                lo_env[k] = std::min(lo_env[k], run_lo);
                hi_env[k] = std::max(hi_env[k], run_hi);
            }
            for (std::size_t k = 0; k < n; ++k)
                v[polish_order[k]] = 0.5 * (lo_env[k] + hi_env[k]);
        } else {
            scratch = v;
            lo_env = v;
            hi_env = v;
            for (const Pair& pr : pairs) {
                lo_env[pr.i] = std::min(lo_env[pr.i], scratch[pr.j] + pr.cap);
                lo_env[pr.j] = std::min(lo_env[pr.j], scratch[pr.i] + pr.cap);
                hi_env[pr.i] = std::max(hi_env[pr.i], scratch[pr.j] - pr.cap);
                hi_env[pr.j] = std::max(hi_env[pr.j], scratch[pr.i] - pr.cap);
            }
            for (std::size_t i = 0; i < n; ++i) v[i] = 0.5 * (lo_env[i] + hi_env[i]);
        }
    };

    // Potential magnitude cap: |gamma| stays within the bracket the bounded
    // measures admit, 1/(alpha-1) (resp. 1 for KL) plus L times the support
    // diameter. Clamping is 1-Lipschitz, so it preserves feasibility.
    double diam = support_diameter(js);
    double bracket = (a.is_kl() ? 1.0 : 1.0 / (a.alpha() - 1.0)) + L * diam;

    std::vector<double> q_weights(js.q_index.size());
    for (std::size_t k = 0; k < js.q_index.size(); ++k)
        q_weights[k] = js.qw[js.q_index[k]];

    std::vector<double> gamma(n, 0.0), q_gamma(js.q_index.size());
    auto shift_for = [&](const std::vector<double>& g) {
        for (std::size_t k = 0; k < js.q_index.size(); ++k)
            q_gamma[k] = g[js.q_index[k]];
        return shift_functional(q_gamma, q_weights, a, 1e-10);
    };
    auto objective_at = [&](const std::vector<double>& g, ShiftResult& sr) {
        sr = shift_for(g);
        double acc = 0.0;
        for (std::size_t i = 0; i < n; ++i) acc += js.pw[i] * g[i];
        return acc - sr.lambda_value;
    };

    ShiftResult sr;
    double fval = objective_at(gamma, sr);

    // One Gauss-Seidel pass of exact coordinate maximization at fixed nu;
    // every move stays inside the box its constraint neighbors allow, so a
    // feasible input remains feasible. Alternating sweep direction speeds up
    // propagation along chains.
    bool polish_forward = true;
    auto polish_pass = [&](std::vector<double>& g, double nu) {
        auto update = [&](std::size_t i) {
            double lo = -bracket, hi = bracket;
            for (const auto& [j, cap] : adj[i]) {
                lo = std::max(lo, g[j] - cap);
                hi = std::min(hi, g[j] + cap);
            }
            if (lo > hi) return;  // squeezed box from residual violations
            double target;
            if (js.qw[i] > 0.0)
                target = nu + inv_conjugate_prime(js.pw[i] / js.qw[i], a);
            else
                target = hi;  // pure P atom pushes to the top of its box
            g[i] = std::clamp(target, lo, hi);
        };
        if (polish_forward)
            for (std::size_t k = 0; k < n; ++k) update(polish_order[k]);
        else
            for (std::size_t k = n; k-- > 0;) update(polish_order[k]);
        polish_forward = !polish_forward;
    };

    DualPotential best;
    best.dim = js.dim;
    best.joint_points = js.points;
    best.p_weights = js.pw;
    best.q_weights = js.qw;
    best.gamma = gamma;
    best.nu = sr.nu_star;
    best.objective = fval;

    std::vector<double> grad(n), dir(n), cand(n), trial(n), saved(n);
    int iter = 0;
    bool converged = false;
    int stall_count = 0;
    double dir_scale = 1.0;  // grows on clean full steps, shrinks on backtracks

    auto try_adopt = [&](const std::vector<double>& g, double f, double nu) {
        if (f > best.objective) {
            best.gamma = g;
            best.nu = nu;
            best.objective = f;
        }
    };

    for (; iter < opt.max_iter; ++iter) {
        bool improved = false;

        // Gradient phase: envelope gradient of the shift-reduced objective,
        // scaled ascent in the measure-weighted metric, exact Lipschitz
        // retraction, Armijo along the feasible segment.
        for (std::size_t i = 0; i < n; ++i) {
            grad[i] = js.pw[i] - js.qw[i] * f_alpha_star_prime(gamma[i] - sr.nu_star, a);
            dir[i] = dir_scale * grad[i] / (js.pw[i] + js.qw[i]);
        }
        cand = gamma;
        for (std::size_t i = 0; i < n; ++i) cand[i] += dir[i];
        lipschitz_retract(cand);
        for (double& v : cand) v = std::clamp(v, -bracket, bracket);

        double step_norm = 0.0, inner = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double dlt = cand[i] - gamma[i];
            step_norm += dlt * dlt;
            inner += grad[i] * dlt;
        }
        step_norm = std::sqrt(step_norm);

        if (inner > 0.0) {
            double t = 1.0;
            bool accepted = false;
            for (int h = 0; h < opt.max_halvings; ++h) {
                if (h == 0) {
                    trial = cand;
                } else {
                    for (std::size_t i = 0; i < n; ++i)
                        trial[i] = gamma[i] + t * (cand[i] - gamma[i]);
                }
                ShiftResult sr_trial;
                double f_trial = objective_at(trial, sr_trial);
                if (!std::isfinite(f_trial))
                    throw std::runtime_error("solve_discrete_dual: non-finite objective");
                if (f_trial >= fval + opt.armijo * t * inner) {
                    gamma.swap(trial);
                    if (f_trial > fval + 1e-14 * (1.0 + std::abs(fval))) improved = true;
                    fval = f_trial;
                    sr = sr_trial;
                    accepted = true;
                    break;
                }
                t *= 0.5;
            }
            if (accepted && t == 1.0)
                dir_scale = std::min(dir_scale * 2.0, 1024.0);
            else
                dir_scale = std::max(dir_scale * 0.5, 1.0);
            try_adopt(gamma, fval, sr.nu_star);
        } else {
            dir_scale = std::max(dir_scale * 0.5, 1.0);
        }

        // Coordinate polish: exact per-coordinate maximization of the fixed
        // shift objective against the neighbor boxes; adopted only when it
        // improves the shift-reduced objective.
        saved = gamma;
        polish_pass(gamma, sr.nu_star);
        ShiftResult sr_pol;
        double f_pol = objective_at(gamma, sr_pol);
        if (f_pol > fval) {
            if (f_pol > fval + 1e-14 * (1.0 + std::abs(fval))) improved = true;
            fval = f_pol;
            sr = sr_pol;
            try_adopt(gamma, fval, sr.nu_star);
        } else {
            gamma.swap(saved);
        }

        if (step_norm <= opt.tol && !improved) {
            converged = true;
            break;
        }
        // The retraction is not idempotent, so the step norm alone can stay
        // noisy at the optimum; a sustained objective stall is the practical
        // convergence signal.
        stall_count = improved ? 0 : stall_count + 1;
        if (stall_count >= opt.stall_iters) {
            converged = true;
            break;
        }
    }

    // The retraction and polish keep iterates feasible to rounding; one last
    // retraction clears accumulated dust and the exact objective of the
    // returned potential is the certified value.
    lipschitz_retract(best.gamma);
    for (double& v : best.gamma) v = std::clamp(v, -bracket, bracket);
    double last_violation = 0.0;
    for (const Pair& pr : pairs)
        last_violation = std::max(
            last_violation, std::abs(best.gamma[pr.i] - best.gamma[pr.j]) - pr.cap);
    last_violation = std::max(last_violation, 0.0);
    {
        ShiftResult sr_best;
        best.objective = objective_at(best.gamma, sr_best);
        best.nu = sr_best.nu_star;
    }

    best.iterations = iter;
    best.converged = converged;
    best.feasibility_violation = last_violation;

    best.corollary3_cap = L * (js.dim == 1 ? w1_1d(p, q) : w1_exact(p, q));
    if (opt.check_cap) {
        double slack = std::max(1e-6 * (1.0 + std::abs(best.corollary3_cap)), 10.0 * opt.tol);
        if (best.objective > best.corollary3_cap + slack)
            throw std::logic_error("solve_discrete_dual: objective exceeds the L*W1 cap");
    }
    return best;
}

}  // namespace wprox
